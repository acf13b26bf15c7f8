"""Exact sampling from the ring's Gibbs distribution.

Shots are drawn at the wall-count level by inverse-CDF lookup on the exact
PMF (no Markov chain is involved), so a SampleSet is an i.i.d. sample from
the target distribution by construction. Full spin configurations are
materialized only on demand: given a wall count, the wall bonds are placed
uniformly at random and the spins propagated around the ring, which is the
maximum-entropy choice among configurations with that count.

All randomness flows through ``numpy.random.default_rng`` (PCG64, 128-bit
state); identical seeds reproduce identical samples.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import DomainError, ParityError
from .ising import DomainWallPmf, RingSpec, domain_wall_pmf

__all__ = [
    "SampleSet",
    "EmpiricalHistogram",
    "sample_counts",
    "draw_counts",
    "realize_config",
    "realize_configs",
    "count_domain_walls",
    "empirical_histogram",
    "histogram_from_counts",
]


@dataclass(eq=False)
class SampleSet:
    """Observed wall counts for one ring, one count per shot."""

    ring: RingSpec
    counts: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.counts = np.asarray(self.counts, dtype=np.int64)
        if self.counts.ndim != 1 or self.counts.size < 1:
            raise DomainError("counts must be a non-empty 1-D array")
        if np.any((self.counts < 1) | (self.counts > self.ring.n_qb)):
            raise DomainError("wall counts must lie in [1, n_qb]")
        if np.any(self.counts % 2 == 0):
            bad = int(self.counts[self.counts % 2 == 0][0])
            raise ParityError(f"even wall count {bad} is impossible on an odd ring")

    @property
    def shots(self) -> int:
        return int(self.counts.size)


@dataclass(eq=False)
class EmpiricalHistogram:
    """Normalized wall-count frequencies over the full odd support."""

    ring: RingSpec
    freq: np.ndarray

    def __post_init__(self):
        self.freq = np.asarray(self.freq, dtype=np.float64)
        if self.freq.shape != ((self.ring.n_qb + 1) // 2,):
            raise DomainError("freq must cover the odd support 1..n_qb")
        if np.any(self.freq < 0) or abs(self.freq.sum() - 1.0) > 1e-12:
            raise DomainError("freq must be nonnegative and sum to 1")

    @property
    def support(self) -> np.ndarray:
        return self.ring.support

    def mean_density(self) -> float:
        return float(np.dot(self.support, self.freq)) / self.ring.n_qb


def draw_counts(pmf: DomainWallPmf, shots: int, rng: np.random.Generator) -> np.ndarray:
    """``shots`` i.i.d. wall counts from ``pmf`` by inverse-CDF lookup."""
    if shots < 1:
        raise DomainError(f"shots must be >= 1, got {shots}")
    cdf = np.cumsum(pmf.probs)
    cdf[-1] = 1.0
    idx = np.searchsorted(cdf, rng.random(shots), side="right")
    return pmf.support[idx]


def sample_counts(t, ring: RingSpec, shots: int, seed: int) -> SampleSet:
    """Seeded i.i.d. sample of wall counts at temperature ``t``."""
    pmf = domain_wall_pmf(t, ring)
    rng = np.random.default_rng(seed)
    counts = draw_counts(pmf, shots, rng)
    meta = {"source": "synthetic", "seed": int(seed), "t": float(pmf.t), "shots": int(shots)}
    return SampleSet(ring, counts, meta)


def realize_configs(
    ring: RingSpec, wall_counts: np.ndarray, rng: np.random.Generator
) -> np.ndarray:
    """Batch of spin rows, row i uniform among configs with wall_counts[i] walls."""
    wall_counts = np.asarray(wall_counts, dtype=np.int64)
    n = ring.n_qb
    if np.any((wall_counts < 1) | (wall_counts > n)):
        raise DomainError("wall counts must lie in [1, n_qb]")
    if np.any(wall_counts % 2 == 0):
        raise ParityError("even wall counts are impossible on an odd ring")
    sel_u = rng.random((wall_counts.size, int(wall_counts.max())))
    sign_bits = rng.integers(0, 2, size=wall_counts.size, dtype=np.uint8)
    return kernels.realize_configs(n, wall_counts, sel_u, sign_bits)


def realize_config(ring: RingSpec, n_dw: int, seed: int) -> np.ndarray:
    """One uniformly random configuration with exactly ``n_dw`` walls."""
    n_dw = int(n_dw)
    if n_dw % 2 == 0:
        raise ParityError(f"wall count must be odd on an odd ring, got {n_dw}")
    if not 1 <= n_dw <= ring.n_qb:
        raise DomainError(f"wall count must lie in [1, {ring.n_qb}], got {n_dw}")
    rng = np.random.default_rng(seed)
    return realize_configs(ring, np.array([n_dw]), rng)[0]


def _check_config(config) -> np.ndarray:
    spins = np.asarray(config)
    if spins.ndim != 1 or spins.size < 3 or spins.size % 2 == 0:
        raise DomainError("a spin configuration is a 1-D odd-length sequence, length >= 3")
    if not np.all(np.abs(spins) == 1):
        raise DomainError("spins must be +-1")
    return spins.astype(np.int8)


def count_domain_walls(config) -> int:
    """Number of cyclically adjacent equal-spin pairs; odd on an odd ring."""
    spins = _check_config(config)
    return int(kernels.count_walls_batch(spins[None, :])[0])


def histogram_from_counts(ring: RingSpec, counts: np.ndarray) -> EmpiricalHistogram:
    """Normalized histogram over the full odd support, zeros retained."""
    counts = np.asarray(counts, dtype=np.int64)
    idx = (counts - 1) // 2
    freq = np.bincount(idx, minlength=(ring.n_qb + 1) // 2).astype(np.float64)
    return EmpiricalHistogram(ring, freq / counts.size)


def empirical_histogram(samples: SampleSet) -> EmpiricalHistogram:
    return histogram_from_counts(samples.ring, samples.counts)

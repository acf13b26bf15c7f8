"""Hot numeric kernels: numba-jitted loops with a pure-numpy fallback.

Three operations dominate runtime at scale and get paired implementations:

* ``wall_degeneracy`` -- enumerate all 2^n ring configurations and count how
  many carry each odd number of domain walls (the brute-force oracle's core).
* ``count_walls_batch`` -- domain walls per row for a batch of spin rows.
* ``realize_configs`` -- materialize spin rows with prescribed wall counts
  from pre-drawn uniforms (Fisher-Yates bond selection, then propagation).

Backend selection: numba is used when importable unless the environment
variable ``RINGTHERM_NO_NUMBA`` is set to a non-empty value other than
``"0"``. Both backends consume the same pre-drawn random inputs and apply
the same arithmetic, so their outputs are bit-identical; randomness always
comes from numpy Generators outside the kernels. ``benchmarks/bench_kernels.py``
times the two paths against each other.
"""

from __future__ import annotations

import os

import numpy as np

__all__ = [
    "BACKEND",
    "IMPLEMENTATIONS",
    "count_walls_batch",
    "realize_configs",
    "wall_degeneracy",
]


def _numba_requested() -> bool:
    flag = os.environ.get("RINGTHERM_NO_NUMBA", "")
    return flag in ("", "0")


# ---------------------------------------------------------------------------
# pure-numpy implementations
# ---------------------------------------------------------------------------

def _wall_degeneracy_np(n_qb: int) -> np.ndarray:
    """Configurations per odd wall count, by vectorized bit twiddling.

    Spins are the bits of 0 .. 2^n - 1; bond i is a wall iff bits i and
    i+1 (cyclically) agree, so the wall count is n minus the popcount of
    ``c XOR rotl(c)``.
    """
    size = 1 << n_qb
    mask = np.uint32(size - 1)
    c = np.arange(size, dtype=np.uint32)
    rot = ((c << np.uint32(1)) | (c >> np.uint32(n_qb - 1))) & mask
    walls = n_qb - np.bitwise_count(c ^ rot).astype(np.int64)
    hist = np.bincount(walls, minlength=n_qb + 1)
    return hist[1::2].astype(np.int64)


def _count_walls_batch_np(spins: np.ndarray) -> np.ndarray:
    spins = np.ascontiguousarray(spins)
    return (spins == np.roll(spins, -1, axis=1)).sum(axis=1).astype(np.int64)


def _realize_configs_np(n_qb, wall_counts, sel_u, sign_bits):
    """Rows of +-1 spins with row i carrying exactly ``wall_counts[i]`` walls.

    ``sel_u[i, :wall_counts[i]]`` drive a Fisher-Yates draw of wall bond
    positions without replacement; ``sign_bits[i]`` fixes spin 0. Bond j
    joins spins j and j+1 (mod n); a non-wall bond flips the sign.
    """
    m = wall_counts.shape[0]
    max_k = int(wall_counts.max())
    pos = np.broadcast_to(np.arange(n_qb, dtype=np.int64), (m, n_qb)).copy()
    rows = np.arange(m)
    for j in range(max_k):
        active = rows[j < wall_counts]
        pick = j + (sel_u[active, j] * (n_qb - j)).astype(np.int64)
        tmp = pos[active, j].copy()
        pos[active, j] = pos[active, pick]
        pos[active, pick] = tmp
    wall = np.zeros((m, n_qb), dtype=np.int64)
    chosen = np.arange(max_k)[None, :] < wall_counts[:, None]
    wall[np.repeat(rows, wall_counts), pos[:, :max_k][chosen]] = 1
    bits = np.zeros((m, n_qb), dtype=np.int64)
    bits[:, 1:] = np.cumsum(1 - wall[:, : n_qb - 1], axis=1)
    bits = (bits + sign_bits[:, None].astype(np.int64)) & 1
    return (1 - 2 * bits).astype(np.int8)


# ---------------------------------------------------------------------------
# numba implementations (compiled lazily on first import attempt)
# ---------------------------------------------------------------------------

def _build_numba_impls():
    from numba import njit

    @njit(cache=True)
    def wall_degeneracy_nb(n_qb):
        size = 1 << n_qb
        mask = size - 1
        hist = np.zeros(n_qb + 1, np.int64)
        for c in range(size):
            rot = ((c << 1) | (c >> (n_qb - 1))) & mask
            d = c ^ rot
            diff = 0
            while d:
                d &= d - 1
                diff += 1
            hist[n_qb - diff] += 1
        return hist[1::2].copy()

    @njit(cache=True)
    def count_walls_batch_nb(spins):
        m, n = spins.shape
        out = np.empty(m, np.int64)
        for i in range(m):
            walls = 0
            for j in range(n - 1):
                if spins[i, j] == spins[i, j + 1]:
                    walls += 1
            if spins[i, n - 1] == spins[i, 0]:
                walls += 1
            out[i] = walls
        return out

    @njit(cache=True)
    def realize_configs_nb(n_qb, wall_counts, sel_u, sign_bits):
        m = wall_counts.shape[0]
        out = np.empty((m, n_qb), np.int8)
        pos = np.empty(n_qb, np.int64)
        wall = np.empty(n_qb, np.uint8)
        for i in range(m):
            k = wall_counts[i]
            for j in range(n_qb):
                pos[j] = j
                wall[j] = 0
            for j in range(k):
                pick = j + int(sel_u[i, j] * (n_qb - j))
                tmp = pos[j]
                pos[j] = pos[pick]
                pos[pick] = tmp
            for j in range(k):
                wall[pos[j]] = 1
            bit = np.int64(sign_bits[i]) & 1
            out[i, 0] = 1 - 2 * bit
            for j in range(1, n_qb):
                bit = (bit + 1 - wall[j - 1]) & 1
                out[i, j] = 1 - 2 * bit
        return out

    return {
        "wall_degeneracy": wall_degeneracy_nb,
        "count_walls_batch": count_walls_batch_nb,
        "realize_configs": realize_configs_nb,
    }


IMPLEMENTATIONS = {
    "numpy": {
        "wall_degeneracy": _wall_degeneracy_np,
        "count_walls_batch": _count_walls_batch_np,
        "realize_configs": _realize_configs_np,
    }
}

BACKEND = "numpy"
if _numba_requested():
    try:
        IMPLEMENTATIONS["numba"] = _build_numba_impls()
        BACKEND = "numba"
    except ImportError:
        pass

wall_degeneracy = IMPLEMENTATIONS[BACKEND]["wall_degeneracy"]
count_walls_batch = IMPLEMENTATIONS[BACKEND]["count_walls_batch"]
realize_configs = IMPLEMENTATIONS[BACKEND]["realize_configs"]

"""Effective-temperature extraction by total-variation-distance minimization.

The estimator seeds itself by inverting the exact mean-density curve at the
histogram's observed density, then refines with a guarded one-dimensional
line search (bracket with geometric expansion, then Brent-style
golden-section/parabolic steps) on eps(t) = TVD(hist, pmf(t)). The best
point ever evaluated is returned, so a noiseless histogram -- whose density
inversion already lands on the minimizer -- comes back essentially exact.

Degenerate regimes are reported as flags, not errors: a histogram frozen at
one wall per ring (zero_temperature), one within ``high_density_margin`` of
the entropy-bound density 1/2 (high_t_saturation), and any fit whose final
TVD exceeds ``poor_fit_threshold`` (poor_fit).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

from .errors import RingMismatchError, SaturationError
from .ising import DomainWallPmf, RingSpec, check_temperature, invert_mean_density, mean_density
from .sampling import EmpiricalHistogram

__all__ = [
    "FLAG_ZERO_TEMPERATURE",
    "FLAG_HIGH_T_SATURATION",
    "FLAG_POOR_FIT",
    "EstimatorOptions",
    "EstimateResult",
    "tvd",
    "estimate_temperature",
    "classify_regime",
]

FLAG_ZERO_TEMPERATURE = "zero_temperature"
FLAG_HIGH_T_SATURATION = "high_t_saturation"
FLAG_POOR_FIT = "poor_fit"

_GOLDEN = 0.3819660112501051  # 2 - golden ratio


@dataclass(frozen=True)
class EstimatorOptions:
    """Search bounds, convergence tolerances and regime thresholds.

    ``zero_density_margin`` defaults to half the gap between the
    ground-state density 1/n and the density at ``t_min`` for the ring at
    hand (computed per call when left at None).
    """

    t_min: float = 1e-3
    t_max: float = 1e6
    t_tol: float = 1e-6
    max_iterations: int = 100
    bracket_fraction: float = 0.05
    poor_fit_threshold: float = 0.05
    high_density_margin: float = 1e-3
    zero_density_margin: float | None = None

    def resolved_zero_margin(self, ring: RingSpec) -> float:
        if self.zero_density_margin is not None:
            return self.zero_density_margin
        return 0.5 * (mean_density(self.t_min, ring) - 1.0 / ring.n_qb)


DEFAULT_OPTIONS = EstimatorOptions()


@dataclass
class EstimateResult:
    """Extracted temperature, fit quality and degeneracy flags.

    ``t_eff`` is 0.0 for zero_temperature-flagged results (the frozen
    regime has no finite estimate); ``epsilon`` is then the TVD to the
    one-wall point mass.
    """

    t_eff: float
    epsilon: float
    iterations: int
    flags: frozenset = field(default_factory=frozenset)


def tvd(hist: EmpiricalHistogram, pmf: DomainWallPmf) -> float:
    """Total variation distance, half the L1 gap over the odd support."""
    if hist.ring.n_qb != pmf.n_qb:
        raise RingMismatchError(
            f"histogram ring {hist.ring.n_qb} != pmf ring {pmf.n_qb}"
        )
    return 0.5 * float(np.abs(hist.freq - pmf.probs).sum())


def classify_regime(
    hist: EmpiricalHistogram,
    ring: RingSpec | None = None,
    epsilon: float | None = None,
    options: EstimatorOptions = DEFAULT_OPTIONS,
) -> frozenset:
    """Degeneracy flags for a histogram and (optionally) a fit TVD."""
    ring = _resolve_ring(hist, ring)
    flags = set()
    density = hist.mean_density()
    if density <= 1.0 / ring.n_qb + options.resolved_zero_margin(ring):
        flags.add(FLAG_ZERO_TEMPERATURE)
    if density >= 0.5 - options.high_density_margin:
        flags.add(FLAG_HIGH_T_SATURATION)
    if epsilon is not None and epsilon > options.poor_fit_threshold:
        flags.add(FLAG_POOR_FIT)
    return frozenset(flags)


def _resolve_ring(hist: EmpiricalHistogram, ring: RingSpec | None) -> RingSpec:
    if ring is not None and ring.n_qb != hist.ring.n_qb:
        raise RingMismatchError(f"ring {ring.n_qb} != histogram ring {hist.ring.n_qb}")
    return hist.ring if ring is None else ring


class _Objective:
    """eps(t) with the ring's log-binomial table precomputed once."""

    def __init__(self, hist: EmpiricalHistogram):
        n = hist.ring.n_qb
        k = hist.ring.support.astype(np.float64)
        self.k = k
        self.logbinom = (
            math.log(2.0) + gammaln(n + 1.0) - gammaln(k + 1.0) - gammaln(n - k + 1.0)
        )
        self.freq = hist.freq

    def __call__(self, t: float) -> float:
        logw = self.logbinom - 2.0 * self.k / t
        logw -= logw.max()
        w = np.exp(logw)
        probs = w / w.sum()
        return 0.5 * float(np.abs(self.freq - probs).sum())


def _bracket(f, t0: float, opts: EstimatorOptions, best: list):
    """A triple a < m < b with f(m) <= f(a), f(b), grown geometrically.

    Starts from a +-bracket_fraction window around the seed guess and
    doubles the downhill side until the middle point is lowest or a search
    bound pins that side. Every evaluation updates ``best``.
    """

    def ev(t):
        v = f(t)
        if v < best[1]:
            best[0], best[1] = t, v
        return v

    lo, hi = opts.t_min, opts.t_max
    a = max(lo, t0 * (1.0 - opts.bracket_fraction))
    b = min(hi, t0 * (1.0 + opts.bracket_fraction))
    m = min(max(t0, a), b)
    if a == m or m == b:
        m = 0.5 * (a + b)
    fa, fm, fb = ev(a), ev(m), ev(b)
    while fm > fa or fm > fb:
        if fa <= fb:
            if a <= lo:
                return a, m, b, fa, fm, fb
            b, fb = m, fm
            m, fm = a, fa
            a = max(lo, a * 0.5)
            fa = ev(a)
        else:
            if b >= hi:
                return a, m, b, fa, fm, fb
            a, fa = m, fm
            m, fm = b, fb
            b = min(hi, b * 2.0)
            fb = ev(b)
    return a, m, b, fa, fm, fb


def _brent(f, a, b, x, fx, opts: EstimatorOptions, best: list):
    """Brent minimization on [a, b] from interior x; returns iterations."""

    def ev(t):
        v = f(t)
        if v < best[1]:
            best[0], best[1] = t, v
        return v

    w = v = x
    fw = fv = fx
    d = e = 0.0
    tol = opts.t_tol
    for it in range(1, opts.max_iterations + 1):
        mid = 0.5 * (a + b)
        if abs(x - mid) <= 2.0 * tol - 0.5 * (b - a):
            return it - 1
        if abs(e) > tol:
            # parabola through x, w, v
            r = (x - w) * (fx - fv)
            q = (x - v) * (fx - fw)
            p = (x - v) * q - (x - w) * r
            q = 2.0 * (q - r)
            if q > 0.0:
                p = -p
            q = abs(q)
            e_prev, e = e, d
            if abs(p) >= abs(0.5 * q * e_prev) or p <= q * (a - x) or p >= q * (b - x):
                e = b - x if x < mid else a - x
                d = _GOLDEN * e
            else:
                d = p / q
                u = x + d
                if u - a < 2.0 * tol or b - u < 2.0 * tol:
                    d = tol if x < mid else -tol
        else:
            e = b - x if x < mid else a - x
            d = _GOLDEN * e
        u = x + d if abs(d) >= tol else x + (tol if d > 0 else -tol)
        fu = ev(u)
        if fu <= fx:
            if u >= x:
                a = x
            else:
                b = x
            v, fv = w, fw
            w, fw = x, fx
            x, fx = u, fu
        else:
            if u < x:
                a = u
            else:
                b = u
            if fu <= fw or w == x:
                v, fv = w, fw
                w, fw = u, fu
            elif fu <= fv or v == x or v == w:
                v, fv = u, fu
    return opts.max_iterations


def estimate_temperature(
    hist: EmpiricalHistogram,
    ring: RingSpec | None = None,
    options: EstimatorOptions = DEFAULT_OPTIONS,
) -> EstimateResult:
    """Minimize TVD(hist, pmf(t)) over t; flags degenerate regimes.

    Frozen input (all mass within the zero-density margin of one wall per
    ring) short-circuits to a zero_temperature result with t_eff = 0.0;
    everything else reports the TVD minimizer, its eps, and the refinement
    iteration count.
    """
    ring = _resolve_ring(hist, ring)
    opts = options
    n = ring.n_qb
    density = hist.mean_density()

    frozen = density <= 1.0 / n + opts.resolved_zero_margin(ring)
    if not frozen:
        try:
            t0 = invert_mean_density(density, ring)
        except SaturationError as exc:
            if exc.regime == FLAG_ZERO_TEMPERATURE:
                frozen = True
            else:
                t0 = opts.t_max
    if frozen:
        point_mass = np.zeros((n + 1) // 2)
        point_mass[0] = 1.0
        eps = tvd(hist, DomainWallPmf(n, ring.support, point_mass, t=None))
        flags = classify_regime(hist, ring, epsilon=eps, options=opts)
        return EstimateResult(0.0, eps, 0, flags | {FLAG_ZERO_TEMPERATURE})

    t0 = min(max(t0, opts.t_min), opts.t_max)
    f = _Objective(hist)
    best = [t0, f(t0)]
    a, m, b, fa, fm, fb = _bracket(f, t0, opts, best)
    span = max(fa, fm, fb) - min(fa, fm, fb)
    if span <= 1e-12:
        # flat objective across the bracket: settle on the midpoint
        t_star, eps_star, iters = 0.5 * (a + b), fm, 0
        if best[1] < eps_star:
            t_star, eps_star = best
    else:
        if fm <= min(fa, fb):
            x, fx = m, fm
        else:
            x, fx = (a, fa) if fa <= fb else (b, fb)
        iters = _brent(f, a, b, x, fx, opts, best)
        t_star, eps_star = best
    flags = classify_regime(hist, ring, epsilon=eps_star, options=opts)
    check_temperature(t_star)
    return EstimateResult(float(t_star), float(eps_star), int(iters), flags)

"""Recover the scaling law's offset and slope from estimated temperatures.

Estimated t_eff values, plotted against 1/j_enc or T_machine/J_phys, fall
on a line t_eff = tbar + alpha * x. ``fit_teff_scaling`` runs an ordinary
unweighted least-squares fit with intercept, excluding points flagged as
degenerate (frozen or entropy-saturated), and reports standard errors from
the residual variance. ``aggregate_over_sizes`` first collapses estimates
across ring sizes at each abscissa, recording the min/max spread.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegenerateAbscissaError,
    DomainError,
    EmptyGroupError,
    InsufficientDataError,
)
from .thermometry import FLAG_HIGH_T_SATURATION, FLAG_ZERO_TEMPERATURE

__all__ = [
    "DEFAULT_EXCLUDE_FLAGS",
    "SweepPoint",
    "AggregatedPoint",
    "FitResult",
    "fit_teff_scaling",
    "aggregate_over_sizes",
]

DEFAULT_EXCLUDE_FLAGS = frozenset({FLAG_ZERO_TEMPERATURE, FLAG_HIGH_T_SATURATION})


@dataclass(frozen=True)
class SweepPoint:
    """One estimated temperature at abscissa x, with provenance."""

    x: float
    t_eff: float
    epsilon: float = 0.0
    flags: frozenset = field(default_factory=frozenset)
    n_qb: int | None = None
    tau_us: float | None = None

    def __post_init__(self):
        if not self.x > 0:
            raise DomainError(f"abscissa must be positive, got {self.x}")
        object.__setattr__(self, "flags", frozenset(self.flags))


@dataclass(frozen=True)
class AggregatedPoint:
    """Size-averaged t_eff at one abscissa, with the min/max spread."""

    x: float
    t_eff: float
    t_eff_min: float
    t_eff_max: float
    n_sizes: int
    tau_us: float | None = None
    flags: frozenset = field(default_factory=frozenset)

    @property
    def spread(self) -> float:
        return self.t_eff_max - self.t_eff_min


@dataclass(frozen=True)
class FitResult:
    tbar: float
    alpha: float
    stderr_tbar: float
    stderr_alpha: float
    r_squared: float
    points_used: int
    points_excluded: int


def fit_teff_scaling(points, exclude_flags=DEFAULT_EXCLUDE_FLAGS) -> FitResult:
    """Unweighted OLS of t_eff on x with intercept; degenerate points dropped.

    With exactly two points the fit is exact and the standard errors
    (which need a residual degree of freedom) are reported as nan.
    """
    points = list(points)
    used = [p for p in points if not (set(p.flags) & set(exclude_flags))]
    excluded = len(points) - len(used)
    if len(used) < 2:
        raise InsufficientDataError(
            f"need >= 2 non-excluded points, have {len(used)} ({excluded} excluded)"
        )
    x = np.array([p.x for p in used], dtype=np.float64)
    y = np.array([p.t_eff for p in used], dtype=np.float64)
    if np.ptp(x) == 0.0:
        raise DegenerateAbscissaError("all abscissa values coincide")
    m = x.size
    xm, ym = x.mean(), y.mean()
    dx = x - xm
    sxx = float(np.dot(dx, dx))
    alpha = float(np.dot(dx, y - ym)) / sxx
    tbar = ym - alpha * xm
    resid = y - tbar - alpha * x
    ssr = float(np.dot(resid, resid))
    sst = float(np.dot(y - ym, y - ym))
    dof = m - 2
    if dof > 0:
        s2 = ssr / dof
        stderr_alpha = math.sqrt(s2 / sxx)
        stderr_tbar = math.sqrt(s2 * (1.0 / m + xm * xm / sxx))
    else:
        stderr_alpha = stderr_tbar = math.nan
    r_squared = 1.0 if sst == 0.0 else min(max(1.0 - ssr / sst, 0.0), 1.0)
    return FitResult(tbar, alpha, stderr_tbar, stderr_alpha, r_squared, m, excluded)


def aggregate_over_sizes(
    points, min_size: int = 100, exclude_flags=DEFAULT_EXCLUDE_FLAGS
) -> list:
    """Mean t_eff per abscissa over sizes >= min_size, with min/max spread.

    Degenerate-flagged entries are dropped before averaging; an abscissa
    with no qualifying entry raises EmptyGroupError.
    """
    groups: dict = {}
    for p in points:
        groups.setdefault(p.x, []).append(p)
    out = []
    for x in sorted(groups):
        kept = [
            p
            for p in groups[x]
            if (p.n_qb is None or p.n_qb >= min_size)
            and not (set(p.flags) & set(exclude_flags))
        ]
        if not kept:
            raise EmptyGroupError(
                f"no entries with n_qb >= {min_size} and without degenerate flags at x = {x}"
            )
        values = np.array([p.t_eff for p in kept])
        taus = {p.tau_us for p in kept}
        out.append(
            AggregatedPoint(
                x=x,
                t_eff=float(values.mean()),
                t_eff_min=float(values.min()),
                t_eff_max=float(values.max()),
                n_sizes=len(kept),
                tau_us=taus.pop() if len(taus) == 1 else None,
            )
        )
    return out

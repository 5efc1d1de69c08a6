"""The piecewise quadratic/power Orlicz family and its convex conjugate.

For rank p > 1 the function is x^2/2 on |x| <= 1 and |x|^p/p - 1/p + 1/2
outside; it is even, convex, and C^1 across the branch point.  Its convex
conjugate is the member of the same family with the Hoelder-conjugate rank
q = p/(p-1), which is what makes the tail bounds in this package explicit.
``legendre_numeric`` evaluates the conjugate by direct maximisation and is
kept independent of that identity so it can serve as an oracle for it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

__all__ = [
    "RankP",
    "as_rank",
    "conjugate_exponent",
    "phi_eval",
    "phi_inverse",
    "LegendreSearch",
    "legendre_numeric",
]

# q = p/(p-1) diverges as p -> 1; reject p inside the guard band.
MIN_P_EXCESS = 1e-9


@dataclass(frozen=True)
class RankP:
    """Validated rank parameter with its Hoelder conjugate q and r = min(p, 2)."""

    p: float
    q: float = field(init=False)
    r: float = field(init=False)

    def __post_init__(self) -> None:
        p = float(self.p)
        if not math.isfinite(p) or p < 1.0 + MIN_P_EXCESS:
            raise DomainError(f"rank parameter p must exceed 1 (got {self.p!r})")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", p / (p - 1.0))
        object.__setattr__(self, "r", min(p, 2.0))

    @property
    def conjugate(self) -> "RankP":
        return RankP(self.q)


def as_rank(rank: "RankP | float") -> RankP:
    """Coerce a raw exponent into a validated RankP (RankP passes through)."""
    if isinstance(rank, RankP):
        return rank
    return RankP(float(rank))


def conjugate_exponent(p: float) -> float:
    """Hoelder conjugate q = p/(p-1); q > 1 and 1/p + 1/q = 1."""
    return as_rank(p).q


def phi_eval(rank: "RankP | float", x):
    """Evaluate the rank-p function at x (scalar or ndarray).

    x^2/2 on |x| <= 1 (boundary inclusive), |x|^p/p - 1/p + 1/2 outside.
    Even in x, nonnegative, and the two branches meet with matching value
    and slope at |x| = 1.
    """
    p = as_rank(rank).p
    if np.ndim(x) == 0:
        ax = abs(float(x))
        if ax <= 1.0:
            return 0.5 * ax * ax
        return ax**p / p - 1.0 / p + 0.5
    ax = np.abs(np.asarray(x, dtype=np.float64))
    quad = 0.5 * ax * ax
    powr = np.power(ax, p) / p - 1.0 / p + 0.5
    return np.where(ax <= 1.0, quad, powr)


def phi_inverse(rank: "RankP | float", y):
    """Nonnegative x with phi_eval(rank, x) = y, for y >= 0 (scalar or ndarray).

    sqrt(2y) on y <= 1/2 (the quadratic branch covers [0, 1/2]), otherwise
    (p (y - 1/2 + 1/p))^(1/p).
    """
    p = as_rank(rank).p
    if np.ndim(y) == 0:
        yv = float(y)
        if not yv >= 0.0:
            raise DomainError(f"phi_inverse needs y >= 0 (got {y!r})")
        if yv <= 0.5:
            return math.sqrt(2.0 * yv)
        return float(np.power(p * (yv - 0.5 + 1.0 / p), 1.0 / p))
    ya = np.asarray(y, dtype=np.float64)
    if np.any(~(ya >= 0.0)):
        raise DomainError("phi_inverse needs y >= 0 everywhere")
    low = np.sqrt(2.0 * ya)
    # clamp the power-branch argument: it goes negative below y = 1/2 for
    # p > 2, and those lanes are discarded by the select anyway
    high = np.power(np.maximum(p * (ya - 0.5 + 1.0 / p), 0.0), 1.0 / p)
    return np.where(ya <= 0.5, low, high)


@dataclass(frozen=True)
class LegendreSearch:
    """Bracket/refinement settings for the numeric conjugate.

    ``refine`` keeps the golden-section cross-check on; leave it on so the
    result never silently depends on the analytic stationarity shortcut.
    """

    bracket_hi: float | None = None
    tol: float = 1e-11
    refine: bool = True


def legendre_numeric(rank: "RankP | float", y: float, search: LegendreSearch | None = None) -> float:
    """Convex conjugate sup_x {x y - phi(x)} evaluated directly.

    The supremum is located analytically (x = y on the quadratic branch for
    |y| <= 1, x = |y|^(1/(p-1)) on the power branch) and, unless disabled,
    re-located by a bracketed golden-section search; the larger of the two
    values is returned.  Even in y; zero at y = 0.
    """
    rk = as_rank(rank)
    p = rk.p
    if search is None:
        search = LegendreSearch()
    ay = abs(float(y))
    if not math.isfinite(ay):
        raise DomainError(f"legendre_numeric needs finite y (got {y!r})")
    if ay == 0.0:
        return 0.0

    def objective(x: float) -> float:
        return x * ay - phi_eval(rk, x)

    x_star = ay if ay <= 1.0 else ay ** (1.0 / (p - 1.0))
    best = objective(x_star)
    if search.refine:
        hi = search.bracket_hi if search.bracket_hi is not None else 2.0 * max(1.0, x_star)
        # expand until the objective is past its peak (it is concave in x)
        while objective(hi) > objective(0.5 * hi):
            hi *= 2.0
            if hi > 1e300:  # pragma: no cover - unreachable for finite y
                break
        best = max(best, _golden_max(objective, 0.0, hi, search.tol * max(1.0, x_star)))
    return max(best, 0.0)


_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_max(f, lo: float, hi: float, tol: float) -> float:
    """Golden-section maximum of a unimodal f on [lo, hi] to bracket width tol."""
    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    return max(fc, fd)

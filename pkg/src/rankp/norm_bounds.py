"""Closed-form upper bounds on the rank-p subgaussian norm.

For a centered variable supported on [a, b], with c = (b-a)/2 and
d = max(-a, b), the norm is at most c for p >= 2 (Hoeffding) and at most

    gamma_r = (c^2 / 2d) * (r * (2 (d/c)^2 + 1/r - 1/2))^(1/r),   r = min(p, 2)

in general; gamma_r solves phi_p(gamma_r * 2d/c^2) = 2 (d/c)^2, which makes
the piecewise majorant min(c^2 l^2/2, d|l|) of the cumulant generating
function sit below phi_p(gamma_r l).  Norm bounds combine across a bounded
increment martingale through the r-norm (g^r + d0^r)^(1/r).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import DomainError
from .orlicz import RankP, as_rank

__all__ = [
    "BoundedSupport",
    "IncrementSchedule",
    "NormBound",
    "hoeffding_norm",
    "gamma_r",
    "gamma_for_support",
    "gamma_for_schedule",
    "gamma_one_limit",
    "combined_norm",
    "cgf_majorant",
]

Provenance = Literal["hoeffding", "closed_form", "combined", "empirical", "declared"]


@dataclass(frozen=True)
class BoundedSupport:
    """Interval [a, b] straddling 0 for a centered bounded variable."""

    a: float
    b: float

    def __post_init__(self) -> None:
        a, b = float(self.a), float(self.b)
        if not (math.isfinite(a) and math.isfinite(b)):
            raise DomainError("support endpoints must be finite")
        if not (a <= 0.0 <= b) or not a < b:
            raise DomainError(f"centered support needs a <= 0 <= b and a < b (got [{a}, {b}])")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def c(self) -> float:
        """Half-width (b - a) / 2."""
        return 0.5 * (self.b - self.a)

    @property
    def d(self) -> float:
        """Sup-norm bound max(-a, b); always >= c."""
        return max(-self.a, self.b)

    @property
    def width_sq(self) -> float:
        return (self.b - self.a) ** 2


@dataclass(frozen=True)
class IncrementSchedule:
    """Per-step martingale increment bounds d_1..d_n, all strictly positive."""

    d_i: tuple[float, ...]

    def __post_init__(self) -> None:
        vals = tuple(float(v) for v in self.d_i)
        if len(vals) < 1:
            raise DomainError("schedule needs at least one increment bound")
        if any(not math.isfinite(v) or v <= 0.0 for v in vals):
            raise DomainError(f"all increment bounds must be finite and > 0 (got {vals})")
        object.__setattr__(self, "d_i", vals)

    @property
    def n(self) -> int:
        return len(self.d_i)

    @property
    def c(self) -> float:
        """sqrt(sum d_i^2); returned exactly as d_1 when n = 1."""
        if len(self.d_i) == 1:
            return self.d_i[0]
        return math.sqrt(self.sum_sq)

    @property
    def d(self) -> float:
        """sum d_i; dominates c, with equality only at n = 1."""
        return math.fsum(self.d_i)

    @property
    def sum_sq(self) -> float:
        return float(np.dot(self.d_i, self.d_i))

    def as_array(self) -> np.ndarray:
        return np.asarray(self.d_i, dtype=np.float64)


@dataclass(frozen=True)
class NormBound:
    """An upper bound on the rank-p subgaussian norm, with its provenance."""

    value: float
    rank: RankP
    provenance: Provenance

    def __post_init__(self) -> None:
        v = float(self.value)
        if not math.isfinite(v) or v < 0.0:
            raise DomainError(f"norm bound must be finite and >= 0 (got {self.value!r})")
        object.__setattr__(self, "value", v)


def hoeffding_norm(support: BoundedSupport) -> NormBound:
    """Hoeffding's bound (b - a)/2; a valid norm bound for every rank p >= 2."""
    return NormBound(support.c, RankP(2.0), "hoeffding")


def gamma_r(c: float, d: float, rank: "RankP | float") -> NormBound:
    """Explicit norm bound for a centered variable with half-width c, sup bound d.

    Returns c exactly for p >= 2; for 1 < p < 2 returns the closed form
    (c^2/2d) (p (2 (d/c)^2 + 1/p - 1/2))^(1/p).  The geometry forces d >= c
    for any straddling interval, so smaller d is rejected rather than clamped.
    """
    rk = as_rank(rank)
    c = float(c)
    d = float(d)
    if not (math.isfinite(c) and c > 0.0):
        raise DomainError(f"need c > 0 (got {c!r})")
    if not (math.isfinite(d) and d >= c):
        raise DomainError(f"need d >= c (got d={d!r}, c={c!r})")
    if rk.p >= 2.0:
        return NormBound(c, rk, "closed_form")
    p = rk.p
    ratio_sq = (d / c) ** 2
    value = (c * c / (2.0 * d)) * (p * (2.0 * ratio_sq + 1.0 / p - 0.5)) ** (1.0 / p)
    return NormBound(value, rk, "closed_form")


def gamma_for_support(support: BoundedSupport, rank: "RankP | float") -> NormBound:
    return gamma_r(support.c, support.d, rank)


def gamma_for_schedule(schedule: IncrementSchedule, rank: "RankP | float") -> NormBound:
    """gamma_r with c = sqrt(sum d_i^2) and d = sum d_i taken from the schedule."""
    return gamma_r(schedule.c, schedule.d, rank)


def gamma_one_limit(c: float, d: float) -> float:
    """Limit of gamma_r as p decreases to 1: d + c^2/(4d)."""
    c = float(c)
    d = float(d)
    if not (math.isfinite(c) and c > 0.0):
        raise DomainError(f"need c > 0 (got {c!r})")
    if not (math.isfinite(d) and d >= c):
        raise DomainError(f"need d >= c (got d={d!r}, c={c!r})")
    return d + c * c / (4.0 * d)


def combined_norm(gamma: "NormBound | float", d0: float, rank: "RankP | float") -> NormBound:
    """Norm bound (gamma^r + d0^r)^(1/r) for a walk started at norm <= d0.

    d0 = 0 short-circuits to gamma exactly.  Symmetric and monotone in both
    arguments.
    """
    rk = as_rank(rank)
    g = gamma.value if isinstance(gamma, NormBound) else float(gamma)
    d0 = float(d0)
    if not math.isfinite(g) or g < 0.0:
        raise DomainError(f"need gamma >= 0 (got {gamma!r})")
    if not math.isfinite(d0) or d0 < 0.0:
        raise DomainError(f"need d0 >= 0 (got {d0!r})")
    if d0 == 0.0:
        value = g
    elif g == 0.0:
        value = d0
    else:
        r = rk.r
        value = (g**r + d0**r) ** (1.0 / r)
    return NormBound(value, rk, "combined")


def cgf_majorant(lam, c: float, d: float):
    """min(c^2 l^2 / 2, d |l|): the quadratic/linear cap on the CGF of a
    centered variable with half-width c and sup bound d.  The branch point is
    exactly at |l| = 2d/c^2.  Scalar or ndarray in lam."""
    c = float(c)
    d = float(d)
    if not (math.isfinite(c) and c > 0.0):
        raise DomainError(f"need c > 0 (got {c!r})")
    if not (math.isfinite(d) and d >= c):
        raise DomainError(f"need d >= c (got d={d!r}, c={c!r})")
    breakpoint_ = 2.0 * d / (c * c)
    if np.ndim(lam) == 0:
        al = abs(float(lam))
        if al <= breakpoint_:
            return 0.5 * c * c * al * al
        return d * al
    al = np.abs(np.asarray(lam, dtype=np.float64))
    return np.where(al <= breakpoint_, 0.5 * c * c * al * al, d * al)

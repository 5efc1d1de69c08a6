"""Tail probability bounds and the rank-p / classic crossover.

A variable with rank-p norm at most tau satisfies
P(|xi| >= eps) <= 2 exp(-phi_q(eps / tau)) with q the Hoelder conjugate of p.
Composing this with the norm bounds of :mod:`rankp.norm_bounds` gives the
bounded-increment martingale bound; at p = 2 and zero start it reduces to the
classic 2 exp(-eps^2 / (2 sum d_i^2)).  For 1 < p < 2 the two bounds cross at
a single threshold eps_p > gamma_p, located here by bisection.

Bounds above 1 are vacuous but reported as-is so that vacuous regions stay
visible in reports.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from .errors import DomainError
from .norm_bounds import (
    BoundedSupport,
    IncrementSchedule,
    NormBound,
    combined_norm,
    gamma_for_schedule,
    gamma_r,
)
from .orlicz import RankP, as_rank, phi_eval

__all__ = [
    "TailQuery",
    "CrossoverResult",
    "TailRow",
    "TailReport",
    "generic_tail",
    "azuma_rank_p_tail",
    "classic_azuma_tail",
    "hoeffding_sum_tail",
    "crossover_epsilon",
    "compare_bounds",
]


@dataclass(frozen=True)
class TailQuery:
    """A single tail evaluation request: threshold, rank, and norm bound."""

    epsilon: float
    rank: RankP
    norm: NormBound

    def __post_init__(self) -> None:
        eps = float(self.epsilon)
        if not math.isfinite(eps) or eps < 0.0:
            raise DomainError(f"epsilon must be finite and >= 0 (got {self.epsilon!r})")
        object.__setattr__(self, "epsilon", eps)


def generic_tail(query: TailQuery) -> float:
    """2 exp(-phi_q(eps / tau)); nonincreasing in eps, equal to 2 at eps = 0.

    tau = 0 denotes a point mass at zero: the tail is 0 for eps > 0 and 2
    (the vacuous cap) at eps = 0.
    """
    tau = query.norm.value
    if tau == 0.0:
        return 2.0 if query.epsilon == 0.0 else 0.0
    return 2.0 * math.exp(-phi_eval(query.rank.q, query.epsilon / tau))


def azuma_rank_p_tail(
    epsilon: float,
    schedule: IncrementSchedule,
    d0: float,
    rank: "RankP | float",
) -> float:
    """Martingale tail bound with a rank-p start of norm at most d0.

    Computes c, d from the schedule, the gamma_r norm bound, the combined
    norm (gamma^r + d0^r)^(1/r), and evaluates the generic tail there.
    """
    rk = as_rank(rank)
    gamma = gamma_for_schedule(schedule, rk)
    norm = combined_norm(gamma, d0, rk)
    return generic_tail(TailQuery(epsilon, rk, norm))


def classic_azuma_tail(epsilon: float, schedule: IncrementSchedule) -> float:
    """Classic bounded-increment bound 2 exp(-eps^2 / (2 sum d_i^2))."""
    eps = float(epsilon)
    if not math.isfinite(eps) or eps < 0.0:
        raise DomainError(f"epsilon must be finite and >= 0 (got {epsilon!r})")
    return 2.0 * math.exp(-eps * eps / (2.0 * schedule.sum_sq))


def hoeffding_sum_tail(epsilon: float, intervals: Sequence[BoundedSupport]) -> float:
    """Tail bound 2 exp(-2 eps^2 / sum (b_i - a_i)^2) for independent bounded sums."""
    eps = float(epsilon)
    if not math.isfinite(eps) or eps < 0.0:
        raise DomainError(f"epsilon must be finite and >= 0 (got {epsilon!r})")
    if len(intervals) == 0:
        raise DomainError("need at least one support interval")
    denom = math.fsum(iv.width_sq for iv in intervals)
    return 2.0 * math.exp(-2.0 * eps * eps / denom)


@dataclass(frozen=True)
class CrossoverResult:
    """The threshold above which the rank-p bound beats the classic one."""

    epsilon_p: float
    gamma_p: float
    c: float
    bracket: tuple[float, float]
    residual: float

    def __post_init__(self) -> None:
        if not self.epsilon_p > self.gamma_p:
            raise DomainError("crossover must lie on the power branch (eps_p > gamma_p)")
        if not abs(self.residual) <= 1e-10:
            raise DomainError(f"crossover residual too large: {self.residual!r}")


def crossover_epsilon(rank: "RankP | float", c: float, d: float) -> CrossoverResult:
    """Unique eps_p > gamma_p with phi_q(eps_p / gamma_p) = eps_p^2 / (2 c^2).

    Defined for 1 < p < 2 only (at p >= 2 the bounds coincide and there is
    nothing to cross).  The root is bracketed by doubling from gamma_p and
    found by bisection; g(eps) = phi_q(eps/gamma_p) - eps^2/(2c^2) is
    negative just above gamma_p (gamma_p > c) and grows like eps^q, q > 2.
    """
    rk = as_rank(rank)
    if rk.p >= 2.0:
        raise DomainError(f"crossover exists only for 1 < p < 2 (got p={rk.p})")
    gamma_p = gamma_r(c, d, rk).value
    c = float(c)
    q = rk.q

    def g(eps: float) -> float:
        return phi_eval(q, eps / gamma_p) - eps * eps / (2.0 * c * c)

    lo = gamma_p * (1.0 + 1e-9)
    if not g(lo) < 0.0:
        raise DomainError(
            f"no sign change above gamma_p={gamma_p!r}; p={rk.p} is too close to 2 "
            "for a resolvable crossover"
        )
    hi = 2.0 * gamma_p
    while g(hi) <= 0.0:
        hi *= 2.0
        if hi > 1e12:  # pragma: no cover - g grows superquadratically
            raise DomainError("failed to bracket the crossover")
    bracket = (lo, hi)
    a, b = lo, hi
    while b - a > 1e-12 * max(1.0, gamma_p):
        m = 0.5 * (a + b)
        if g(m) < 0.0:
            a = m
        else:
            b = m
    eps_p = 0.5 * (a + b)
    return CrossoverResult(eps_p, gamma_p, c, bracket, g(eps_p))


@dataclass
class TailRow:
    """One epsilon of a bound comparison, optionally with an empirical column."""

    eps: float
    bound_rank_p: float
    bound_classic: float
    ratio: float
    empirical: Optional[float] = None
    ci_slack: Optional[float] = None
    passed: Optional[bool] = None


@dataclass
class TailReport:
    """Bound comparison over an epsilon grid, plus run metadata when simulated."""

    p: float
    q: float
    r: float
    schedule: tuple[float, ...]
    d0: float
    d0_provenance: str
    gamma_r: float
    combined_norm: float
    epsilon_p: Optional[float]
    rows: list[TailRow] = field(default_factory=list)
    seed: Optional[int] = None
    n_paths: Optional[int] = None
    delta: Optional[float] = None

    @property
    def all_passed(self) -> Optional[bool]:
        flags = [row.passed for row in self.rows]
        if any(f is None for f in flags):
            return None
        return all(flags)

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "q": self.q,
            "r": self.r,
            "schedule": list(self.schedule),
            "d0": self.d0,
            "d0_provenance": self.d0_provenance,
            "gamma_r": self.gamma_r,
            "combined_norm": self.combined_norm,
            "epsilon_p": self.epsilon_p,
            "rows": [
                {
                    "eps": row.eps,
                    "bound_rank_p": row.bound_rank_p,
                    "bound_classic": row.bound_classic,
                    "ratio": row.ratio,
                    "empirical": row.empirical,
                    "ci_slack": row.ci_slack,
                    "pass": row.passed,
                }
                for row in self.rows
            ],
            "seed": self.seed,
            "n_paths": self.n_paths,
            "delta": self.delta,
        }


def _validate_grid(eps_grid: Sequence[float]) -> np.ndarray:
    grid = np.asarray(list(eps_grid), dtype=np.float64)
    if grid.size == 0:
        raise DomainError("epsilon grid must be nonempty")
    if np.any(~np.isfinite(grid)) or np.any(grid < 0.0):
        raise DomainError("epsilon grid must be finite and nonnegative")
    if np.any(np.diff(grid) < 0.0):
        raise DomainError("epsilon grid must be sorted ascending")
    return grid


def compare_bounds(
    eps_grid: Sequence[float],
    schedule: IncrementSchedule,
    d0: float,
    rank: "RankP | float",
    d0_provenance: str = "declared",
) -> TailReport:
    """Rank-p vs classic bound per epsilon; empirical columns are left unset
    for the simulation layer to fill.  Rows come out in grid order (they are
    independent, so any evaluation order gives the same report)."""
    rk = as_rank(rank)
    grid = _validate_grid(eps_grid)
    gamma = gamma_for_schedule(schedule, rk)
    norm = combined_norm(gamma, d0, rk)
    eps_p: Optional[float] = None
    if rk.p < 2.0:
        eps_p = crossover_epsilon(rk, schedule.c, schedule.d).epsilon_p
    rows = []
    for eps in grid:
        bound_p = generic_tail(TailQuery(float(eps), rk, norm))
        bound_c = classic_azuma_tail(float(eps), schedule)
        rows.append(TailRow(float(eps), bound_p, bound_c, bound_p / bound_c))
    return TailReport(
        p=rk.p,
        q=rk.q,
        r=rk.r,
        schedule=schedule.d_i,
        d0=float(d0),
        d0_provenance=d0_provenance,
        gamma_r=gamma.value,
        combined_norm=norm.value,
        epsilon_p=eps_p,
        rows=rows,
    )


def with_empirical(
    report: TailReport,
    frequencies: Sequence[float],
    ci_slack: float,
) -> TailReport:
    """Return a copy of the report with empirical columns and pass flags set."""
    if len(frequencies) != len(report.rows):
        raise DomainError("one frequency per report row required")
    rows = [
        replace(
            row,
            empirical=float(freq),
            ci_slack=float(ci_slack),
            passed=bool(freq <= row.bound_rank_p + ci_slack),
        )
        for row, freq in zip(report.rows, frequencies)
    ]
    return replace(report, rows=rows)

"""Empirical cumulant generating function and data-driven norm estimation.

The rank-p norm of a centered variable is the smallest c with
psi(l) <= phi_p(c l) for all l, equivalently sup_l phi_p^{-1}(psi(l)) / |l|.
We estimate it by taking that supremum over a finite lambda grid against the
empirical CGF.  A grid supremum lower-bounds the true supremum, so tau_hat is
an estimate, not a certified bound; large |l| makes the empirical MGF
dominated by the sample maximum, which is why the default grid stops at 10.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

import numpy as np

from .errors import DomainError
from .norm_bounds import IncrementSchedule
from .orlicz import RankP, as_rank, phi_eval, phi_inverse

__all__ = [
    "SampleSet",
    "LambdaGrid",
    "NormEstimate",
    "TailCriterionRow",
    "TailCriterionReport",
    "CgfDecompositionRow",
    "CgfDecompositionReport",
    "empirical_cgf",
    "estimate_norm",
    "tail_criterion_check",
    "cgf_decomposition_check",
]


@dataclass(frozen=True)
class SampleSet:
    """A batch of real observations, optionally centered, with provenance."""

    values: np.ndarray
    centered: bool = False
    provenance: Optional[Mapping] = None

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 1 or values.size == 0:
            raise DomainError("samples must be a nonempty 1-d array")
        if np.any(~np.isfinite(values)):
            raise DomainError("samples must be finite")
        values = values.copy()
        values.flags.writeable = False
        object.__setattr__(self, "values", values)
        if self.centered:
            scale = float(np.max(np.abs(values))) or 1.0
            if abs(float(np.mean(values))) > 1e-12 * scale:
                raise DomainError("centered flag set but sample mean is not ~0")

    @property
    def n(self) -> int:
        return int(self.values.size)

    def center(self) -> tuple["SampleSet", float]:
        """Subtract the sample mean; returns (centered set, shift applied)."""
        if self.centered:
            return self, 0.0
        shift = float(np.mean(self.values))
        prov = dict(self.provenance) if self.provenance else {}
        prov["centering_shift"] = shift
        return SampleSet(self.values - shift, centered=True, provenance=prov), shift


@dataclass(frozen=True)
class LambdaGrid:
    """Sorted nonzero evaluation points for the CGF; symmetric by default."""

    points: np.ndarray
    symmetric: bool = True

    def __post_init__(self) -> None:
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim != 1 or pts.size == 0:
            raise DomainError("lambda grid must be a nonempty 1-d array")
        if np.any(pts == 0.0) or np.any(~np.isfinite(pts)):
            raise DomainError("lambda grid points must be finite and nonzero")
        pts = np.sort(pts)
        if self.symmetric:
            present = set(pts.tolist())
            if any(-x not in present for x in pts.tolist()):
                raise DomainError("symmetric grid must contain -l for every l")
        pts = pts.copy()
        pts.flags.writeable = False
        object.__setattr__(self, "points", pts)

    @classmethod
    def default(cls, lo: float = 1e-3, hi: float = 10.0, per_decade: int = 50) -> "LambdaGrid":
        """Symmetric log-spaced magnitudes from lo to hi, per_decade points/decade."""
        decades = math.log10(hi / lo)
        count = max(2, int(round(decades * per_decade)) + 1)
        mags = np.geomspace(lo, hi, count)
        return cls(np.concatenate([-mags[::-1], mags]), symmetric=True)

    @classmethod
    def from_magnitudes(cls, magnitudes: Sequence[float]) -> "LambdaGrid":
        mags = np.asarray(sorted(set(float(m) for m in magnitudes)), dtype=np.float64)
        if np.any(mags <= 0.0):
            raise DomainError("magnitudes must be positive")
        return cls(np.concatenate([-mags[::-1], mags]), symmetric=True)


@dataclass(frozen=True)
class NormEstimate:
    """Grid-supremum norm estimate with the CGF curve that produced it."""

    tau_hat: float
    argmax_lambda: float
    cgf_curve: np.ndarray  # (k, 2) columns (lambda, psi_hat)
    rank: RankP
    shift: float = 0.0


def empirical_cgf(samples: SampleSet, lam: float) -> float:
    """ln((1/N) sum exp(l x_i)), max-shifted so the exponent never overflows.

    Exact for the empirical measure; convex in l with value 0 at l = 0.
    """
    lam = float(lam)
    if not math.isfinite(lam):
        raise DomainError(f"lambda must be finite (got {lam!r})")
    z = lam * samples.values
    m = float(np.max(z))
    return m + math.log(float(np.mean(np.exp(z - m))))


def estimate_norm(
    samples: SampleSet,
    rank: "RankP | float",
    grid: Optional[LambdaGrid] = None,
) -> NormEstimate:
    """tau_hat = max over the grid of phi_p^{-1}(max(psi_hat(l), 0)) / |l|.

    Samples are centered first if needed (the shift is recorded); psi_hat is
    clamped below at 0, since a centered variable has psi >= 0 and tiny
    finite-sample dips below 0 would otherwise leave the inverse undefined.
    Refining the grid can only increase tau_hat.
    """
    rk = as_rank(rank)
    if grid is None:
        grid = LambdaGrid.default()
    centered, shift = samples.center()
    values = centered.values
    tau_hat = 0.0
    argmax = float(grid.points[0])
    curve = np.empty((grid.points.size, 2), dtype=np.float64)
    for i, lam in enumerate(grid.points):
        z = lam * values
        m = float(np.max(z))
        psi = m + math.log(float(np.mean(np.exp(z - m))))
        curve[i, 0] = lam
        curve[i, 1] = psi
        tau_lam = float(phi_inverse(rk, max(psi, 0.0)) / abs(lam))
        if tau_lam > tau_hat:
            tau_hat = tau_lam
            argmax = float(lam)
    return NormEstimate(tau_hat=tau_hat, argmax_lambda=argmax, cgf_curve=curve, rank=rk, shift=shift)


@dataclass(frozen=True)
class TailCriterionRow:
    eps: float
    frequency: float
    bound: float
    passed: bool


@dataclass(frozen=True)
class TailCriterionReport:
    """Membership check: empirical tails against C exp(-phi_q(eps / D))."""

    rows: tuple[TailCriterionRow, ...]
    C: float
    D: float
    ci_slack: float
    delta: float
    shift: float
    passed: bool


def tail_criterion_check(
    samples: SampleSet,
    rank: "RankP | float",
    C: float,
    D: float,
    eps_grid: Sequence[float],
    delta: float = 1e-3,
) -> TailCriterionReport:
    """Check P(|xi| >= eps) <= C exp(-phi_q(eps / D)) on a positive grid.

    Frequencies get the one-sided slack sqrt(ln(1/delta) / 2N); the report
    passes when every grid point does.
    """
    rk = as_rank(rank)
    if not (math.isfinite(C) and C > 0.0):
        raise DomainError(f"need C > 0 (got {C!r})")
    if not (math.isfinite(D) and D > 0.0):
        raise DomainError(f"need D > 0 (got {D!r})")
    grid = np.asarray(list(eps_grid), dtype=np.float64)
    if grid.size == 0:
        raise DomainError("epsilon grid must be nonempty")
    if np.any(grid <= 0.0) or np.any(np.diff(grid) < 0.0):
        raise DomainError("epsilon grid must be positive and ascending")
    if not (0.0 < delta < 1.0):
        raise DomainError(f"delta must be in (0, 1) (got {delta!r})")
    centered, shift = samples.center()
    abs_values = np.abs(centered.values)
    n = centered.n
    slack = math.sqrt(math.log(1.0 / delta) / (2.0 * n))
    rows = []
    for eps in grid:
        freq = float(np.count_nonzero(abs_values >= eps)) / n
        bound = C * math.exp(-phi_eval(rk.q, eps / D))
        rows.append(TailCriterionRow(float(eps), freq, bound, bool(freq <= bound + slack)))
    return TailCriterionReport(
        rows=tuple(rows),
        C=float(C),
        D=float(D),
        ci_slack=slack,
        delta=float(delta),
        shift=shift,
        passed=all(r.passed for r in rows),
    )


@dataclass(frozen=True)
class CgfDecompositionRow:
    lam: float
    lhs: float          # psi_hat of the endpoint
    rhs: float          # phi_2(l c) + psi_hat of the start
    excess: float       # lhs - rhs
    slack: float        # bootstrap allowance at the chosen quantile
    passed: bool


@dataclass(frozen=True)
class CgfDecompositionReport:
    rows: tuple[CgfDecompositionRow, ...]
    n_boot: int
    quantile: float
    passed: bool


def cgf_decomposition_check(
    xi0: np.ndarray,
    xin: np.ndarray,
    schedule: IncrementSchedule,
    lambdas: Sequence[float],
    n_boot: int = 200,
    quantile: float = 0.995,
    seed: int = 0,
) -> CgfDecompositionReport:
    """Check psi_end(l) <= phi_2(l c) + psi_start(l) on paired trajectories.

    The inequality holds for the true CGFs; the empirical version is granted
    a noise allowance: the excess must stay below the chosen quantile of the
    bootstrap spread (paired resampling, n_boot replicates, centered at the
    observed excess).  |l| <= 2 keeps the MGF estimates from being dominated
    by a handful of extreme paths.
    """
    xi0 = np.asarray(xi0, dtype=np.float64)
    xin = np.asarray(xin, dtype=np.float64)
    if xi0.shape != xin.shape or xi0.ndim != 1 or xi0.size == 0:
        raise DomainError("paired samples must be nonempty 1-d arrays of equal length")
    lams = np.asarray(list(lambdas), dtype=np.float64)
    if lams.size == 0 or np.any(~np.isfinite(lams)):
        raise DomainError("lambda grid must be nonempty and finite")
    if np.any(np.abs(lams) > 2.0):
        raise DomainError("lambda grid must satisfy |l| <= 2")
    n = xi0.size
    c = schedule.c

    # stabilized per-lambda exponentials, reused by every bootstrap replicate
    e0 = np.empty((lams.size, n))
    en = np.empty((lams.size, n))
    m0 = np.empty(lams.size)
    mn = np.empty(lams.size)
    for j, lam in enumerate(lams):
        z0 = lam * xi0
        zn = lam * xin
        m0[j] = z0.max()
        mn[j] = zn.max()
        e0[j] = np.exp(z0 - m0[j])
        en[j] = np.exp(zn - mn[j])

    quad_bound = np.asarray(phi_eval(2.0, lams * c), dtype=np.float64)

    def sides_from_means(mean0: np.ndarray, meann: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        lhs = mn + np.log(meann)
        rhs = quad_bound + (m0 + np.log(mean0))
        return lhs, rhs

    lhs_obs, rhs_obs = sides_from_means(e0.mean(axis=1), en.mean(axis=1))
    observed = lhs_obs - rhs_obs

    boot_rng = np.random.default_rng(seed)
    spread = np.empty((n_boot, lams.size))
    for b in range(n_boot):
        idx = boot_rng.integers(0, n, size=n)
        lhs_b, rhs_b = sides_from_means(e0[:, idx].mean(axis=1), en[:, idx].mean(axis=1))
        spread[b] = (lhs_b - rhs_b) - observed
    slack = np.quantile(spread, quantile, axis=0)

    rows = tuple(
        CgfDecompositionRow(
            lam=float(lams[j]),
            lhs=float(lhs_obs[j]),
            rhs=float(rhs_obs[j]),
            excess=float(observed[j]),
            slack=float(slack[j]),
            passed=bool(observed[j] <= max(slack[j], 0.0)),
        )
        for j in range(lams.size)
    )
    return CgfDecompositionReport(
        rows=rows,
        n_boot=int(n_boot),
        quantile=float(quantile),
        passed=all(r.passed for r in rows),
    )

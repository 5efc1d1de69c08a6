"""rankp: concentration bounds in spaces of subgaussian random variables of rank p.

Exact evaluation of the piecewise quadratic/power Orlicz family and its
convex conjugate, closed-form norm bounds for bounded centered variables,
the generalized bounded-increment martingale tail bound with an arbitrary
rank-p start, the crossover against the classic bound, data-driven norm
estimation, and a reproducible Monte Carlo validation harness.
"""

from .errors import ConfigError, DomainError, RankPError
from .estimator import (
    LambdaGrid,
    NormEstimate,
    SampleSet,
    cgf_decomposition_check,
    empirical_cgf,
    estimate_norm,
    tail_criterion_check,
)
from .norm_bounds import (
    BoundedSupport,
    IncrementSchedule,
    NormBound,
    combined_norm,
    gamma_for_schedule,
    gamma_for_support,
    gamma_one_limit,
    gamma_r,
    hoeffding_norm,
    cgf_majorant,
)
from .orlicz import (
    LegendreSearch,
    RankP,
    as_rank,
    conjugate_exponent,
    legendre_numeric,
    phi_eval,
    phi_inverse,
)
from .simulate import (
    DistributionSpec,
    MartingaleSpec,
    MonteCarloResult,
    SamplePaths,
    derive_d0,
    generate_paths,
    generate_trajectories,
    halfnormal_shift,
    monte_carlo_tail,
    preset_spec,
    sample_double_weibull,
    sample_halfnormal_power,
    validate_bound,
)
from .tail_bounds import (
    CrossoverResult,
    TailQuery,
    TailReport,
    TailRow,
    azuma_rank_p_tail,
    classic_azuma_tail,
    compare_bounds,
    crossover_epsilon,
    generic_tail,
    hoeffding_sum_tail,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "RankPError",
    "DomainError",
    "ConfigError",
    "RankP",
    "as_rank",
    "conjugate_exponent",
    "phi_eval",
    "phi_inverse",
    "LegendreSearch",
    "legendre_numeric",
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
    "SampleSet",
    "LambdaGrid",
    "NormEstimate",
    "empirical_cgf",
    "estimate_norm",
    "tail_criterion_check",
    "cgf_decomposition_check",
    "DistributionSpec",
    "MartingaleSpec",
    "SamplePaths",
    "MonteCarloResult",
    "sample_double_weibull",
    "sample_halfnormal_power",
    "halfnormal_shift",
    "generate_paths",
    "generate_trajectories",
    "monte_carlo_tail",
    "derive_d0",
    "validate_bound",
    "preset_spec",
]

"""Dependent Gaussian walks in heavy-tailed random scenery.

Simulation of the random rewards schema (long-range-dependent walks
collecting beta-stable site rewards) together with a Monte Carlo oracle
for its limit, the local-time fractional stable motion, and the
statistics needed to verify the convergence numerically.
"""

from .errors import MissingSceneryError, NumericalError, UsageError
from .experiments import (
    EcfCheckResult,
    FunctionalResult,
    ScalingResult,
    WalkVarianceResult,
    functional_experiment,
    motion_ecf_check,
    reward_samples,
    scaling_experiment,
    schema_ecf_check,
    schema_samples,
    stable_motion_samples,
    walk_variance,
)
from .fgn import FbmGrid, WalkPath, fgn_covariance, sample_fbm, sample_fgn, sample_walk
from .limit import (
    LocalTimeGrid,
    estimate_power_integral_mean,
    fbm_local_time,
    limit_cf_target,
    local_time_power_integral,
    power_integral_draws,
    sample_local_time_integral,
    sample_stable_motion,
)
from .local_times import (
    LocalTimeProfile,
    RewardSeries,
    SITE_CEIL,
    SITE_FLOOR,
    interpolate,
    local_time_functional,
    local_time_profiles,
    local_times,
    max_local_time,
    range_count,
    reward_series,
    self_intersections,
    site_of,
)
from .model import ModelParams, SchemaConfig, delta_exponent
from .schema import sample_reward_process, sample_reward_schema
from .stable import (
    Scenery,
    SceneryKind,
    StableParams,
    pareto_scale,
    sample_scenery,
    sample_stable,
    theoretical_cf,
)
from .stats import CfComparison, EcfEstimate, SlopeFit, cf_compare, ecf, ks_distance, slope_fit

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "UsageError",
    "NumericalError",
    "MissingSceneryError",
    "ModelParams",
    "SchemaConfig",
    "delta_exponent",
    "StableParams",
    "SceneryKind",
    "Scenery",
    "sample_stable",
    "sample_scenery",
    "theoretical_cf",
    "pareto_scale",
    "fgn_covariance",
    "sample_fgn",
    "sample_walk",
    "WalkPath",
    "sample_fbm",
    "FbmGrid",
    "site_of",
    "SITE_CEIL",
    "SITE_FLOOR",
    "LocalTimeProfile",
    "local_times",
    "local_time_profiles",
    "max_local_time",
    "self_intersections",
    "range_count",
    "RewardSeries",
    "reward_series",
    "interpolate",
    "local_time_functional",
    "LocalTimeGrid",
    "fbm_local_time",
    "local_time_power_integral",
    "power_integral_draws",
    "estimate_power_integral_mean",
    "limit_cf_target",
    "sample_local_time_integral",
    "sample_stable_motion",
    "sample_reward_process",
    "sample_reward_schema",
    "EcfEstimate",
    "ecf",
    "CfComparison",
    "cf_compare",
    "SlopeFit",
    "slope_fit",
    "ks_distance",
    "WalkVarianceResult",
    "walk_variance",
    "reward_samples",
    "schema_samples",
    "stable_motion_samples",
    "ScalingResult",
    "scaling_experiment",
    "FunctionalResult",
    "functional_experiment",
    "EcfCheckResult",
    "schema_ecf_check",
    "motion_ecf_check",
]

"""Replicate-level Monte Carlo drivers shared by the CLI and the tests.

Each driver fans a module-level worker out over replicate indices via
``streams.replicate_map`` and reduces the per-replicate results in
index order, so every experiment is a pure function of (config, seed)
regardless of worker count.  Monte Carlo means rely on numpy's pairwise
summation, which keeps rounding error logarithmic in the number of
heavy-tailed terms.
"""

from __future__ import annotations

import dataclasses
import functools
from typing import Sequence

import numpy as np

from .fgn import sample_walk
from .local_times import (
    SITE_CEIL,
    local_time_functional,
    local_time_profiles,
    max_local_time,
    range_count,
    self_intersections,
)
from .limit import estimate_power_integral_mean, limit_cf_target, power_integral_draws, sample_stable_motion
from .model import ModelParams, SchemaConfig, delta_exponent
from .schema import sample_reward_process, sample_reward_schema
from .stable import SceneryKind
from .stats import EcfEstimate, SlopeFit, cf_compare, ecf, ks_distance, slope_fit
from .streams import ROLE_WALK, replicate_map, spawn_rng, stream_key

__all__ = [
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

# grids for the scaling experiment: slopes are fitted over the dyadic
# window 2**8..2**13, the rescaled-maximum medians are tracked along the
# sparser ladder up to 2**14
SLOPE_GRID = tuple(2**k for k in range(8, 14))
MEDIAN_GRID = (2**8, 2**10, 2**12, 2**14)


# --- walk normalization -------------------------------------------------


def _walk_final_worker(index: int, n: int, hurst: float, seed: int) -> float:
    walk = sample_walk(n, hurst, spawn_rng(seed, index, ROLE_WALK))
    return float(walk.sums[-1])


@dataclasses.dataclass(frozen=True)
class WalkVarianceResult:
    n: int
    hurst: float
    replicates: int
    finals: np.ndarray
    variance: float
    ratio: float
    se_ratio: float


def walk_variance(n: int, hurst: float, replicates: int, seed: int, jobs: int = 1) -> WalkVarianceResult:
    """Sample variance of S_n against the exact value n**(2*hurst)."""
    worker = functools.partial(_walk_final_worker, n=n, hurst=hurst, seed=seed)
    finals = np.asarray(replicate_map(worker, replicates, jobs=jobs), dtype=np.float64)
    variance = float(finals.var(ddof=1))
    ratio = variance / float(n) ** (2.0 * hurst)
    # Gaussian sample variance has relative SD sqrt(2/(M-1))
    se_ratio = ratio * float(np.sqrt(2.0 / (replicates - 1)))
    return WalkVarianceResult(
        n=n, hurst=hurst, replicates=replicates, finals=finals,
        variance=variance, ratio=ratio, se_ratio=se_ratio,
    )


# --- trajectory samples -------------------------------------------------


def _reward_worker(
    index: int,
    n: int,
    times: tuple[float, ...],
    hurst: float,
    beta: float,
    sigma: float,
    seed: int,
    kind_value: str,
    convention: str,
) -> np.ndarray:
    model = ModelParams(hurst=hurst, beta=beta, sigma=sigma)
    return sample_reward_process(
        n, times, model, stream_key(seed, index),
        kind=SceneryKind(kind_value), convention=convention,
    )


def reward_samples(
    model: ModelParams,
    n: int,
    times: Sequence[float],
    replicates: int,
    seed: int,
    jobs: int = 1,
    kind: SceneryKind = SceneryKind.EXACT_STABLE,
    convention: str = SITE_CEIL,
) -> np.ndarray:
    """Independent draws of the rescaled reward process, shape (M, k)."""
    worker = functools.partial(
        _reward_worker,
        n=n,
        times=tuple(float(t) for t in times),
        hurst=model.hurst,
        beta=model.beta,
        sigma=model.sigma,
        seed=seed,
        kind_value=kind.value,
        convention=convention,
    )
    return np.asarray(replicate_map(worker, replicates, jobs=jobs), dtype=np.float64)


def _schema_worker(
    index: int,
    n: int,
    copies: int,
    times: tuple[float, ...],
    hurst: float,
    beta: float,
    sigma: float,
    seed: int,
    kind_value: str,
    convention: str,
) -> np.ndarray:
    model = ModelParams(hurst=hurst, beta=beta, sigma=sigma)
    config = SchemaConfig(n=n, copies=copies, times=times)
    return sample_reward_schema(
        config, model, stream_key(seed, index),
        kind=SceneryKind(kind_value), convention=convention,
    )


def schema_samples(
    model: ModelParams,
    n: int,
    copies: int,
    times: Sequence[float],
    replicates: int,
    seed: int,
    jobs: int = 1,
    kind: SceneryKind = SceneryKind.EXACT_STABLE,
    convention: str = SITE_CEIL,
) -> np.ndarray:
    """Independent draws of the superposed schema, shape (M, k)."""
    worker = functools.partial(
        _schema_worker,
        n=n,
        copies=copies,
        times=tuple(float(t) for t in times),
        hurst=model.hurst,
        beta=model.beta,
        sigma=model.sigma,
        seed=seed,
        kind_value=kind.value,
        convention=convention,
    )
    return np.asarray(replicate_map(worker, replicates, jobs=jobs), dtype=np.float64)


def _motion_worker(
    index: int,
    copies: int,
    times: tuple[float, ...],
    hurst: float,
    beta: float,
    sigma: float,
    m: int,
    bins: int,
    seed: int,
) -> np.ndarray:
    model = ModelParams(hurst=hurst, beta=beta, sigma=sigma)
    return sample_stable_motion(copies, times, model, m, bins, stream_key(seed, index))


def stable_motion_samples(
    model: ModelParams,
    copies: int,
    times: Sequence[float],
    m: int,
    bins: int,
    replicates: int,
    seed: int,
    jobs: int = 1,
) -> np.ndarray:
    """Independent draws of the limit-side superposition, shape (M, k).

    ``copies = 1`` gives raw local-time stable integrals.
    """
    worker = functools.partial(
        _motion_worker,
        copies=copies,
        times=tuple(float(t) for t in times),
        hurst=model.hurst,
        beta=model.beta,
        sigma=model.sigma,
        m=m,
        bins=bins,
        seed=seed,
    )
    return np.asarray(replicate_map(worker, replicates, jobs=jobs), dtype=np.float64)


# --- occupation scaling -------------------------------------------------


def _scaling_worker(
    index: int, horizons: tuple[int, ...], hurst: float, seed: int, convention: str
) -> np.ndarray:
    walk = sample_walk(max(horizons), hurst, spawn_rng(seed, index, ROLE_WALK))
    profiles = local_time_profiles(walk, horizons, convention)
    return np.asarray(
        [
            (self_intersections(profiles[h]), range_count(profiles[h]), max_local_time(profiles[h]))
            for h in horizons
        ],
        dtype=np.float64,
    )


@dataclasses.dataclass(frozen=True)
class ScalingResult:
    """Occupation statistics against horizon, with exponent fits.

    Arrays align with ``horizons``; the slope fits use the
    ``slope_grid`` subset and ``median_scaled`` applies the
    delta-normalization n**(-delta) to the per-horizon median of the
    maximum local time.
    """

    hurst: float
    beta: float
    replicates: int
    horizons: tuple[int, ...]
    mean_v: np.ndarray
    se_v: np.ndarray
    mean_r: np.ndarray
    se_r: np.ndarray
    median_scaled: np.ndarray
    slope_grid: tuple[int, ...]
    median_grid: tuple[int, ...]
    v_fit: SlopeFit
    r_fit: SlopeFit

    def median_ladder(self) -> np.ndarray:
        pick = [self.horizons.index(n) for n in self.median_grid]
        return self.median_scaled[pick]


def scaling_experiment(
    hurst: float,
    beta: float,
    replicates: int,
    seed: int,
    jobs: int = 1,
    slope_grid: Sequence[int] = SLOPE_GRID,
    median_grid: Sequence[int] = MEDIAN_GRID,
    convention: str = SITE_CEIL,
) -> ScalingResult:
    """Growth of self-intersections, range and maximum local time.

    One walk per replicate, checkpointed at every horizon in the union
    of the two grids; V and R get log-log slope fits over
    ``slope_grid``, the maximum local time a delta-rescaled median
    ladder over ``median_grid``.
    """
    slope_grid = tuple(sorted(int(n) for n in slope_grid))
    median_grid = tuple(sorted(int(n) for n in median_grid))
    horizons = tuple(sorted(set(slope_grid) | set(median_grid)))
    delta = delta_exponent(hurst, beta)
    worker = functools.partial(
        _scaling_worker, horizons=horizons, hurst=hurst, seed=seed, convention=convention
    )
    raw = np.asarray(replicate_map(worker, replicates, jobs=jobs), dtype=np.float64)
    v, r, top = raw[:, :, 0], raw[:, :, 1], raw[:, :, 2]
    scale = np.asarray(horizons, dtype=np.float64) ** (-delta)
    root_m = np.sqrt(replicates)
    pick = [horizons.index(n) for n in slope_grid]
    mean_v = v.mean(axis=0)
    mean_r = r.mean(axis=0)
    return ScalingResult(
        hurst=hurst,
        beta=beta,
        replicates=replicates,
        horizons=horizons,
        mean_v=mean_v,
        se_v=v.std(axis=0, ddof=1) / root_m,
        mean_r=mean_r,
        se_r=r.std(axis=0, ddof=1) / root_m,
        median_scaled=np.median(top, axis=0) * scale,
        slope_grid=slope_grid,
        median_grid=median_grid,
        v_fit=slope_fit(np.asarray(slope_grid, dtype=np.float64), mean_v[pick]),
        r_fit=slope_fit(np.asarray(slope_grid, dtype=np.float64), mean_r[pick]),
    )


# --- discrete functional against the limit energy -----------------------


def _functional_worker(
    index: int,
    n: int,
    thetas: tuple[float, ...],
    times: tuple[float, ...],
    hurst: float,
    beta: float,
    sigma: float,
    seed: int,
    convention: str,
) -> float:
    model = ModelParams(hurst=hurst, beta=beta, sigma=sigma)
    horizons = [int(np.floor(n * t + 1e-9)) for t in times]
    walk = sample_walk(max(max(horizons), 1), hurst, spawn_rng(seed, index, ROLE_WALK))
    profiles = local_time_profiles(walk, horizons, convention)
    return local_time_functional([profiles[h] for h in horizons], thetas, times, n, model)


@dataclasses.dataclass(frozen=True)
class FunctionalResult:
    """Discrete occupation functional draws against limit-energy draws."""

    discrete: np.ndarray
    limit: np.ndarray
    ks: float
    mean_discrete: float
    energy_mean: float
    energy_se: float

    @property
    def relative_mean_error(self) -> float:
        return abs(self.mean_discrete - self.energy_mean) / self.energy_mean


def functional_experiment(
    model: ModelParams,
    n: int,
    thetas: Sequence[float],
    times: Sequence[float],
    m: int,
    bins: int,
    replicates: int,
    seed: int,
    jobs: int = 1,
    convention: str = SITE_CEIL,
) -> FunctionalResult:
    """Weak-convergence check of the walk functional toward the energy.

    Draws the normalized occupation functional of the walk at scale n
    and, from disjoint streams, the beta-energy of fBm local time; the
    two samples are compared by KS distance and by relative mean error.
    """
    worker = functools.partial(
        _functional_worker,
        n=n,
        thetas=tuple(float(x) for x in thetas),
        times=tuple(float(t) for t in times),
        hurst=model.hurst,
        beta=model.beta,
        sigma=model.sigma,
        seed=seed,
        convention=convention,
    )
    discrete = np.asarray(replicate_map(worker, replicates, jobs=jobs), dtype=np.float64)
    limit = power_integral_draws(
        model.hurst, model.beta, thetas, times, m, bins, replicates, seed, jobs=jobs
    )
    return FunctionalResult(
        discrete=discrete,
        limit=limit,
        ks=ks_distance(discrete, limit),
        mean_discrete=float(discrete.mean()),
        energy_mean=float(limit.mean()),
        energy_se=float(limit.std(ddof=1) / np.sqrt(replicates)),
    )


# --- characteristic-function checks -------------------------------------


@dataclasses.dataclass(frozen=True)
class EcfCheckResult:
    """ECF of a process sample at unit time against the limit CF target."""

    estimate: EcfEstimate
    target: np.ndarray
    target_se: np.ndarray
    z: np.ndarray
    max_abs_z: float
    samples: np.ndarray
    energy_mean: float
    energy_se: float

    def rows(self) -> list[tuple[float, float, float, float, float]]:
        return [
            (float(u), float(re), float(se), float(tg), float(z))
            for u, re, se, tg, z in zip(
                self.estimate.u, self.estimate.re, self.estimate.se, self.target, self.z
            )
        ]


def _ecf_check(
    samples: np.ndarray,
    u: Sequence[float],
    model: ModelParams,
    m: int,
    bins: int,
    oracle_replicates: int,
    seed: int,
    jobs: int,
) -> EcfCheckResult:
    energy_mean, energy_se = estimate_power_integral_mean(
        model.hurst, model.beta, [1.0], [1.0], m, bins, oracle_replicates, seed, jobs=jobs
    )
    estimate = ecf(samples, u)
    target, target_se = limit_cf_target(estimate.u, model, energy_mean, energy_se)
    comparison = cf_compare(estimate, target, target_se)
    return EcfCheckResult(
        estimate=estimate,
        target=target,
        target_se=target_se,
        z=comparison.z,
        max_abs_z=comparison.max_abs_z,
        samples=samples,
        energy_mean=energy_mean,
        energy_se=energy_se,
    )


def schema_ecf_check(
    model: ModelParams,
    n: int,
    copies: int,
    u: Sequence[float],
    m: int,
    bins: int,
    replicates: int,
    oracle_replicates: int,
    seed: int,
    jobs: int = 1,
    kind: SceneryKind = SceneryKind.EXACT_STABLE,
    convention: str = SITE_CEIL,
) -> EcfCheckResult:
    """ECF of the schema at time 1 against the limit CF target."""
    samples = schema_samples(
        model, n, copies, [1.0], replicates, seed, jobs=jobs, kind=kind, convention=convention
    )[:, 0]
    return _ecf_check(samples, u, model, m, bins, oracle_replicates, seed, jobs)


def motion_ecf_check(
    model: ModelParams,
    copies: int,
    u: Sequence[float],
    m: int,
    bins: int,
    replicates: int,
    oracle_replicates: int,
    seed: int,
    jobs: int = 1,
) -> EcfCheckResult:
    """ECF of the limit-side superposition at time 1 against its CF."""
    samples = stable_motion_samples(model, copies, [1.0], m, bins, replicates, seed, jobs=jobs)[:, 0]
    return _ecf_check(samples, u, model, m, bins, oracle_replicates, seed, jobs)

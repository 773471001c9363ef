"""Monte Carlo oracle for the local-time fractional stable motion.

The limit of the reward schema is, conditionally on a fractional
Brownian motion B with Hurst index H, a stable integral of the local
time of B.  Nothing here has a closed form, so the oracle pipeline is

    fBm grid  ->  box-count local time L_t(x)  ->  either
      (a) the beta-energy  X = int |sum_j theta_j L_{t_j}(x)|**beta dx,
          whose Monte Carlo mean fixes the limit characteristic
          function exp(-sigma**beta |u|**beta E[X])  at level t = 1, or
      (b) one draw  Delta(t) = int L_t(x) dW(x)  against an independent
          beta-stable noise, and normalized sums of independent copies
          of Delta, which converge to the same limit process.

Local time is estimated by occupation counts over a uniform spatial
grid spanning the path's range, with one guard bin on each side:
bin width h = range / (bins - 2).  The estimator conserves occupation
mass exactly: sum_x L_t(x) * h = (floor(m t) + 1) / m.
"""

from __future__ import annotations

import dataclasses
import functools
from typing import Sequence

import numpy as np

from .errors import UsageError
from .fgn import FbmGrid, sample_fbm
from .model import ModelParams
from .stable import StableParams, sample_stable
from .streams import ROLE_NOISE, ROLE_ORACLE, ROLE_WALK, replicate_map, spawn_rng

__all__ = [
    "LocalTimeGrid",
    "fbm_local_time",
    "local_time_power_integral",
    "power_integral_draws",
    "estimate_power_integral_mean",
    "limit_cf_target",
    "sample_local_time_integral",
    "sample_stable_motion",
]


def _check_times(times, horizon: float) -> np.ndarray:
    times = np.asarray([float(t) for t in times], dtype=np.float64)
    if times.size == 0:
        raise UsageError("times must not be empty")
    if times[0] < 0.0:
        raise UsageError(f"times must be nonnegative, got {times[0]}")
    if np.any(np.diff(times) <= 0.0):
        raise UsageError(f"times must be strictly increasing, got {times.tolist()}")
    if times[-1] > horizon + 1e-12:
        raise UsageError(f"time {times[-1]} beyond path horizon {horizon}")
    return times


@dataclasses.dataclass(frozen=True)
class LocalTimeGrid:
    """Box-count local times of one path at several times.

    ``densities[j, b]`` estimates L_{times[j]} on spatial bin b; bins
    cover ``origin + b*h`` to ``origin + (b+1)*h``.  ``degenerate``
    flags a constant path, where the spatial range collapses and a unit
    floor width is substituted for h.
    """

    times: np.ndarray
    origin: float
    bin_width: float
    densities: np.ndarray
    degenerate: bool

    @property
    def bins(self) -> int:
        return self.densities.shape[1]


def fbm_local_time(path: FbmGrid, times: Sequence[float], bins: int) -> LocalTimeGrid:
    """Estimate the local time field of a gridded path by box counting."""
    if bins < 2:
        raise UsageError(f"bins must be at least 2, got {bins}")
    times = _check_times(times, path.horizon)
    ends = np.floor(path.m * times + 1e-9).astype(np.int64)
    values = path.values[: ends[-1] + 1]
    low = float(values.min())
    span = float(values.max()) - low
    degenerate = span <= 0.0
    # guard bin on each side keeps boundary hits strictly interior
    width = 1.0 if degenerate else span / (bins - 2)
    origin = low - width
    idx = np.clip(np.floor((values - origin) / width).astype(np.int64), 0, bins - 1)
    densities = np.empty((times.size, bins), dtype=np.float64)
    counts = np.zeros(bins, dtype=np.int64)
    prev = -1
    for j, end in enumerate(ends):
        counts += np.bincount(idx[prev + 1 : end + 1], minlength=bins)
        prev = int(end)
        densities[j] = counts / (path.m * width)
    return LocalTimeGrid(
        times=times, origin=origin, bin_width=width, densities=densities, degenerate=degenerate
    )


def local_time_power_integral(grid: LocalTimeGrid, thetas: Sequence[float], beta: float) -> float:
    """Beta-energy int |sum_j theta_j L_{t_j}(x)|**beta dx of a grid."""
    if not 0.0 < beta <= 2.0:
        raise UsageError(f"beta must lie in (0, 2], got {beta}")
    thetas = np.asarray(thetas, dtype=np.float64)
    if thetas.shape != (grid.densities.shape[0],):
        raise UsageError("need one theta per grid time")
    combined = thetas @ grid.densities
    return float(np.sum(np.abs(combined) ** beta) * grid.bin_width)


def _power_integral_draw(
    index: int,
    hurst: float,
    beta: float,
    thetas: tuple[float, ...],
    times: tuple[float, ...],
    m: int,
    bins: int,
    seed: int,
) -> float:
    rng = spawn_rng(seed, index, ROLE_ORACLE)
    path = sample_fbm(m, max(times), hurst, rng)
    grid = fbm_local_time(path, times, bins)
    return local_time_power_integral(grid, thetas, beta)


def power_integral_draws(
    hurst: float,
    beta: float,
    thetas: Sequence[float],
    times: Sequence[float],
    m: int,
    bins: int,
    replicates: int,
    seed: int,
    jobs: int = 1,
) -> np.ndarray:
    """Independent beta-energy draws, one per fBm path.

    Replicate i draws its path from the substream
    ``(seed, i, oracle-role)``, so results are reproducible and
    worker-count independent.
    """
    if replicates < 1:
        raise UsageError(f"replicates must be positive, got {replicates}")
    draw = functools.partial(
        _power_integral_draw,
        hurst=hurst,
        beta=beta,
        thetas=tuple(float(x) for x in thetas),
        times=tuple(float(t) for t in times),
        m=m,
        bins=bins,
        seed=seed,
    )
    return np.asarray(replicate_map(draw, replicates, jobs=jobs), dtype=np.float64)


def estimate_power_integral_mean(
    hurst: float,
    beta: float,
    thetas: Sequence[float],
    times: Sequence[float],
    m: int,
    bins: int,
    replicates: int,
    seed: int,
    jobs: int = 1,
) -> tuple[float, float]:
    """Monte Carlo mean and standard error of the beta-energy of fBm.

    This is the scalar that parametrizes the limit characteristic
    function at one time slice.
    """
    if replicates < 2:
        raise UsageError(f"replicates must be at least 2, got {replicates}")
    values = power_integral_draws(hurst, beta, thetas, times, m, bins, replicates, seed, jobs=jobs)
    return float(values.mean()), float(values.std(ddof=1) / np.sqrt(replicates))


def limit_cf_target(u, model: ModelParams, energy_mean: float, energy_se: float = 0.0):
    """Limit characteristic function exp(-sigma**beta |u|**beta E) with error.

    ``energy_mean`` is an estimate of the beta-energy mean E (from
    ``estimate_power_integral_mean``); the returned ``target_se``
    propagates its standard error through the exponential by the delta
    method.  Both arrays align with ``u``.
    """
    u = np.atleast_1d(np.asarray(u, dtype=np.float64))
    base = model.sigma**model.beta * np.abs(u) ** model.beta
    target = np.exp(-base * energy_mean)
    return target, target * base * energy_se


def sample_local_time_integral(
    path: FbmGrid,
    times: Sequence[float],
    bins: int,
    noise: StableParams,
    rng: np.random.Generator,
) -> np.ndarray:
    """One draw of Delta(t) = int L_t(x) dW(x) for all requested times.

    W is an independent beta-stable noise with scale ``noise.sigma``;
    a bin of width h contributes h**(1/beta) times a standard draw, the
    exact scaling of a stable measure with Lebesgue control.  Entries
    with t == 0 are exactly zero since L_0 has no mass.
    """
    grid = fbm_local_time(path, times, bins)
    draws = sample_stable(noise, rng, size=grid.bins)
    values = grid.densities @ (grid.bin_width ** (1.0 / noise.beta) * draws)
    values[grid.times == 0.0] = 0.0
    return values


def sample_stable_motion(
    copies: int,
    times: Sequence[float],
    model: ModelParams,
    m: int,
    bins: int,
    seed: int,
) -> np.ndarray:
    """One draw of the normalized superposition of local-time integrals.

        copies**(-1/beta) * sum_{i<copies} Delta_i(t),

    with each Delta_i built from an independent fBm path and noise.
    This converges in law, as copies grows, to the local-time
    fractional stable motion that the reward schema also targets;
    copies = 1 is a single Delta draw.
    """
    if copies < 1:
        raise UsageError(f"copies must be a positive integer, got {copies}")
    times = tuple(float(t) for t in times)
    noise = StableParams(beta=model.beta, sigma=model.sigma)
    rows = np.empty((copies, len(times)), dtype=np.float64)
    for i in range(copies):
        path = sample_fbm(m, max(times), model.hurst, spawn_rng(seed, i, ROLE_WALK))
        rows[i] = sample_local_time_integral(path, times, bins, noise, spawn_rng(seed, i, ROLE_NOISE))
    return float(copies) ** (-1.0 / model.beta) * rows.sum(axis=0)

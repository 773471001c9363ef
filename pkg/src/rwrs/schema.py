"""The random rewards schema: rescaled reward processes and their sums.

One copy is a dependent Gaussian walk through a fresh random scenery,
rescaled in time by n and in size by n**(-delta):

    D_n(t) = n**(-delta) * Z_{n t},   delta = 1 - H + H/beta,

with Z linearly interpolated between integer steps.  The schema
superposes ``copies`` independent copies under stable norming,

    G_n(t) = copies**(-1/beta) * sum_i D_n^{(i)}(t),

which converges, as n then copies grow, to the local-time fractional
stable motion the oracle in ``limit`` samples directly.
"""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from .local_times import SITE_CEIL, SceneryLike, interpolate, reward_series
from .fgn import sample_walk
from .model import ModelParams, SchemaConfig
from .stable import Scenery, SceneryKind, StableParams
from .streams import ROLE_SCENERY, ROLE_WALK, spawn_rng, stream_key

__all__ = ["sample_reward_process", "sample_reward_schema"]


def sample_reward_process(
    n: int,
    times: Sequence[float],
    model: ModelParams,
    seed: int,
    copy: int = 0,
    kind: SceneryKind = SceneryKind.EXACT_STABLE,
    scenery: SceneryLike | None = None,
    convention: str = SITE_CEIL,
) -> np.ndarray:
    """One rescaled reward path D_n evaluated at the given times.

    The walk and the scenery of copy ``copy`` come from disjoint
    substreams of ``seed``, so copies are mutually independent and any
    copy can be regenerated in isolation.  Passing ``scenery``
    overrides the keyed scenery (for experiments with frozen or
    deterministic rewards); the walk stream is unaffected.
    """
    config = SchemaConfig(n=n, copies=1, times=tuple(times))
    t_max = config.times[-1]
    steps = max(int(np.floor(n * t_max + 1e-9)) + 1, 1)
    walk = sample_walk(steps, model.hurst, spawn_rng(seed, copy, ROLE_WALK))
    if scenery is None:
        scenery = Scenery(
            kind=kind,
            params=StableParams(beta=model.beta, sigma=model.sigma),
            key=stream_key(seed, copy, ROLE_SCENERY),
        )
    series = reward_series(walk, scenery, convention=convention)
    rescaled = interpolate(series, n * np.asarray(config.times))
    return float(n) ** (-model.delta) * np.atleast_1d(rescaled)


def sample_reward_schema(
    config: SchemaConfig,
    model: ModelParams,
    seed: int,
    kind: SceneryKind = SceneryKind.EXACT_STABLE,
    scenery_for_copy: Callable[[int], SceneryLike] | None = None,
    convention: str = SITE_CEIL,
) -> np.ndarray:
    """One draw of the schema G_n at ``config.times``.

    Copies never share a walk or a scenery stream.  With copies = 1
    this returns exactly the same values as ``sample_reward_process``
    on the same seed.  ``scenery_for_copy`` optionally injects a
    scenery per copy index, for controlled experiments.
    """
    rows = np.empty((config.copies, len(config.times)), dtype=np.float64)
    for i in range(config.copies):
        injected = None if scenery_for_copy is None else scenery_for_copy(i)
        rows[i] = sample_reward_process(
            config.n,
            config.times,
            model,
            seed,
            copy=i,
            kind=kind,
            scenery=injected,
            convention=convention,
        )
    return float(config.copies) ** (-1.0 / model.beta) * rows.sum(axis=0)

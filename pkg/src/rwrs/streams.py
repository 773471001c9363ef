"""Deterministic random-stream derivation for replicate-parallel runs.

Every random object in the package is drawn from a generator keyed by a
tuple ``(seed, *path)`` of nonnegative integers.  Identical key tuples
give identical streams, distinct tuples give statistically independent
streams, and nothing depends on call order or worker scheduling.  Monte
Carlo drivers fan replicates out over a process pool and reassemble the
per-replicate results by index, so outputs are byte-identical for any
worker count.
"""

from __future__ import annotations

import multiprocessing
from typing import Callable, Sequence, TypeVar

import numpy as np

# role tags appended to stream keys so that the independent random
# ingredients of one replicate never share a stream
ROLE_WALK = 0
ROLE_SCENERY = 1
ROLE_NOISE = 2
ROLE_ORACLE = 3

_MASK64 = (1 << 64) - 1

T = TypeVar("T")


def _entropy(seed: int, path: Sequence[int]) -> tuple[int, ...]:
    # the leading length word makes the encoding injective: SeedSequence
    # zero-pads short entropy, so without it (seed, 0) and (seed,) would
    # collide and a zero role tag would alias the untagged stream
    return (len(path), *(int(v) & _MASK64 for v in (seed, *path)))


def spawn_rng(seed: int, *path: int) -> np.random.Generator:
    """Generator for the stream keyed by ``(seed, *path)``."""
    return np.random.default_rng(np.random.SeedSequence(_entropy(seed, path)))


def stream_key(seed: int, *path: int) -> int:
    """Collapse ``(seed, *path)`` to a single 64-bit key.

    Useful when a sub-component wants a scalar seed of its own, e.g. a
    hashed scenery: the key namespaces all streams derived from it.
    """
    state = np.random.SeedSequence(_entropy(seed, path)).generate_state(1, np.uint64)
    return int(state[0])


def replicate_map(fn: Callable[[int], T], count: int, jobs: int = 1) -> list[T]:
    """Evaluate ``fn(0), ..., fn(count - 1)``, optionally on a process pool.

    ``fn`` must be picklable (a module-level callable or a
    ``functools.partial`` of one) and must derive all of its randomness
    from the replicate index.  Results come back ordered by index, so
    the output is independent of ``jobs``.
    """
    if count < 0:
        raise ValueError(f"count must be nonnegative, got {count}")
    if jobs < 1:
        raise ValueError(f"jobs must be a positive integer, got {jobs}")
    if jobs == 1 or count <= 1:
        return [fn(i) for i in range(count)]
    chunk = max(1, count // (4 * jobs))
    with multiprocessing.Pool(processes=min(jobs, count)) as pool:
        return pool.map(fn, range(count), chunksize=chunk)

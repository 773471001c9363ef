"""Symmetric beta-stable variates and lazy i.i.d. random sceneries.

Two scenery flavours are supported.  ``EXACT_STABLE`` draws each site
value from the symmetric stable law itself, via the Chambers-Mallows-
Stuck transform, so normalized partial sums are stable at every n.
``SYMMETRIC_PARETO`` draws from a two-sided pure Pareto law whose tail
is calibrated so that n**(-1/beta) times a sum of n values converges to
the same stable law; it exercises the domain-of-attraction half of the
theory rather than the fixed point.

Site values are not stored.  A scenery is a pure hash of
``(key, site)``, so a walk over 10**7 distinct sites costs no memory
and two walks over the same keyed scenery always agree.
"""

from __future__ import annotations

import dataclasses
import enum
import math

import numpy as np

from .errors import UsageError

__all__ = [
    "StableParams",
    "SceneryKind",
    "Scenery",
    "sample_stable",
    "sample_scenery",
    "theoretical_cf",
    "pareto_scale",
]


@dataclasses.dataclass(frozen=True)
class StableParams:
    """Index ``beta`` in (0, 2] and scale ``sigma`` > 0.

    The characteristic function of the target law is
    ``exp(-sigma**beta * |u|**beta)``; beta = 2 is a centered Gaussian
    with variance 2 * sigma**2, beta = 1 a Cauchy law.
    """

    beta: float
    sigma: float = 1.0

    def __post_init__(self) -> None:
        if not 0.0 < self.beta <= 2.0:
            raise UsageError(f"beta must lie in (0, 2], got {self.beta}")
        if self.sigma <= 0.0:
            raise UsageError(f"sigma must be positive, got {self.sigma}")


class SceneryKind(enum.Enum):
    EXACT_STABLE = "stable"
    SYMMETRIC_PARETO = "pareto"


def theoretical_cf(u, params: StableParams) -> np.ndarray:
    """Characteristic function exp(-sigma**beta |u|**beta) on a grid."""
    u = np.asarray(u, dtype=np.float64)
    return np.exp(-(params.sigma**params.beta) * np.abs(u) ** params.beta)


def _cms(angle: np.ndarray, expo: np.ndarray, beta: float) -> np.ndarray:
    """Chambers-Mallows-Stuck transform for the symmetric case.

    ``angle`` is uniform on (-pi/2, pi/2) and ``expo`` unit exponential.
    See Chambers, Mallows & Stuck (1976); the symmetric branch needs no
    special-casing at beta = 1, where the tilt factor degenerates to 1
    and the draw reduces to tan(angle).
    """
    if beta == 2.0:
        # closed form: 2 sin(angle) sqrt(expo) is exactly N(0, 2)
        return 2.0 * np.sin(angle) * np.sqrt(expo)
    sin_part = np.sin(beta * angle) / np.cos(angle) ** (1.0 / beta)
    tilt = (np.cos((1.0 - beta) * angle) / expo) ** ((1.0 - beta) / beta)
    return sin_part * tilt


def sample_stable(params: StableParams, rng: np.random.Generator, size=None) -> np.ndarray:
    """Draw symmetric stable variates with cf exp(-sigma**beta |u|**beta)."""
    angle = rng.uniform(-math.pi / 2.0, math.pi / 2.0, size=size)
    expo = rng.standard_exponential(size=size)
    return params.sigma * _cms(np.asarray(angle), np.asarray(expo), params.beta)


def pareto_scale(params: StableParams) -> float:
    """Tail scale of the symmetric Pareto law attracted to ``params``.

    A two-sided Pareto magnitude with P(|xi| > x) = (s / x)**beta sums
    to the stable law of scale sigma when the tail constant matches

        s = sigma * C_beta**(1/beta),
        C_beta = (1 - beta) / (Gamma(2 - beta) cos(pi beta / 2)),

    with the beta = 1 limit C_1 = 2/pi.  C_beta -> 0 as beta -> 2, so
    the pure x**-2 tail is not attracted to the Gaussian under n**(1/2)
    norming and beta = 2 is rejected for this scenery kind.
    """
    beta = params.beta
    if beta >= 2.0:
        raise UsageError("symmetric Pareto scenery requires beta < 2")
    if beta == 1.0:
        c = 2.0 / math.pi
    else:
        c = (1.0 - beta) / (math.gamma(2.0 - beta) * math.cos(math.pi * beta / 2.0))
    return params.sigma * c ** (1.0 / beta)


# --- keyed site hashing -------------------------------------------------
#
# SplitMix64-style finalizer over (key, site, lane).  Every (key, site)
# pair yields two independent uniforms, one per lane, which feed the
# distribution transforms below.  All arithmetic is modulo 2**64.

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_LANE = 0xD1B54A32D192ED03


def _mix64(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


def _site_uniform(key: int, sites: np.ndarray, lane: int) -> np.ndarray:
    """Uniform on (0, 1), a pure function of (key, site, lane)."""
    base = np.uint64((int(key) + lane * _LANE) & 0xFFFFFFFFFFFFFFFF)
    z = base + sites * _GOLDEN
    bits = _mix64(_mix64(z + _GOLDEN))
    # take the top 53 bits; the half-step offset keeps the value in the
    # open interval so both log and power transforms are safe
    return ((bits >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0**-53


@dataclasses.dataclass(frozen=True)
class Scenery:
    """Lazy i.i.d. random field over the integer sites.

    Values are materialized on demand from the 64-bit ``key``; distinct
    keys give independent sceneries, equal keys identical ones.
    """

    kind: SceneryKind
    params: StableParams
    key: int

    def __post_init__(self) -> None:
        if self.kind is SceneryKind.SYMMETRIC_PARETO:
            pareto_scale(self.params)  # rejects beta = 2 up front

    def values_at(self, sites) -> np.ndarray:
        sites_u64 = np.ascontiguousarray(sites, dtype=np.int64).view(np.uint64)
        u_main = _site_uniform(self.key, sites_u64, 1)
        u_aux = _site_uniform(self.key, sites_u64, 2)
        if self.kind is SceneryKind.EXACT_STABLE:
            angle = math.pi * (u_main - 0.5)
            expo = -np.log(u_aux)
            return self.params.sigma * _cms(angle, expo, self.params.beta)
        magnitude = pareto_scale(self.params) * u_main ** (-1.0 / self.params.beta)
        return np.where(u_aux < 0.5, -magnitude, magnitude)

    def __getitem__(self, site: int) -> float:
        return float(self.values_at(np.asarray([site]))[0])


def sample_scenery(kind: SceneryKind, params: StableParams, sites, key: int) -> dict[int, float]:
    """Materialize scenery values on a finite site set as a plain dict."""
    site_arr = np.asarray(sorted(int(s) for s in set(sites)), dtype=np.int64)
    values = Scenery(kind, params, key).values_at(site_arr)
    return {int(s): float(v) for s, v in zip(site_arr, values)}

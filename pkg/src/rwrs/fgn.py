"""Exact sampling of fractional Gaussian noise and its partial-sum walk.

Increments are stationary centered Gaussians with covariance

    r(k) = 0.5 * (|k+1|**(2H) - 2|k|**(2H) + |k-1|**(2H)),

so the walk S_n = X_1 + ... + X_n has Var(S_n) = n**(2H) exactly for
every n; no asymptotic constant enters anywhere downstream.  Sampling
uses the Davies-Harte circulant embedding (Davies & Harte 1987; Dieker
2004): the covariance row is embedded in a circulant of order 2n whose
FFT gives the spectral weights.  For this covariance the eigenvalues
are nonnegative for all H in (0, 1); if rounding ever produces a
negative one, a dense Cholesky factorization covers small n and larger
n fail loudly.
"""

from __future__ import annotations

import dataclasses
import functools

import numpy as np

from .errors import NumericalError, UsageError

__all__ = ["fgn_covariance", "sample_fgn", "sample_walk", "WalkPath", "sample_fbm", "FbmGrid"]

# largest n for which an O(n**3) dense factorization is acceptable as a
# rescue path for a failed embedding
_DENSE_FALLBACK_MAX = 2048

# relative slack for calling an embedding eigenvalue negative
_EIG_TOL = 1e-9


def _check_hurst(hurst: float) -> None:
    if not 0.0 < hurst < 1.0:
        raise UsageError(f"hurst must lie in (0, 1), got {hurst}")


def fgn_covariance(lag, hurst: float) -> np.ndarray:
    """Covariance r(k) of fractional Gaussian noise at integer lags."""
    _check_hurst(hurst)
    k = np.abs(np.asarray(lag, dtype=np.float64))
    two_h = 2.0 * hurst
    return 0.5 * ((k + 1.0) ** two_h - 2.0 * k**two_h + np.abs(k - 1.0) ** two_h)


@functools.lru_cache(maxsize=8)
def _embedding_eigenvalues(n: int, hurst: float) -> np.ndarray:
    """Eigenvalues of the order-2n circulant embedding, cached per (n, H)."""
    row = fgn_covariance(np.arange(n + 1), hurst)
    circ = np.concatenate([row, row[n - 1 : 0 : -1]])
    eig = np.fft.fft(circ).real
    eig.flags.writeable = False
    return eig


def _sample_fgn_spectral(n: int, eig: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    # one complex weight per circulant frequency; conjugate symmetry
    # makes the inverse transform real (Dieker 2004, section 2.1.3)
    order = 2 * n
    scale = np.sqrt(np.maximum(eig, 0.0) / order)
    g_re = rng.standard_normal(n)
    g_im = rng.standard_normal(n)
    weights = np.empty(order, dtype=np.complex128)
    weights[0] = scale[0] * g_re[0]
    weights[1:n] = scale[1:n] / np.sqrt(2.0) * (g_re[1:] + 1j * g_im[1:])
    weights[n] = scale[n] * g_im[0]
    weights[n + 1 :] = np.conj(weights[1:n][::-1])
    return np.fft.fft(weights)[:n].real


def _sample_fgn_dense(n: int, hurst: float, rng: np.random.Generator) -> np.ndarray:
    lags = np.arange(n)
    cov = fgn_covariance(np.abs(lags[:, None] - lags[None, :]), hurst)
    chol = np.linalg.cholesky(cov)
    return chol @ rng.standard_normal(n)


def sample_fgn(n: int, hurst: float, rng: np.random.Generator) -> np.ndarray:
    """Draw n fractional Gaussian noise increments with unit lattice step."""
    _check_hurst(hurst)
    if n < 1:
        raise UsageError(f"n must be a positive integer, got {n}")
    if hurst == 0.5:
        return rng.standard_normal(n)
    eig = _embedding_eigenvalues(n, hurst)
    if eig.min() < -_EIG_TOL * eig.max():
        if n <= _DENSE_FALLBACK_MAX:
            return _sample_fgn_dense(n, hurst, rng)
        raise NumericalError(
            f"circulant embedding not nonnegative for n={n}, hurst={hurst} "
            f"(min eigenvalue {eig.min():.3e}); dense fallback limited to "
            f"n <= {_DENSE_FALLBACK_MAX}"
        )
    return _sample_fgn_spectral(n, eig, rng)


@dataclasses.dataclass(frozen=True)
class WalkPath:
    """A walk started at 0 with its generating increments.

    ``sums`` has length n + 1 with ``sums[0] == 0`` and
    ``sums[k] - sums[k-1] == increments[k-1]``.
    """

    hurst: float
    increments: np.ndarray
    sums: np.ndarray

    @property
    def n(self) -> int:
        return len(self.increments)


def sample_walk(n: int, hurst: float, rng: np.random.Generator) -> WalkPath:
    """Draw a length-n fractional Gaussian walk, S_0 = 0 included."""
    increments = sample_fgn(n, hurst, rng)
    sums = np.empty(n + 1, dtype=np.float64)
    sums[0] = 0.0
    np.cumsum(increments, out=sums[1:])
    return WalkPath(hurst=hurst, increments=increments, sums=sums)


@dataclasses.dataclass(frozen=True)
class FbmGrid:
    """Fractional Brownian motion sampled on the grid j/m, j = 0..floor(m*T).

    Marginals are exact: Var(values[j]) = (j/m)**(2*hurst).
    """

    hurst: float
    m: int
    horizon: float
    values: np.ndarray

    @property
    def times(self) -> np.ndarray:
        return np.arange(len(self.values)) / self.m


def sample_fbm(m: int, horizon: float, hurst: float, rng: np.random.Generator) -> FbmGrid:
    """Draw fractional Brownian motion on {0, 1/m, ..., floor(m*T)/m}.

    Rescales an exact fractional Gaussian walk by m**(-hurst); the grid
    must contain at least one step, i.e. m * horizon >= 1.
    """
    if m < 2:
        raise UsageError(f"m must be at least 2, got {m}")
    if horizon <= 0.0:
        raise UsageError(f"horizon must be positive, got {horizon}")
    steps = int(np.floor(m * horizon + 1e-9))
    if steps < 1:
        raise UsageError(f"horizon {horizon} shorter than one grid step 1/{m}")
    walk = sample_walk(steps, hurst, rng)
    values = walk.sums * float(m) ** (-hurst)
    return FbmGrid(hurst=hurst, m=m, horizon=float(horizon), values=values)

"""Exact sampling of 2D fBm trajectories.

The workhorse is multivariate circulant embedding of the increment
covariance (Wood-Chan): the 2x2 cross-covariance sequences are embedded
into circulant sequences of length 2m, diagonalized by the FFT, and the
per-frequency Hermitian 2x2 matrices are factored by their Hermitian
square roots. One complex draw yields two independent real trajectories
(real and imaginary parts).

The full asymmetric lag ordering is kept when building the embedding:
the causal model has gamma^D_12(h) != gamma^D_12(-h), so the
per-frequency matrices are complex Hermitian rather than real.

A dense-factorization sampler over the full 2n x 2n increment
covariance provides an exact ground-truth oracle for small n.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .covariance import increment_cov
from .errors import CovarianceNotPSDError, DomainError, EmbeddingError
from .model_core import ModelParams, derive
from .numerics import Hermitian2x2, make_generator, psd_sqrt_stack

__all__ = [
    "SampleMethod",
    "TrajectoryEnsemble",
    "EmbeddingSpectrum",
    "build_embedding",
    "sample_paths",
    "sample_paths_dense",
]

#: embedding size is doubled until PSD, up to MAX_DOUBLINGS times
MAX_DOUBLINGS = 6

#: trajectory pairs are processed in fixed-size chunks (memory only;
#: results do not depend on this value because every pair owns its
#: own random stream)
_PAIR_CHUNK = 256


class SampleMethod(enum.Enum):
    CIRCULANT = "circulant"
    DENSE_EXACT = "dense-exact"


@dataclass(frozen=True)
class TrajectoryEnsemble:
    """N sampled trajectories on the grid t_i = i * delta, i = 0..n.

    ``data`` has shape (N, n + 1, 2); every trajectory starts at the
    origin. ``n`` counts increments.
    """

    data: np.ndarray
    delta: float
    params: ModelParams
    seed: int
    method: SampleMethod

    def __post_init__(self):
        if self.data.ndim != 3 or self.data.shape[2] != 2 or self.data.shape[1] < 3:
            raise DomainError("data must have shape (N, n+1, 2) with n >= 2")
        if np.any(self.data[:, 0, :] != 0.0):
            raise DomainError("trajectories must start at the origin")
        self.data.flags.writeable = False

    @property
    def n_traj(self) -> int:
        return self.data.shape[0]

    @property
    def n(self) -> int:
        return self.data.shape[1] - 1

    def increments(self) -> np.ndarray:
        """Increment array of shape (N, n, 2)."""
        return np.diff(self.data, axis=1)

    def component(self, j: int) -> np.ndarray:
        if j not in (1, 2):
            raise DomainError(f"component index must be 1 or 2, got {j}")
        return self.data[:, :, j - 1]


@dataclass(frozen=True)
class EmbeddingSpectrum:
    """Per-frequency 2x2 matrices of the circulant embedding.

    g11, g22 are real, g12 complex, all of length 2m. ``sqrt_factors``
    holds the clipped Hermitian square roots actually used for
    sampling. min_eigenvalue is the most negative eigenvalue seen
    before clipping; clip_fraction the clipped mass relative to the
    total absolute spectral mass.
    """

    m: int
    delta: float
    params: ModelParams = field(repr=False)
    g11: np.ndarray = field(repr=False)
    g22: np.ndarray = field(repr=False)
    g12: np.ndarray = field(repr=False)
    sqrt_factors: np.ndarray = field(repr=False)
    min_eigenvalue: float
    clip_fraction: float

    def matrix(self, idx: int) -> Hermitian2x2:
        return Hermitian2x2(
            a11=float(self.g11[idx]), a22=float(self.g22[idx]), a12=complex(self.g12[idx])
        )

    @property
    def size(self) -> int:
        return 2 * self.m


def _require_pow2(n: int, what: str) -> None:
    if n < 2 or (n & (n - 1)) != 0:
        raise DomainError(f"{what} must be a power of two >= 2, got {n}")


def _embedding_lags(m: int) -> np.ndarray:
    # 0..m, then m+1..2m-1 mapped to negative lags h-2m; the asymmetric
    # ordering preserves gamma^D_12(h) != gamma^D_12(-h)
    return np.concatenate([np.arange(0, m + 1), np.arange(m + 1, 2 * m) - 2 * m]).astype(float)


def build_embedding(
    params: ModelParams,
    n: int,
    delta: float = 1.0,
    tol_scale: float = 1e-9,
) -> EmbeddingSpectrum:
    """Circulant embedding of the increment covariance for paths of n steps.

    The half-size m starts at n and doubles until the per-frequency
    matrices are positive semidefinite within tolerance (at most
    2^MAX_DOUBLINGS * n), else EmbeddingError carries the diagnostics.
    """
    _require_pow2(n, "n")
    if not delta > 0:
        raise DomainError(f"delta must be positive, got {delta}")
    d = derive(params)
    last_min = math.nan
    m = n
    for _ in range(MAX_DOUBLINGS + 1):
        h = _embedding_lags(m) * delta
        lam11 = np.fft.fft(increment_cov(h, delta, 1, 1, params, d))
        lam22 = np.fft.fft(increment_cov(h, delta, 2, 2, params, d))
        lam12 = np.fft.fft(increment_cov(h, delta, 1, 2, params, d))
        lam21 = np.fft.fft(increment_cov(h, delta, 2, 1, params, d))
        g11 = lam11.real
        g22 = lam22.real
        g12 = 0.5 * (lam12 + np.conj(lam21))
        tol = tol_scale * max(g11.max(), g22.max())
        L, mu2, frac = psd_sqrt_stack(g11, g22, g12)
        last_min = float(mu2.min())
        if last_min >= -tol:
            return EmbeddingSpectrum(
                m=m,
                delta=delta,
                params=params,
                g11=g11,
                g22=g22,
                g12=g12,
                sqrt_factors=L,
                min_eigenvalue=last_min,
                clip_fraction=frac,
            )
        m *= 2
    raise EmbeddingError(
        f"circulant embedding not PSD up to size {2 * m} "
        f"(min eigenvalue {last_min:.3e})"
    )


def _positions_from_increments(inc: np.ndarray) -> np.ndarray:
    out = np.zeros((inc.shape[0], inc.shape[1] + 1, 2))
    np.cumsum(inc, axis=1, out=out[:, 1:, :])
    return out


def sample_paths(
    params: ModelParams,
    n: int,
    N: int,
    delta: float = 1.0,
    seed: int = 0,
    embedding: EmbeddingSpectrum | None = None,
) -> TrajectoryEnsemble:
    """Draw N trajectories of n steps by circulant embedding.

    Deterministic in (params, n, N, delta, seed): trajectory pair p
    consumes the stream make_generator(seed, p), so the ensemble is
    reproducible regardless of chunking. Trajectories come in pairs
    (real/imaginary part of one complex draw); an odd N discards the
    last imaginary path.
    """
    if N < 1:
        raise DomainError(f"N must be >= 1, got {N}")
    emb = embedding if embedding is not None else build_embedding(params, n, delta)
    if emb.params != params or emb.delta != delta or emb.m < n:
        raise DomainError("embedding does not match the requested sampling run")
    M = emb.size
    L = emb.sqrt_factors
    n_pairs = (N + 1) // 2
    scale = math.sqrt(2.0 * M)
    data = np.empty((N, n + 1, 2))
    for p0 in range(0, n_pairs, _PAIR_CHUNK):
        p1 = min(p0 + _PAIR_CHUNK, n_pairs)
        xi = np.empty((p1 - p0, M, 2), dtype=complex)
        for p in range(p0, p1):
            g = make_generator(seed, stream=p).standard_normal((M, 2, 2))
            xi[p - p0] = (g[..., 0] + 1j * g[..., 1]) / math.sqrt(2.0)
        y = np.einsum("kij,pkj->pki", L, xi)
        z = np.fft.ifft(y, axis=1)[:, :n, :] * scale
        for p in range(p0, p1):
            t1 = 2 * p
            zz = z[p - p0]
            data[t1] = _positions_from_increments(zz.real[None, ...])[0]
            if t1 + 1 < N:
                data[t1 + 1] = _positions_from_increments(zz.imag[None, ...])[0]
    return TrajectoryEnsemble(
        data=data, delta=delta, params=params, seed=seed, method=SampleMethod.CIRCULANT
    )


def dense_increment_covariance(params: ModelParams, n: int, delta: float = 1.0) -> np.ndarray:
    """Full 2n x 2n increment covariance in component-block ordering."""
    d = derive(params)
    idx = np.arange(n, dtype=float)
    h = (idx[:, None] - idx[None, :]) * delta
    sig = np.empty((2 * n, 2 * n))
    sig[:n, :n] = increment_cov(h, delta, 1, 1, params, d)
    sig[n:, n:] = increment_cov(h, delta, 2, 2, params, d)
    sig[:n, n:] = increment_cov(h, delta, 1, 2, params, d)
    sig[n:, :n] = increment_cov(h, delta, 2, 1, params, d)
    return sig


def sample_paths_dense(
    params: ModelParams,
    n: int,
    N: int,
    delta: float = 1.0,
    seed: int = 0,
) -> TrajectoryEnsemble:
    """Exact ground-truth sampler for n <= 512.

    Factors the dense increment covariance by a symmetric eigenvalue
    square root; eigenvalues below -1e-8 (relative to the largest)
    signal an inconsistent covariance and raise CovarianceNotPSDError.
    """
    if n > 512:
        raise DomainError(f"dense sampler limited to n <= 512, got {n}")
    if n < 2:
        raise DomainError(f"n must be >= 2, got {n}")
    if N < 1:
        raise DomainError(f"N must be >= 1, got {N}")
    if not delta > 0:
        raise DomainError(f"delta must be positive, got {delta}")
    sig = dense_increment_covariance(params, n, delta)
    lam, vec = np.linalg.eigh(sig)
    lmax = float(lam.max())
    if lam.min() < -1e-8 * max(lmax, 1.0):
        raise CovarianceNotPSDError(
            f"increment covariance has eigenvalue {lam.min():.3e} "
            f"(largest {lmax:.3e})"
        )
    factor = vec * np.sqrt(np.clip(lam, 0.0, None))
    draws = make_generator(seed).standard_normal((N, 2 * n))
    x = draws @ factor.T
    inc = np.stack([x[:, :n], x[:, n:]], axis=2)
    return TrajectoryEnsemble(
        data=_positions_from_increments(inc),
        delta=delta,
        params=params,
        seed=seed,
        method=SampleMethod.DENSE_EXACT,
    )

"""Shared numerical kernels.

Gamma function, composite Gauss-Legendre quadrature, DFT wrappers,
closed-form 2x2 Hermitian eigendecomposition, log-log slope fitting and
the seeded Gaussian source used by the samplers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError

__all__ = [
    "gamma_fn",
    "Hermitian2x2",
    "eig_h2x2",
    "psd_sqrt_stack",
    "dft",
    "gauss_legendre_panels",
    "loglog_slope",
    "gaussian_rng",
    "make_generator",
]


def gamma_fn(x: float) -> float:
    """Gamma function on (0, 5], relative error well below 1e-13.

    Thin wrapper over the C library's Lanczos rational approximation with
    an explicit domain guard; every argument the model produces lies in
    (0, 4).
    """
    if not 0.0 < x <= 5.0:
        raise DomainError(f"gamma_fn defined on (0, 5], got {x}")
    return math.gamma(x)


@dataclass(frozen=True)
class Hermitian2x2:
    """A 2x2 Hermitian matrix [[a11, a12], [conj(a12), a22]]."""

    a11: float
    a22: float
    a12: complex

    def as_array(self) -> np.ndarray:
        return np.array(
            [[self.a11, self.a12], [np.conj(self.a12), self.a22]], dtype=complex
        )

    @property
    def trace(self) -> float:
        return self.a11 + self.a22


def eig_h2x2(m: Hermitian2x2) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian 2x2 matrix, closed form.

    Returns (eigenvalues, eigenvectors) with eigenvalues sorted in
    descending order and eigenvectors as unitary columns, so that
    V @ diag(w) @ V.conj().T reconstructs the matrix.
    """
    p, r, q = float(m.a11), float(m.a22), complex(m.a12)
    tau = 0.5 * (p + r)
    delta = math.hypot(0.5 * (p - r), abs(q))
    w = np.array([tau + delta, tau - delta])
    if delta <= 1e-300 or abs(q) == 0.0:
        # already diagonal; order axes by diagonal entry
        if p >= r:
            v = np.eye(2, dtype=complex)
        else:
            v = np.array([[0, 1], [1, 0]], dtype=complex)
        return w, v
    # eigenvector for w1 solves (p - w1) v0 + q v1 = 0
    v1 = np.array([q, w[0] - p], dtype=complex)
    v1 /= np.linalg.norm(v1)
    v2 = np.array([-np.conj(v1[1]), np.conj(v1[0])], dtype=complex)
    return w, np.column_stack([v1, v2])


def psd_sqrt_stack(
    g11: np.ndarray, g22: np.ndarray, g12: np.ndarray
) -> tuple[np.ndarray, np.ndarray, float]:
    """Hermitian square roots of a stack of 2x2 matrices, clipping negatives.

    Parameters are the per-frequency entries (g12 complex). Negative
    eigenvalues are clipped to zero before taking the square root.

    Returns (L, min_eig, clipped_fraction) where L has shape (m, 2, 2),
    min_eig is the per-matrix smaller eigenvalue, and clipped_fraction is
    the clipped negative mass relative to the total absolute spectral
    mass.
    """
    tau = 0.5 * (g11 + g22)
    dlt = np.hypot(0.5 * (g11 - g22), np.abs(g12))
    mu1 = tau + dlt
    mu2 = tau - dlt
    mu1c = np.maximum(mu1, 0.0)
    mu2c = np.maximum(mu2, 0.0)
    total = np.sum(np.abs(mu1)) + np.sum(np.abs(mu2))
    clipped = np.sum(np.maximum(-mu1, 0.0)) + np.sum(np.maximum(-mu2, 0.0))
    frac = float(clipped / total) if total > 0 else 0.0

    s1 = np.sqrt(mu1c)
    s2 = np.sqrt(mu2c)
    L = np.empty(g11.shape + (2, 2), dtype=complex)
    scale = np.maximum(np.abs(mu1), np.abs(mu2))
    degen = dlt <= 1e-14 * np.maximum(scale, 1e-300)
    with np.errstate(divide="ignore", invalid="ignore"):
        inv2d = np.where(degen, 0.0, 1.0 / (2.0 * dlt))
    # spectral projectors P1 = (G - mu2 I)/(2 dlt), P2 = (mu1 I - G)/(2 dlt)
    L[..., 0, 0] = s1 * (g11 - mu2) * inv2d + s2 * (mu1 - g11) * inv2d
    L[..., 1, 1] = s1 * (g22 - mu2) * inv2d + s2 * (mu1 - g22) * inv2d
    L[..., 0, 1] = (s1 - s2) * g12 * inv2d
    L[..., 1, 0] = np.conj(L[..., 0, 1])
    # near-degenerate pairs collapse to sqrt(mu) * I
    if np.any(degen):
        iso = np.sqrt(np.maximum(tau, 0.0))
        for a, b in ((0, 0), (1, 1)):
            L[..., a, b] = np.where(degen, iso, L[..., a, b])
        L[..., 0, 1] = np.where(degen, 0.0, L[..., 0, 1])
        L[..., 1, 0] = np.where(degen, 0.0, L[..., 1, 0])
    return L, mu2, frac


def _require_pow2(n: int) -> None:
    if n < 1 or (n & (n - 1)) != 0:
        raise DomainError(f"sequence length must be a power of two, got {n}")


def dft(values: np.ndarray, direction: str = "forward") -> np.ndarray:
    """Radix-2 discrete Fourier transform (numpy backend).

    ``forward`` computes sum_t x_t exp(-2*pi*i*t*k/n); ``inverse`` its
    1/n-scaled inverse, so a round trip is the identity.
    """
    x = np.asarray(values)
    _require_pow2(x.shape[-1])
    if direction == "forward":
        return np.fft.fft(x)
    if direction == "inverse":
        return np.fft.ifft(x)
    raise DomainError(f"direction must be 'forward' or 'inverse', got {direction!r}")


@lru_cache(maxsize=8)
def _leggauss(order: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(order)


def gauss_legendre_panels(edges: np.ndarray, order: int = 16) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of composite Gauss-Legendre quadrature.

    ``edges`` is an increasing array of panel boundaries; each panel gets
    a fixed-order rule. Returns flat (nodes, weights).
    """
    x, w = _leggauss(order)
    lo = edges[:-1][:, None]
    hi = edges[1:][:, None]
    half = 0.5 * (hi - lo)
    nodes = (0.5 * (hi + lo) + half * x[None, :]).ravel()
    weights = (half * w[None, :]).ravel()
    return nodes, weights


def loglog_slope(
    xs: np.ndarray,
    ys: np.ndarray,
    x_range: tuple[float, float] | None = None,
) -> tuple[float, float]:
    """Ordinary least-squares slope of log y against log x.

    Returns (slope, stderr). Points outside ``x_range`` are dropped;
    at least 8 positive points must remain.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    mask = np.isfinite(xs) & np.isfinite(ys)
    if x_range is not None:
        mask &= (xs >= x_range[0]) & (xs <= x_range[1])
    xs, ys = xs[mask], ys[mask]
    if xs.size < 8:
        raise DomainError("need at least 8 points in range for a slope fit")
    if np.any(xs <= 0) or np.any(ys <= 0):
        raise DomainError("log-log fit requires positive data")
    lx, ly = np.log(xs), np.log(ys)
    A = np.column_stack([lx, np.ones_like(lx)])
    coef, res, *_ = np.linalg.lstsq(A, ly, rcond=None)
    slope = float(coef[0])
    n = lx.size
    resid = ly - A @ coef
    dof = max(n - 2, 1)
    sxx = np.sum((lx - lx.mean()) ** 2)
    stderr = float(np.sqrt(np.sum(resid**2) / dof / sxx)) if sxx > 0 else np.inf
    return slope, stderr


def make_generator(seed: int, stream: int = 0) -> np.random.Generator:
    """Deterministic Generator for (seed, stream); streams are independent."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, stream])))


def gaussian_rng(seed: int, count: int) -> np.ndarray:
    """Deterministic stream of standard normal deviates for a 64-bit seed."""
    return make_generator(seed).standard_normal(count)

"""Statistical estimators mirroring the analytic quantities.

Sample cross-covariance of increments, raw (cross-)periodograms of the
process and of its increments, and ensemble averaging with standard
errors. Integrals are discretized as left Riemann sums on the sampling
grid and no tapering is applied; standard errors are computed across
trajectories so frequency bins stay independent.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .simulate import TrajectoryEnsemble

__all__ = [
    "EstimateMode",
    "SpectralEstimate",
    "fourier_freqs",
    "sample_cross_cov",
    "process_periodogram",
    "increment_periodogram",
    "ensemble_process_periodogram",
    "ensemble_increment_periodogram",
    "ensemble_average",
]

_CHUNK = 256


class EstimateMode(enum.Enum):
    INCREMENT_PSD = "increment-psd"
    PROCESS_PSD = "process-psd"


@dataclass(frozen=True)
class SpectralEstimate:
    """Ensemble-averaged spectral values per component pair.

    ``values[j-1, k-1, i]`` estimates the (j, k) spectrum at
    ``freqs[i]``; Hermitian in (j, k) by construction. ``se`` carries
    the standard error of the real part in its real part and of the
    imaginary part in its imaginary part.
    """

    freqs: np.ndarray
    values: np.ndarray
    se: np.ndarray
    n_traj: int
    mode: EstimateMode

    def __post_init__(self):
        if self.values.shape != (2, 2, len(self.freqs)):
            raise DomainError("values must have shape (2, 2, n_freqs)")
        for arr in (self.freqs, self.values, self.se):
            arr.flags.writeable = False

    def pair(self, j: int, k: int) -> np.ndarray:
        return self.values[j - 1, k - 1]

    def pair_se(self, j: int, k: int) -> np.ndarray:
        return self.se[j - 1, k - 1]


def fourier_freqs(n: int, delta: float = 1.0) -> np.ndarray:
    """Positive Fourier frequencies 2 pi k / (n delta), k = 1..n/2."""
    return 2.0 * math.pi * np.arange(1, n // 2 + 1) / (n * delta)


def sample_cross_cov(
    ens: TrajectoryEnsemble, j: int, k: int, lags: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Sample increment cross-covariance and its standard error per lag.

    Lags are in steps; lag h estimates cov(DZ_j(t+h), DZ_k(t)), i.e.
    component j leading, averaged over time and trajectories. The
    standard error is the trajectory-to-trajectory spread of the
    per-trajectory estimates divided by sqrt(N).
    """
    lags = np.asarray(lags, dtype=int)
    n = ens.n
    if np.any(np.abs(lags) > n - 1):
        raise DomainError(f"lags must satisfy |h| <= n-1 = {n - 1}")
    inc = ens.increments()
    a = inc[:, :, j - 1]
    b = inc[:, :, k - 1]
    nfft = 2 * n
    fa = np.fft.rfft(a, nfft, axis=1)
    fb = np.fft.rfft(b, nfft, axis=1)
    cc = np.fft.irfft(fa * np.conj(fb), nfft, axis=1)
    # cc[:, h] = sum_t a(t+h) b(t) for h >= 0, index nfft+h for h < 0
    per_traj = cc[:, lags % nfft] / (n - np.abs(lags))[None, :]
    est = per_traj.mean(axis=0)
    se = per_traj.std(axis=0, ddof=1) / math.sqrt(ens.n_traj)
    return est, se


def _riemann_transform(z: np.ndarray, freqs: np.ndarray, delta: float) -> np.ndarray:
    """delta * sum_t exp(i f t) z(t) over the left-endpoint grid.

    z has shape (..., n); returns shape freqs.shape + z.shape[:-1]
    transposed to (..., n_freqs).
    """
    n = z.shape[-1]
    t = np.arange(n) * delta
    e = np.exp(1j * np.outer(freqs, t))
    return delta * np.tensordot(z, e, axes=([-1], [1]))


def process_periodogram(
    traj: np.ndarray, j: int, k: int, freqs: np.ndarray, delta: float = 1.0
) -> np.ndarray:
    """Windowed cross-periodogram of one trajectory at the given frequencies.

    ``traj`` holds positions with shape (n+1, 2); the left Riemann sum
    runs over the first n grid points and T = n delta.
    """
    freqs = np.asarray(freqs, dtype=float)
    n = traj.shape[0] - 1
    T = n * delta
    aj = _riemann_transform(traj[:n, j - 1], freqs, delta)
    ak = _riemann_transform(traj[:n, k - 1], freqs, delta)
    return aj * np.conj(ak) / T


def increment_periodogram(
    traj: np.ndarray, j: int, k: int, freqs: np.ndarray, delta: float = 1.0
) -> np.ndarray:
    """Cross-periodogram of one trajectory's increment series."""
    freqs = np.asarray(freqs, dtype=float)
    inc = np.diff(traj, axis=0)
    n = inc.shape[0]
    T = n * delta
    aj = _riemann_transform(inc[:, j - 1], freqs, delta)
    ak = _riemann_transform(inc[:, k - 1], freqs, delta)
    return aj * np.conj(ak) / T


class _MeanSE:
    """Streaming mean and standard error of complex samples."""

    def __init__(self, shape):
        self.n = 0
        self.s_re = np.zeros(shape)
        self.s_im = np.zeros(shape)
        self.q_re = np.zeros(shape)
        self.q_im = np.zeros(shape)

    def add(self, batch: np.ndarray) -> None:
        self.n += batch.shape[0]
        self.s_re += batch.real.sum(axis=0)
        self.s_im += batch.imag.sum(axis=0)
        self.q_re += (batch.real**2).sum(axis=0)
        self.q_im += (batch.imag**2).sum(axis=0)

    def finish(self) -> tuple[np.ndarray, np.ndarray]:
        n = self.n
        mean = self.s_re / n + 1j * self.s_im / n
        var_re = np.maximum(self.q_re / n - (self.s_re / n) ** 2, 0.0) * n / max(n - 1, 1)
        var_im = np.maximum(self.q_im / n - (self.s_im / n) ** 2, 0.0) * n / max(n - 1, 1)
        se = np.sqrt(var_re / n) + 1j * np.sqrt(var_im / n)
        return mean, se


def _ensemble_spectral(
    ens: TrajectoryEnsemble, series: np.ndarray, freqs: np.ndarray, mode: EstimateMode
) -> SpectralEstimate:
    freqs = np.asarray(freqs, dtype=float)
    n = series.shape[1]
    T = n * ens.delta
    acc = {(j, k): _MeanSE(len(freqs)) for j in (1, 2) for k in (1, 2) if j <= k}
    for p0 in range(0, series.shape[0], _CHUNK):
        z = series[p0 : p0 + _CHUNK]
        amp = _riemann_transform(np.moveaxis(z, 2, 1), freqs, ens.delta)
        for (j, k), a in acc.items():
            a.add(amp[:, j - 1, :] * np.conj(amp[:, k - 1, :]) / T)
    values = np.empty((2, 2, len(freqs)), dtype=complex)
    se = np.empty((2, 2, len(freqs)), dtype=complex)
    for (j, k), a in acc.items():
        mean, err = a.finish()
        values[j - 1, k - 1] = mean
        se[j - 1, k - 1] = err
        if j != k:
            values[k - 1, j - 1] = np.conj(mean)
            se[k - 1, j - 1] = err
    return SpectralEstimate(
        freqs=freqs, values=values, se=se, n_traj=ens.n_traj, mode=mode
    )


def ensemble_process_periodogram(
    ens: TrajectoryEnsemble, freqs: np.ndarray
) -> SpectralEstimate:
    """Ensemble-averaged process cross-periodogram with standard errors."""
    series = ens.data[:, : ens.n, :]
    return _ensemble_spectral(ens, series, freqs, EstimateMode.PROCESS_PSD)


def ensemble_increment_periodogram(
    ens: TrajectoryEnsemble, freqs: np.ndarray | None = None
) -> SpectralEstimate:
    """Ensemble-averaged increment cross-periodogram.

    Defaults to the positive Fourier frequencies of the increment
    series, where the transform reduces to the FFT bins.
    """
    if freqs is None:
        freqs = fourier_freqs(ens.n, ens.delta)
    return _ensemble_spectral(ens, ens.increments(), freqs, EstimateMode.INCREMENT_PSD)


def ensemble_average(estimates: list[SpectralEstimate]) -> SpectralEstimate:
    """Pointwise complex mean of homogeneous estimates, with standard error."""
    if not estimates:
        raise DomainError("need at least one estimate")
    first = estimates[0]
    for e in estimates[1:]:
        if e.mode is not first.mode or not np.array_equal(e.freqs, first.freqs):
            raise DomainError("estimates have mismatched axes or modes")
    stack = np.stack([e.values for e in estimates])
    mean = stack.mean(axis=0)
    kk = len(estimates)
    if kk > 1:
        se = stack.real.std(axis=0, ddof=1) / math.sqrt(kk) + 1j * stack.imag.std(
            axis=0, ddof=1
        ) / math.sqrt(kk)
    else:
        se = np.zeros_like(mean)
    return SpectralEstimate(
        freqs=first.freqs.copy(),
        values=mean,
        se=se,
        n_traj=sum(e.n_traj for e in estimates),
        mode=first.mode,
    )

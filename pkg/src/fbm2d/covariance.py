"""Exact covariance structure of the process and of its increments.

The cross-covariance is
    gamma_jk(t, s) = sigma_j sigma_k / 2 *
        (w_jk(t) |t|^a + w_jk(-s) |s|^a - w_jk(t-s) |t-s|^a),
with a = H_j + H_k and direction-dependent weight
    w_jk(u) = rho_jk - eta_jk sign(u)            (a != 1)
    w_jk(u) = rho_jk - eta_jk sign(u) log|u|     (a == 1, causal).

Increments over a step delta are stationary; their covariance at lag h
is sigma_j sigma_k / 2 * [W(h+delta) + W(h-delta) - 2 W(h)] where
W(u) = w_jk(u)|u|^a. A direct differencing oracle of the process
covariance is provided for validation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .model_core import DerivedParams, ModelParams, derive

__all__ = [
    "LagGrid",
    "weight_w",
    "process_cov",
    "increment_cov",
    "increment_cov_oracle",
]


@dataclass(frozen=True)
class LagGrid:
    """Evaluation lags (time units, may be negative) and increment step."""

    lags: np.ndarray
    delta: float = 1.0

    def __post_init__(self):
        lags = np.asarray(self.lags, dtype=float)
        if not np.all(np.isfinite(lags)):
            raise DomainError("lags must be finite")
        if not self.delta > 0:
            raise DomainError(f"delta must be positive, got {self.delta}")
        object.__setattr__(self, "lags", lags)


def weight_w(u, j: int, k: int, derived: DerivedParams):
    """Direction-dependent covariance weight w_jk(u); sign(0) = 0."""
    u = np.asarray(u, dtype=float)
    rho = derived.rho_jk(j, k)
    eta = derived.eta_jk(j, k)
    if derived.log_weight and j != k:
        logu = np.zeros_like(u)
        nz = u != 0
        logu[nz] = np.log(np.abs(u[nz]))
        out = rho - eta * np.sign(u) * logu
    else:
        out = rho - eta * np.sign(u)
    return out if out.ndim else float(out)


def _weighted_power(u, j: int, k: int, derived: DerivedParams):
    """w_jk(u) |u|^a with the continuous-extension convention at u = 0."""
    u = np.asarray(u, dtype=float)
    a = derived.params.hurst(j) + derived.params.hurst(k)
    pw = np.abs(u) ** a
    rho = derived.rho_jk(j, k)
    eta = derived.eta_jk(j, k)
    if derived.log_weight and j != k:
        # |u|^a log|u| -> 0 as u -> 0 since a > 0
        plog = np.zeros_like(u)
        nz = u != 0
        plog[nz] = pw[nz] * np.log(np.abs(u[nz]))
        out = rho * pw - eta * np.sign(u) * plog
    else:
        out = (rho - eta * np.sign(u)) * pw
    return out


def process_cov(t, s, j: int, k: int, params: ModelParams, derived: DerivedParams | None = None):
    """Covariance <Z_j(t) Z_k(s)> of the process, t, s >= 0.

    Broadcasts over array arguments.
    """
    d = derived if derived is not None else derive(params)
    t = np.asarray(t, dtype=float)
    s = np.asarray(s, dtype=float)
    if np.any(t < 0) or np.any(s < 0):
        raise DomainError("process covariance is defined for t, s >= 0")
    pref = params.sigma(j) * params.sigma(k) / 2.0
    out = pref * (
        _weighted_power(t, j, k, d)
        + _weighted_power(-s, j, k, d)
        - _weighted_power(t - s, j, k, d)
    )
    return out if out.ndim else float(out)


def increment_cov(h, delta: float, j: int, k: int, params: ModelParams,
                  derived: DerivedParams | None = None):
    """Covariance of increments, gamma^Delta_jk(h) for step delta > 0.

    Stationary in h (= t - s, the j component leading); the transpose
    identity gamma^Delta_jk(h) = gamma^Delta_kj(-h) holds exactly.
    """
    if not delta > 0:
        raise DomainError(f"delta must be positive, got {delta}")
    d = derived if derived is not None else derive(params)
    h = np.asarray(h, dtype=float)
    pref = params.sigma(j) * params.sigma(k) / 2.0
    out = pref * (
        _weighted_power(h + delta, j, k, d)
        + _weighted_power(h - delta, j, k, d)
        - 2.0 * _weighted_power(h, j, k, d)
    )
    return out if out.ndim else float(out)


def increment_cov_oracle(h, delta: float, j: int, k: int, params: ModelParams,
                         s_base: float | None = None):
    """Increment covariance by direct differencing of the process covariance.

    Evaluates gamma(t+d, s+d) - gamma(t, s+d) - gamma(t+d, s) + gamma(t, s)
    with t = s + h and s chosen large enough that every time argument is
    nonnegative (default s = |h| + delta). Stationarity makes the result
    independent of s_base.
    """
    if not delta > 0:
        raise DomainError(f"delta must be positive, got {delta}")
    d = derive(params)
    h = np.asarray(h, dtype=float)
    s = np.full_like(h, s_base) if s_base is not None else np.abs(h) + delta
    if np.any(s + np.minimum(h, 0.0) < 0):
        raise DomainError("s_base too small: negative time argument")
    t = s + h
    out = (
        process_cov(t + delta, s + delta, j, k, params, d)
        - process_cov(t, s + delta, j, k, params, d)
        - process_cov(t + delta, s, j, k, params, d)
        + process_cov(t, s, j, k, params, d)
    )
    return out if np.ndim(out) else float(out)

"""Model parameters and derived constants of 2D fractional Brownian motion.

Two variants are supported: the causal model, driven by past-only
filtering of correlated noises, and the well-balanced model, which
filters symmetrically in time. The derived quantities are the marginal
normalization constants, the cross-correlation coefficient rho12, the
asymmetry coefficient eta12 (zero for the well-balanced variant) and the
2x2 matrix of complex spectral constants.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, LogWeightRegimeError
from .numerics import gamma_fn

__all__ = [
    "Variant",
    "ModelParams",
    "DerivedParams",
    "normalization_constant_causal",
    "normalization_constant_wb",
    "cross_correlation",
    "asymmetry",
    "log_weight_asymmetry",
    "is_log_regime",
    "spectral_matrix",
    "b1",
    "b2",
    "derive",
]

#: |H1 + H2 - 1| below this lands in the logarithmic-weight regime.
HSUM_ONE_TOL = 1e-12


class Variant(enum.Enum):
    CAUSAL = "causal"
    WELL_BALANCED = "wb"

    @classmethod
    def from_string(cls, s: str) -> "Variant":
        key = s.strip().lower().replace("_", "-")
        if key in ("causal", "c"):
            return cls.CAUSAL
        if key in ("wb", "well-balanced", "wellbalanced"):
            return cls.WELL_BALANCED
        raise DomainError(f"unknown variant {s!r}; expected 'causal' or 'wb'")


@dataclass(frozen=True)
class ModelParams:
    """User-facing model parameters.

    h1, h2 : Hurst exponents, strictly inside (0, 1).
    rho    : correlation of the driving noises, |rho| <= 1.
    sigma1, sigma2 : marginal scales (> 0), the standard deviations of
        the two components at time t = 1.
    variant : causal or well-balanced construction.
    """

    h1: float
    h2: float
    rho: float = 0.0
    sigma1: float = 1.0
    sigma2: float = 1.0
    variant: Variant = Variant.CAUSAL

    def __post_init__(self):
        for name, h in (("h1", self.h1), ("h2", self.h2)):
            if not (isinstance(h, (int, float)) and math.isfinite(h) and 0.0 < h < 1.0):
                raise DomainError(f"{name} must lie strictly in (0, 1), got {h}")
        if not (math.isfinite(self.rho) and abs(self.rho) <= 1.0):
            raise DomainError(f"|rho| must be <= 1, got {self.rho}")
        for name, s in (("sigma1", self.sigma1), ("sigma2", self.sigma2)):
            if not (math.isfinite(s) and s > 0.0):
                raise DomainError(f"{name} must be positive, got {s}")
        if not isinstance(self.variant, Variant):
            object.__setattr__(self, "variant", Variant.from_string(str(self.variant)))

    @property
    def hsum(self) -> float:
        return self.h1 + self.h2

    def hurst(self, j: int) -> float:
        if j == 1:
            return self.h1
        if j == 2:
            return self.h2
        raise DomainError(f"component index must be 1 or 2, got {j}")

    def sigma(self, j: int) -> float:
        if j == 1:
            return self.sigma1
        if j == 2:
            return self.sigma2
        raise DomainError(f"component index must be 1 or 2, got {j}")


def _check_h(h: float) -> None:
    if not (math.isfinite(h) and 0.0 < h < 1.0):
        raise DomainError(f"Hurst exponent must lie strictly in (0, 1), got {h}")


def normalization_constant_causal(h: float) -> float:
    """Marginal normalization a_H of the causal construction.

    a_H^2 = Gamma(2H+1) sin(pi H) / Gamma(H + 1/2)^2, which makes the
    marginal variance at t = 1 equal to sigma^2.
    """
    _check_h(h)
    return math.sqrt(gamma_fn(2 * h + 1) * math.sin(h * math.pi)) / gamma_fn(h + 0.5)


def normalization_constant_wb(h: float) -> float:
    """Marginal normalization a*_H of the well-balanced construction.

    Evaluated through the non-singular form
    a*_H^2 = 2H Gamma(2H) sin(pi H) / (4 Gamma(H+1/2)^2 cos^2(pi(H-1/2)/2)),
    which is finite at H = 1/2 (value 1/2) and equals the
    (1-2H)/cos(H pi) form everywhere else.
    """
    _check_h(h)
    num = 2 * h * gamma_fn(2 * h) * math.sin(math.pi * h)
    den = 4 * gamma_fn(h + 0.5) ** 2 * math.cos(math.pi * (h - 0.5) / 2) ** 2
    return math.sqrt(num / den)


def _root_factor(h1: float, h2: float) -> float:
    # sqrt(Gamma(2H1+1) Gamma(2H2+1) sin(pi H1) sin(pi H2)) / Gamma(H1+H2+1)
    return math.sqrt(
        gamma_fn(2 * h1 + 1)
        * gamma_fn(2 * h2 + 1)
        * math.sin(math.pi * h1)
        * math.sin(math.pi * h2)
    ) / gamma_fn(h1 + h2 + 1)


def cross_correlation(params: ModelParams) -> float:
    """Cross-correlation coefficient rho12 = corr(Z1(1), Z2(1)).

    The causal variant carries a cos((H2-H1) pi/2) factor which the
    well-balanced variant lacks; both reduce to rho when H1 = H2, and
    rho12^2 <= rho^2 always.
    """
    h1, h2 = params.h1, params.h2
    base = params.rho * _root_factor(h1, h2) / math.sin((h1 + h2) * math.pi / 2)
    if params.variant is Variant.CAUSAL:
        return base * math.cos((h2 - h1) * math.pi / 2)
    return base


def is_log_regime(params: ModelParams) -> bool:
    """True when the covariance weight carries the log|u| factor."""
    return (
        params.variant is Variant.CAUSAL
        and abs(params.hsum - 1.0) < HSUM_ONE_TOL
        and params.h1 != params.h2
    )


def asymmetry(params: ModelParams) -> float:
    """Asymmetry coefficient eta12 (eta21 = -eta12, eta11 = eta22 = 0).

    Zero for the well-balanced variant and whenever H1 = H2. Satisfies
    eta12 = -rho12 tan(pi(H1-H2)/2) tan(pi(H1+H2)/2) away from
    H1 + H2 = 1; on that line (causal, H1 != H2) no finite eta exists
    and LogWeightRegimeError marks the logarithmic-weight regime.
    """
    h1, h2 = params.h1, params.h2
    if params.variant is Variant.WELL_BALANCED or h1 == h2:
        return 0.0
    if is_log_regime(params):
        raise LogWeightRegimeError(
            "H1 + H2 = 1 with H1 != H2: covariance uses the log weight; "
            "use derive()/log_weight_asymmetry()"
        )
    return (
        params.rho
        * _root_factor(h1, h2)
        / math.cos((h1 + h2) * math.pi / 2)
        * math.sin((h2 - h1) * math.pi / 2)
    )


def log_weight_asymmetry(params: ModelParams) -> float:
    """Coefficient of sign(u) log|u| in the H1 + H2 = 1 causal regime.

    Continuity limit (H1 + H2 - 1) * eta12 as H1 + H2 -> 1: the parts of
    the three-term covariance that are linear in the time arguments
    cancel, and the surviving derivative term is the log weight with
    this coefficient.
    """
    h1, h2 = params.h1, params.h2
    return (
        -2.0
        * params.rho
        / math.pi
        * _root_factor(h1, h2)
        * gamma_fn(h1 + h2 + 1)  # undo the root factor's denominator
        * math.sin((h2 - h1) * math.pi / 2)
    )


def b1(h: float) -> float:
    """First covariance-spectrum bridge function, b1(1/2) = pi/2."""
    if abs(h - 0.5) < 1e-12:
        return math.pi / 2
    return gamma_fn(2 - 2 * h) * math.cos(h * math.pi) / (2 * h * (1 - 2 * h))


def b2(h: float) -> float:
    """Second bridge function; diverges at h = 1/2 (log regime)."""
    if abs(h - 0.5) < 1e-12:
        raise DomainError("b2 diverges at h = 1/2")
    return gamma_fn(2 - 2 * h) * math.sin(h * math.pi) / (2 * h * (1 - 2 * h))


def spectral_matrix(params: ModelParams) -> np.ndarray:
    """2x2 Hermitian matrix C of spectral constants c_jk.

    Causal entries carry the phase exp(-i pi/2 (H_j - H_k)) on the
    off-diagonal; well-balanced entries are real. Diagonals agree
    between variants (the marginals are plain fBm either way) and the
    bridge identities sigma_j sigma_k rho_jk = 4 b1((H_j+H_k)/2) Re c_jk
    and sigma_j sigma_k eta_jk = 4 b2((H_j+H_k)/2) Im c_jk hold.
    """
    h = (params.h1, params.h2)
    s = (params.sigma1, params.sigma2)
    c = np.zeros((2, 2), dtype=complex)
    if params.variant is Variant.CAUSAL:
        g = [gamma_fn(hj + 0.5) * normalization_constant_causal(hj) for hj in h]
        for j in range(2):
            c[j, j] = s[j] ** 2 * g[j] ** 2 / (2 * math.pi)
        off = params.rho * s[0] * s[1] * g[0] * g[1] / (2 * math.pi)
        phase = np.exp(-1j * math.pi / 2 * (h[0] - h[1]))
        c[0, 1] = off * phase
        c[1, 0] = np.conj(c[0, 1])
    else:
        g = [
            math.cos((hj - 0.5) * math.pi / 2)
            * gamma_fn(hj + 0.5)
            * normalization_constant_wb(hj)
            for hj in h
        ]
        for j in range(2):
            c[j, j] = 2 / math.pi * s[j] ** 2 * g[j] ** 2
        c[0, 1] = c[1, 0] = 2 / math.pi * params.rho * s[0] * s[1] * g[0] * g[1]
    return c


@dataclass(frozen=True)
class DerivedParams:
    """Immutable bundle of derived model constants."""

    params: ModelParams
    a1: float
    a2: float
    rho12: float
    eta12: float
    cmat: np.ndarray = field(repr=False)
    log_weight: bool = False

    def __post_init__(self):
        self.cmat.flags.writeable = False

    def rho_jk(self, j: int, k: int) -> float:
        return 1.0 if j == k else self.rho12

    def eta_jk(self, j: int, k: int) -> float:
        if j == k:
            return 0.0
        return self.eta12 if (j, k) == (1, 2) else -self.eta12

    @property
    def hsum(self) -> float:
        return self.params.hsum


def derive(params: ModelParams) -> DerivedParams:
    """Compute every derived constant for the given parameters.

    In the causal log-weight regime (H1 + H2 = 1, H1 != H2) the eta12
    field holds the log-weight coefficient and log_weight is set.
    """
    norm = (
        normalization_constant_causal
        if params.variant is Variant.CAUSAL
        else normalization_constant_wb
    )
    log_regime = is_log_regime(params)
    eta = log_weight_asymmetry(params) if log_regime else asymmetry(params)
    return DerivedParams(
        params=params,
        a1=norm(params.h1),
        a2=norm(params.h2),
        rho12=cross_correlation(params),
        eta12=eta,
        cmat=spectral_matrix(params),
        log_weight=log_regime,
    )

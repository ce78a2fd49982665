"""2D fractional Brownian motion with dependent components.

Exact circulant-embedding simulation of the causal and well-balanced
variants, their closed-form covariance and spectral characterization,
and the estimators that tie Monte Carlo output back to the theory.
"""

__version__ = "0.1.0"

from .covariance import LagGrid, increment_cov, increment_cov_oracle, process_cov, weight_w
from .errors import (
    CovarianceNotPSDError,
    DomainError,
    EmbeddingError,
    LogWeightRegimeError,
    UnsupportedRegimeError,
)
from .estimate import (
    EstimateMode,
    SpectralEstimate,
    ensemble_average,
    ensemble_increment_periodogram,
    ensemble_process_periodogram,
    fourier_freqs,
    increment_periodogram,
    process_periodogram,
    sample_cross_cov,
)
from .model_core import (
    DerivedParams,
    ModelParams,
    Variant,
    asymmetry,
    cross_correlation,
    derive,
    normalization_constant_causal,
    normalization_constant_wb,
    spectral_matrix,
)
from .simulate import (
    EmbeddingSpectrum,
    SampleMethod,
    TrajectoryEnsemble,
    build_embedding,
    sample_paths,
    sample_paths_dense,
)
from .spectral import (
    FreqGrid,
    ensemble_psd,
    ensemble_psd_asymptote,
    ensemble_psd_oracle,
    increment_psd,
    increment_psd_asymptote,
    increment_psd_oracle,
    oscillatory_C,
    oscillatory_S,
)

__all__ = [name for name in dir() if not name.startswith("_")]

"""Exception taxonomy shared across the package.

The CLI maps these onto exit codes: invalid input -> 2, numerical
failure -> 3.
"""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class LogWeightRegimeError(ValueError):
    """Raised when a finite asymmetry coefficient does not exist.

    The causal model with H1 + H2 = 1 and H1 != H2 is governed by the
    logarithmic covariance weight; use ``derive`` which carries the
    log-regime coefficient instead.
    """


class UnsupportedRegimeError(ValueError):
    """The requested quantity is undefined in this parameter regime."""


class EmbeddingError(RuntimeError):
    """Circulant embedding failed to become positive semidefinite."""


class CovarianceNotPSDError(RuntimeError):
    """A dense covariance matrix has a significantly negative eigenvalue."""

import numpy as np
import pytest

from fbm2d import ModelParams, Variant, cross_correlation, sample_paths


@pytest.fixture(scope="session")
def ensemble_cache():
    """Shared ensembles keyed by parameters so the Monte Carlo tests and
    the acceptance suite reuse simulation work within one session."""
    return {}


@pytest.fixture(scope="session")
def mc_ensemble(ensemble_cache):
    def get(params: ModelParams, n: int, N: int, seed: int):
        key = (
            params.h1, params.h2, params.rho, params.sigma1, params.sigma2,
            params.variant, n, N, seed,
        )
        if key not in ensemble_cache:
            ensemble_cache[key] = sample_paths(params, n=n, N=N, delta=1.0, seed=seed)
        return ensemble_cache[key]

    return get


def params_with_rho12(h1: float, h2: float, variant: Variant, rho12: float = 0.5):
    """Model parameters whose process cross-correlation equals rho12."""
    unit = cross_correlation(ModelParams(h1=h1, h2=h2, rho=1.0, variant=variant))
    return ModelParams(h1=h1, h2=h2, rho=rho12 / unit, variant=variant)


def assert_within(actual, expected, tol, label=""):
    err = np.max(np.abs(np.asarray(actual) - np.asarray(expected)))
    assert err <= tol, f"{label}: max deviation {err:.3e} > {tol:.1e}"

"""Acceptance criteria, one test per criterion.

Each test runs the corresponding validation check at the normative desk
scale and prints its status line; the assertion carries the measured
metric. Monte Carlo ensembles are shared with the rest of the session
through the validation cache.

Two sub-clauses are expected to fail and are left failing deliberately:
the well-balanced normalization constant at H = 1/2 equals 1/2 by the
normative formula (the criterion pins 1), and |rho12|(0.2, 0.7, rho=1)
equals 0.5389 (the criterion pins 0.5 +/- 0.02). See
notes/decisions.md in the review notes for the full analysis.
"""

import pytest

from fbm2d import validation


@pytest.fixture(scope="module")
def scale():
    return validation.ValidationScale()


@pytest.fixture(scope="module")
def accept_cache(ensemble_cache):
    return ensemble_cache


def _run(name, scale, cache):
    res = validation.run_checks([name], scale=scale, cache=cache)[0]
    print()
    print(res.line())
    return res


@pytest.mark.acceptance
class TestAcceptance:
    def test_01_constants(self, scale, accept_cache):
        res = _run("constants", scale, accept_cache)
        assert res.passed, res.metric

    def test_02_rho12_identity(self, scale, accept_cache):
        res = _run("rho12-identity", scale, accept_cache)
        assert res.passed, res.metric

    def test_03_covariance_oracle(self, scale, accept_cache):
        res = _run("cov-oracle", scale, accept_cache)
        assert res.passed, res.metric

    def test_04_one_sided_vanishing(self, scale, accept_cache):
        res = _run("one-sided-vanishing", scale, accept_cache)
        assert res.passed, res.metric

    def test_05_wiener_khinchin(self, scale, accept_cache):
        res = _run("wiener-khinchin", scale, accept_cache)
        assert res.passed, res.metric

    def test_06_ensemble_psd_vs_quadrature(self, scale, accept_cache):
        res = _run("ensemble-psd-oracle", scale, accept_cache)
        assert res.passed, res.metric

    def test_07_asymptotic_slopes(self, scale, accept_cache):
        res = _run("asymptotic-slopes", scale, accept_cache)
        assert res.passed, res.metric

    @pytest.mark.slow
    def test_08_sampler_vs_dense_oracle(self, scale, accept_cache):
        res = _run("sampler-vs-dense", scale, accept_cache)
        assert res.passed, res.metric

    @pytest.mark.slow
    def test_09_mc_covariance(self, scale, accept_cache):
        res = _run("mc-covariance", scale, accept_cache)
        assert res.passed, res.metric

    @pytest.mark.slow
    def test_10_mc_psd(self, scale, accept_cache):
        res = _run("mc-psd", scale, accept_cache)
        assert res.passed, res.metric

import math

import numpy as np
import pytest

from fbm2d.errors import DomainError, UnsupportedRegimeError
from fbm2d.model_core import ModelParams, Variant, derive
from fbm2d.numerics import loglog_slope
from fbm2d.spectral import (
    FreqGrid,
    ensemble_psd,
    ensemble_psd_asymptote,
    ensemble_psd_deriv_form,
    ensemble_psd_oracle,
    increment_psd,
    increment_psd_asymptote,
    increment_psd_oracle,
    increment_psd_tail_bound,
    oscillatory_C,
    oscillatory_CS,
    oscillatory_S,
)

# frozen oracle: 25-digit incomplete-gamma evaluation
C_50_09 = -0.0054621967648130952
S_50_09 = -0.019305471908304749


def cp(h1, h2, rho=0.5, **kw):
    return ModelParams(h1=h1, h2=h2, rho=rho, variant=Variant.CAUSAL, **kw)


def wp(h1, h2, rho=0.5, **kw):
    return ModelParams(h1=h1, h2=h2, rho=rho, variant=Variant.WELL_BALANCED, **kw)


class TestFreqGrid:
    def test_omega_tilde(self):
        g = FreqGrid(freqs=np.array([0.1, 0.2]), horizon_T=50.0)
        assert np.allclose(g.omega_tilde, [5.0, 10.0])
        with pytest.raises(DomainError):
            FreqGrid(freqs=np.array([0.1]), horizon_T=0.0)


class TestOscillatoryMoments:
    def test_zero_frequency(self):
        for a in (0.4, 0.9, 1.4):
            assert oscillatory_C(0.0, a) == pytest.approx(1.0 / (a + 1.0), abs=1e-13)
            assert abs(oscillatory_S(0.0, a)) < 1e-14

    def test_derivative_identity(self):
        # dS/dw = sin(w)/w - (a+1)/w S, checked by central differences
        a, w, h = 1.4, 3.0, 1e-5
        sp = oscillatory_S(w + h, a)
        sm = oscillatory_S(w - h, a)
        fd = (sp - sm) / (2 * h)
        analytic = math.sin(w) / w - (a + 1.0) / w * oscillatory_S(w, a)
        assert abs(fd - analytic) < 1e-6

    def test_high_frequency_vs_trapezoid_oracle(self):
        # brute-force trapezoid with 1e6 points
        a, w = 0.9, 50.0
        x = np.linspace(0.0, 1.0, 10**6 + 1)
        xa = x**a
        c_ref = np.trapezoid(xa * np.cos(w * x), x)
        s_ref = np.trapezoid(xa * np.sin(w * x), x)
        C, S = oscillatory_CS(w, a)
        assert abs(C - c_ref) < 1e-8
        assert abs(S - s_ref) < 1e-8
        assert abs(C - C_50_09) < 1e-13
        assert abs(S - S_50_09) < 1e-13

    def test_domain(self):
        with pytest.raises(DomainError):
            oscillatory_CS(1.0, 2.5)
        with pytest.raises(DomainError):
            oscillatory_CS(-1.0, 0.5)


class TestIncrementPsd:
    def test_hermitian(self):
        d = derive(cp(0.2, 0.7, rho=0.5))
        assert increment_psd(1.0, 1, 2, d) == pytest.approx(
            np.conj(increment_psd(1.0, 2, 1, d))
        )

    def test_brownian_flat(self):
        d = derive(cp(0.5, 0.5, rho=0.0, sigma1=1.0))
        v1 = increment_psd(0.5, 1, 1, d)
        v2 = increment_psd(2.5, 1, 1, d)
        assert abs(v1 - v2) / abs(v1) < 1e-6
        # flat level is the increment variance
        assert v1.real == pytest.approx(1.0, rel=1e-10)

    def test_low_frequency_asymptote(self):
        d = derive(cp(0.3, 0.3, rho=0.5))
        v = increment_psd(0.01, 1, 2, d)
        a = increment_psd_asymptote(0.01, 1, 2, d)
        assert abs(v - a) / abs(a) < 0.02

    def test_truncation_convergence(self):
        d = derive(cp(0.2, 0.7, rho=0.5))
        v1 = increment_psd(0.5, 1, 2, d, n_terms=10_000)
        v2 = increment_psd(0.5, 1, 2, d, n_terms=20_000)
        assert abs(v1 - v2) / abs(v1) < 1e-6

    def test_tail_bound_reported(self):
        d = derive(cp(0.2, 0.7, rho=0.5))
        assert increment_psd_tail_bound(0.5, 1, 2, d, 10_000) < 1e-7

    def test_divergence_at_origin(self):
        d = derive(cp(0.7, 0.7, rho=0.5))
        with pytest.raises(UnsupportedRegimeError):
            increment_psd(0.0, 1, 1, d)
        # short-memory pairs have a vanishing spectrum at the origin
        d2 = derive(cp(0.2, 0.2, rho=0.5))
        assert increment_psd(0.0, 1, 2, d2) == 0.0

    def test_low_frequency_slope(self):
        fs = np.logspace(-3, -2, 16)
        for h1, h2 in [(0.2, 0.7), (0.7, 0.7)]:
            d = derive(cp(h1, h2, rho=0.5))
            vals = np.abs([increment_psd(f, 1, 2, d).real for f in fs])
            slope, _ = loglog_slope(fs, vals)
            assert abs(slope - (1 - h1 - h2)) < 0.05

    def test_negative_frequency_conjugate(self):
        d = derive(cp(0.2, 0.7, rho=0.5))
        assert increment_psd(-1.0, 1, 2, d) == pytest.approx(
            np.conj(increment_psd(1.0, 1, 2, d))
        )


class TestIncrementPsdOracle:
    def test_matches_closed_form(self):
        p = cp(0.2, 0.7, rho=0.5)
        d = derive(p)
        for f in (0.5, 1.0, 2.0):
            closed = increment_psd(f, 1, 2, d)
            lag = increment_psd_oracle(f, 1, 2, p)
            assert abs(closed - lag) / abs(closed) < 1e-3

    def test_diagonal_real(self):
        p = cp(0.2, 0.7, rho=0.5)
        v = increment_psd_oracle(1.0, 1, 1, p)
        assert abs(v.imag) < 1e-10

    def test_variants_agree_for_equal_hurst(self):
        vc = increment_psd_oracle(1.0, 1, 2, cp(0.3, 0.3, rho=0.5))
        vw = increment_psd_oracle(1.0, 1, 2, wp(0.3, 0.3, rho=0.5))
        assert abs(vc - vw) < 1e-12

    def test_needs_nonzero_frequency(self):
        with pytest.raises(DomainError):
            increment_psd_oracle(1e-5, 1, 1, cp(0.3, 0.3))


class TestEnsemblePsd:
    def test_wb_cross_real(self):
        p = wp(0.2, 0.7, rho=0.5)
        v = ensemble_psd(7.0, 32.0, 1, 2, p)
        assert v.imag == 0.0

    def test_hermitian(self):
        p = cp(0.2, 0.7, rho=0.5)
        assert ensemble_psd(7.0, 32.0, 1, 2, p) == pytest.approx(
            np.conj(ensemble_psd(7.0, 32.0, 2, 1, p))
        )

    def test_horizon_scaling_exact(self):
        p = cp(0.2, 0.7, rho=0.5)
        a = 0.9
        v1 = ensemble_psd(7.0, 16.0, 1, 2, p)
        v2 = ensemble_psd(7.0, 32.0, 1, 2, p)
        assert v2 == pytest.approx(v1 * 2 ** (a + 1.0), rel=1e-12)

    def test_brownian_diagonal_closed_form(self):
        # exact Brownian result: <S> = 2 sigma^2 T^2 (w - sin w)/w^3
        p = cp(0.5, 0.5, rho=0.0, sigma1=1.3)
        for w in (2.0, 17.5):
            v = ensemble_psd(w, 8.0, 1, 1, p)
            expect = 2 * 1.3**2 * 8.0**2 * (w - math.sin(w)) / w**3
            assert v.real == pytest.approx(expect, rel=1e-12)
            assert v.imag == 0.0

    def test_matches_quadrature_oracle(self):
        for p in (cp(0.2, 0.7, rho=0.5), wp(0.2, 0.2, rho=0.5)):
            for om in (1.0, 5.0, 20.0):
                closed = ensemble_psd(om, 16.0, 1, 2, p)
                oracle = ensemble_psd_oracle(om, 16.0, 1, 2, p, n_grid=2000)
                assert abs(closed - oracle) / abs(closed) < 1e-6

    def test_oracle_hermitian(self):
        p = cp(0.2, 0.7, rho=0.5)
        assert ensemble_psd_oracle(5.0, 4.0, 1, 2, p, n_grid=600) == pytest.approx(
            np.conj(ensemble_psd_oracle(5.0, 4.0, 2, 1, p, n_grid=600))
        )

    def test_oracle_detects_asymmetry(self):
        v = ensemble_psd_oracle(10.0, 4.0, 1, 2, cp(0.2, 0.7, rho=0.5), n_grid=600)
        assert abs(v.imag) > 1e-4

    def test_brownian_oracle_tail(self):
        p = cp(0.5, 0.5, rho=0.0)
        v = ensemble_psd_oracle(40.0, 4.0, 1, 1, p, n_grid=1200)
        asy = ensemble_psd_asymptote(40.0, 4.0, 1, 1, p)
        assert v.real > 0
        assert abs(v - asy) / abs(v) < 1e-3

    def test_two_printed_forms_equivalent(self):
        for p in (cp(0.2, 0.7, rho=0.5), wp(0.7, 0.7, rho=0.5)):
            for w in (2.0, 10.0, 50.0):
                a = ensemble_psd(w, 16.0, 1, 2, p)
                b = ensemble_psd_deriv_form(w, 16.0, 1, 2, p)
                assert abs(a - b) / abs(a) < 1e-6

    def test_log_regime_rejected(self):
        with pytest.raises(UnsupportedRegimeError):
            ensemble_psd(5.0, 16.0, 1, 2, cp(0.3, 0.7, rho=0.5))
        # well-balanced on the same line is regular, as is the diagonal
        ensemble_psd(5.0, 16.0, 1, 2, wp(0.3, 0.7, rho=0.5))
        ensemble_psd(5.0, 16.0, 1, 1, cp(0.5, 0.5))

    def test_omega_domain(self):
        with pytest.raises(DomainError):
            ensemble_psd(0.0, 16.0, 1, 1, cp(0.3, 0.3))


class TestEnsemblePsdAsymptote:
    def test_tail_ratio(self):
        for p in (cp(0.2, 0.7, rho=0.5), cp(0.2, 0.2, rho=0.5), wp(0.7, 0.7, rho=0.5)):
            v = ensemble_psd(1e4, 16.0, 1, 2, p)
            a = ensemble_psd_asymptote(1e4, 16.0, 1, 2, p)
            assert abs(a.real / v.real - 1.0) < 0.02
            if v.imag != 0.0:
                assert abs(a.imag / v.imag - 1.0) < 0.02

    @pytest.mark.parametrize(
        "h1,h2,target",
        [(0.7, 0.7, -2.0), (0.2, 0.2, -1.4), (0.2, 0.5, -1.7)],
    )
    def test_slopes(self, h1, h2, target):
        p = cp(h1, h2, rho=0.5)
        d = derive(p)
        omegas = np.logspace(3, 4, 160)
        vals = np.abs(
            [ensemble_psd_asymptote(w, 16.0, 1, 2, p, d).real for w in omegas]
        )
        slope, _ = loglog_slope(omegas, vals)
        assert abs(slope - target) < 0.05

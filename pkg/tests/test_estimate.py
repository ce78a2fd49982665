import math

import numpy as np
import pytest

from fbm2d.errors import DomainError
from fbm2d.estimate import (
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
from fbm2d.model_core import ModelParams, Variant, derive
from fbm2d.simulate import sample_paths
from fbm2d.spectral import ensemble_psd, increment_psd

from conftest import params_with_rho12


def cp(h1, h2, rho=0.5, **kw):
    return ModelParams(h1=h1, h2=h2, rho=rho, variant=Variant.CAUSAL, **kw)


def wp(h1, h2, rho=0.5, **kw):
    return ModelParams(h1=h1, h2=h2, rho=rho, variant=Variant.WELL_BALANCED, **kw)


class TestSampleCrossCov:
    def test_lag_zero_variance(self, mc_ensemble):
        p = cp(0.2, 0.7, rho=0.5, sigma1=1.3)
        ens = mc_ensemble(p, 512, 2000, 51)
        est, se = sample_cross_cov(ens, 1, 1, np.array([0]))
        assert abs(est[0] - 1.3**2) < 4 * se[0]

    def test_one_sided_profile(self, mc_ensemble):
        p = cp(0.2, 0.5, rho=0.5)
        ens = mc_ensemble(p, 512, 2000, 52)
        pos, se_pos = sample_cross_cov(ens, 1, 2, np.arange(1, 11))
        assert np.all(np.abs(pos) < 4 * se_pos)
        neg, se_neg = sample_cross_cov(ens, 1, 2, np.arange(-10, 0))
        assert np.any(np.abs(neg) > 4 * se_neg)

    def test_full_profile_wb(self, mc_ensemble):
        from fbm2d.covariance import increment_cov

        p = params_with_rho12(0.2, 0.7, Variant.WELL_BALANCED)
        ens = mc_ensemble(p, 1024, 2000, 53)
        lags = np.arange(-20, 21)
        theory = increment_cov(lags.astype(float), 1.0, 1, 2, p)
        est, se = sample_cross_cov(ens, 1, 2, lags)
        assert np.max(np.abs(est - theory) / se) < 4.0

    def test_lag_range_checked(self, mc_ensemble):
        ens = mc_ensemble(cp(0.3, 0.3), 512, 2000, 51)
        with pytest.raises(DomainError):
            sample_cross_cov(ens, 1, 1, np.array([512]))


class TestPeriodogramBasics:
    def test_diagonal_real_nonnegative(self):
        ens = sample_paths(cp(0.2, 0.7, rho=0.5), n=64, N=3, seed=1)
        freqs = fourier_freqs(64)
        v = process_periodogram(ens.data[0], 1, 1, freqs)
        assert np.max(np.abs(v.imag)) < 1e-12
        assert np.all(v.real >= 0)
        v = increment_periodogram(ens.data[0], 2, 2, freqs)
        assert np.max(np.abs(v.imag)) < 1e-12
        assert np.all(v.real >= 0)

    def test_zero_trajectory(self):
        traj = np.zeros((65, 2))
        v = process_periodogram(traj, 1, 2, fourier_freqs(64))
        assert np.all(v == 0)

    def test_hermitian_pairs(self):
        ens = sample_paths(cp(0.2, 0.7, rho=0.5), n=64, N=4, seed=2)
        freqs = fourier_freqs(64)
        a = increment_periodogram(ens.data[1], 1, 2, freqs)
        b = increment_periodogram(ens.data[1], 2, 1, freqs)
        assert np.allclose(a, np.conj(b))


class TestEnsembleIncrementPeriodogram:
    def test_brownian_flat(self, mc_ensemble):
        ens = mc_ensemble(cp(0.5, 0.5, rho=0.0), 1024, 1000, 54)
        spec = ensemble_increment_periodogram(ens)
        vals = spec.pair(1, 1).real
        # flat white spectrum: band means agree across halves
        lo = vals[: len(vals) // 2].mean()
        hi = vals[len(vals) // 2 :].mean()
        assert abs(lo / hi - 1.0) < 0.02
        assert abs(vals.mean() - 1.0) < 0.02

    def test_matches_closed_form_in_band(self, mc_ensemble):
        p = params_with_rho12(0.2, 0.7, Variant.CAUSAL)
        d = derive(p)
        ens = mc_ensemble(p, 4096, 2000, 55)
        spec = ensemble_increment_periodogram(ens)
        m = (spec.freqs >= 0.05) & (spec.freqs <= 3.0)
        theory = np.array([increment_psd(f, 1, 2, d, n_terms=2000) for f in spec.freqs[m]])
        est = spec.pair(1, 2)[m]
        # band-mean comparison; single-bin estimates carry ~4% noise
        assert abs(est.real.mean() - theory.real.mean()) / abs(theory.real.mean()) < 0.05
        assert abs(est.imag.mean() - theory.imag.mean()) / abs(theory.imag.mean()) < 0.05

    def test_imaginary_part_signatures(self, mc_ensemble):
        band = (0.15, 1.5)
        pw = params_with_rho12(0.2, 0.7, Variant.WELL_BALANCED)
        ens = mc_ensemble(pw, 4096, 2000, 56)
        spec = ensemble_increment_periodogram(ens)
        m = (spec.freqs >= band[0]) & (spec.freqs < band[1])
        im = spec.pair(1, 2).imag[m].mean()
        im_se = math.sqrt(float(np.sum(spec.pair_se(1, 2).imag[m] ** 2))) / m.sum()
        assert abs(im) < 4 * im_se

        pc = params_with_rho12(0.2, 0.7, Variant.CAUSAL)
        ens = mc_ensemble(pc, 4096, 2000, 55)
        spec = ensemble_increment_periodogram(ens)
        im = spec.pair(1, 2).imag[m].mean()
        im_se = math.sqrt(float(np.sum(spec.pair_se(1, 2).imag[m] ** 2))) / m.sum()
        assert abs(im) > 4 * im_se


class TestEnsembleProcessPeriodogram:
    def test_matches_ensemble_psd_band_mean(self, mc_ensemble):
        # single-frequency cross-periodogram ordinates carry ~4-6%
        # statistical error at N=2000 and stay correlated across nearby
        # frequencies, so the comparison is a band mean with pinned seed
        p = params_with_rho12(0.2, 0.7, Variant.CAUSAL)
        ens = mc_ensemble(p, 4096, 2000, 55)
        T = float(ens.n)
        omegas = np.logspace(math.log10(5.0), 2.0, 24)
        spec = ensemble_process_periodogram(ens, omegas / T)
        theory = np.array([ensemble_psd(om, T, 1, 2, p) for om in omegas])
        vals = spec.pair(1, 2)
        assert abs((vals.real / theory.real).mean() - 1.0) < 0.05
        assert abs((vals.imag / theory.imag).mean() - 1.0) < 0.05


class TestEnsembleAverage:
    def _estimate(self, values, n_traj=10):
        f = np.array([0.1, 0.2, 0.3])
        vals = np.zeros((2, 2, 3), dtype=complex)
        vals[0, 0] = values
        vals[1, 1] = values
        vals[0, 1] = values
        vals[1, 0] = np.conj(values)
        return SpectralEstimate(
            freqs=f, values=vals, se=np.zeros_like(vals), n_traj=n_traj,
            mode=EstimateMode.INCREMENT_PSD,
        )

    def test_identity(self):
        e = self._estimate(np.array([1 + 1j, 2.0, 3 - 1j]))
        avg = ensemble_average([e, e, e])
        assert np.allclose(avg.values, e.values)
        assert avg.n_traj == 30

    def test_conjugate_pair_real(self):
        v = np.array([1 + 1j, 2 + 2j, 3 - 1j])
        avg = ensemble_average([self._estimate(v), self._estimate(np.conj(v))])
        assert np.max(np.abs(avg.values.imag)) < 1e-14

    def test_se_scaling(self):
        rng = np.random.default_rng(0)
        groups = []
        for n_batch in (16, 64):
            ests = [
                self._estimate(rng.normal(size=3) + 1j * rng.normal(size=3))
                for _ in range(n_batch)
            ]
            groups.append(np.mean(ensemble_average(ests).se.real))
        assert groups[1] < groups[0]
        assert groups[0] / groups[1] == pytest.approx(2.0, rel=0.35)

    def test_axis_mismatch(self):
        a = self._estimate(np.zeros(3))
        b = SpectralEstimate(
            freqs=np.array([0.1, 0.2, 0.4]),
            values=a.values.copy(),
            se=np.zeros((2, 2, 3), dtype=complex),
            n_traj=1,
            mode=EstimateMode.INCREMENT_PSD,
        )
        with pytest.raises(DomainError):
            ensemble_average([a, b])
        with pytest.raises(DomainError):
            ensemble_average([])

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wavepanel.coherence import (
    Ar1Params,
    MorletParams,
    ar1_fit,
    cone_of_influence,
    cwt_morlet,
    phase_classify,
    significance_montecarlo,
    wavelet_coherence,
    _ar1_simulate,
)


class TestParams:
    def test_admissibility_floor(self):
        with pytest.raises(ValueError, match="omega0"):
            MorletParams(omega0=4.0)

    def test_scale_grid_shape(self):
        params = MorletParams(s0=2.0, dj=0.25, n_scales=9)
        scales = params.scales(512)
        assert scales[0] == 2.0 and len(scales) == 9
        np.testing.assert_allclose(scales[4], 2.0 * 2.0 ** (0.25 * 4))

    def test_scale_exceeding_length_rejected(self):
        with pytest.raises(ValueError, match="exceeds"):
            MorletParams(n_scales=200).scales(64)

    def test_ar1_params_validation(self):
        with pytest.raises(ValueError):
            Ar1Params(phi=1.0, sigma=1.0)
        with pytest.raises(ValueError):
            Ar1Params(phi=0.3, sigma=0.0)


class TestCwt:
    def test_zero_series(self):
        field = cwt_morlet(np.zeros(128))
        assert np.max(np.abs(field.coeffs)) == 0.0

    def test_sinusoid_ridge_at_fourier_scale(self):
        params = MorletParams()
        period = 64.0
        x = np.sin(2 * np.pi * np.arange(512) / period)
        field = cwt_morlet(x, params)
        ridge = field.scales[np.argmax(field.power[:, 256])]
        expected = period / params.fourier_factor
        assert abs(np.log2(ridge) - np.log2(expected)) <= params.dj

    def test_impulse_localised(self):
        n, t0 = 256, 128
        x = np.zeros(n)
        x[t0] = 1.0
        field = cwt_morlet(x)
        i = np.argmin(np.abs(field.scales - 8.0))
        power = field.power[i]
        # power decays within a few e-folding widths of the impulse
        far = np.abs(np.arange(n) - t0) > 4 * np.sqrt(2) * 8.0
        assert power[far].max() < 1e-3 * power.max()

    def test_short_series_rejected(self):
        with pytest.raises(ValueError, match="16"):
            cwt_morlet(np.zeros(8))


class TestCoherence:
    def test_self_coherence(self):
        x = np.random.default_rng(0).standard_normal(256)
        field = wavelet_coherence(x, x)
        assert np.min(field.r2[field.inside_coi()]) >= 0.99

    def test_bounds_hard(self):
        rng = np.random.default_rng(1)
        field = wavelet_coherence(rng.standard_normal(256),
                                  rng.standard_normal(256))
        assert np.all(field.r2 >= 0.0) and np.all(field.r2 <= 1.0)
        assert np.all(field.phase >= -np.pi) and np.all(field.phase <= np.pi)

    def test_symmetry(self):
        rng = np.random.default_rng(2)
        x, y = rng.standard_normal(200), rng.standard_normal(200)
        xy = wavelet_coherence(x, y)
        yx = wavelet_coherence(y, x)
        np.testing.assert_allclose(xy.r2, yx.r2, atol=1e-10)
        np.testing.assert_allclose(xy.phase, -yx.phase, atol=1e-10)

    def test_amplitude_invariance(self):
        rng = np.random.default_rng(3)
        x, y = rng.standard_normal(200), rng.standard_normal(200)
        base = wavelet_coherence(x, y)
        scaled = wavelet_coherence(7.5 * x, y)
        np.testing.assert_allclose(scaled.r2, base.r2, atol=1e-10)

    def test_quarter_period_shift_phase(self):
        params = MorletParams()
        period = 32.0
        t = np.arange(512)
        x = np.sin(2 * np.pi * t / period)
        y = np.sin(2 * np.pi * (t - period / 4) / period)  # x leads y
        field = wavelet_coherence(x, y, params)
        i = np.argmin(np.abs(field.scales - period / params.fourier_factor))
        assert abs(abs(field.phase[i, 256]) - np.pi / 2) < 0.1

    def test_independent_noise_discriminated(self):
        rng = np.random.default_rng(4)
        field = wavelet_coherence(rng.standard_normal(512),
                                  rng.standard_normal(512))
        interior = field.inside_coi()
        assert field.r2[interior].mean() < 0.5

    def test_no_smoothing_degenerates_to_one(self):
        rng = np.random.default_rng(5)
        field = wavelet_coherence(rng.standard_normal(128),
                                  rng.standard_normal(128), smoothing=None)
        np.testing.assert_allclose(field.r2, 1.0, atol=1e-9)

    def test_length_mismatch(self):
        with pytest.raises(ValueError, match="length"):
            wavelet_coherence(np.zeros(64), np.zeros(65))

    def test_constant_input_rejected(self):
        with pytest.raises(ValueError, match="constant"):
            wavelet_coherence(np.ones(64), np.random.default_rng(0).standard_normal(64))


class TestPhaseClassify:
    def test_table_of_quadrants(self):
        c = phase_classify(np.pi / 4)
        assert c.in_phase and c.leader == "x" and not c.boundary
        c = phase_classify(-np.pi / 4)
        assert c.in_phase and c.leader == "y"
        c = phase_classify(3 * np.pi / 4)
        assert not c.in_phase and c.leader == "y"
        c = phase_classify(-3 * np.pi / 4)
        assert not c.in_phase and c.leader == "x"

    def test_boundaries_flagged_closed_left(self):
        assert phase_classify(0.0).boundary
        assert phase_classify(0.0).in_phase and phase_classify(0.0).leader == "x"
        assert phase_classify(np.pi / 2).boundary
        assert not phase_classify(np.pi / 2).in_phase
        assert phase_classify(np.pi).boundary
        assert phase_classify(np.pi).leader == "x"
        assert phase_classify(-np.pi).leader == "x"

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            phase_classify(4.0)

    @given(st.floats(min_value=-np.pi, max_value=np.pi,
                     allow_nan=False, allow_infinity=False))
    @settings(max_examples=200, deadline=None)
    def test_total_and_quadrant_consistent(self, phi):
        c = phase_classify(phi)
        if 0 < phi < np.pi / 2:
            assert c.in_phase and c.leader == "x"
        elif -np.pi / 2 < phi < 0:
            assert c.in_phase and c.leader == "y"
        elif np.pi / 2 < phi < np.pi:
            assert not c.in_phase and c.leader == "y"
        elif -np.pi < phi < -np.pi / 2:
            assert not c.in_phase and c.leader == "x"
        else:
            assert c.boundary


class TestConeOfInfluence:
    def test_edges_and_mirror(self):
        coi = cone_of_influence(101)
        assert coi[0] == 0.0
        np.testing.assert_allclose(coi, coi[::-1])
        assert np.argmax(coi) == 50

    def test_efolding_slope(self):
        coi = cone_of_influence(64)
        np.testing.assert_allclose(coi[10], 10 / np.sqrt(2))


class TestAr1:
    def test_white_noise(self):
        fit = ar1_fit(np.random.default_rng(0).standard_normal(4096))
        assert abs(fit.phi) < 0.05

    def test_simulated_ar1_recovered(self):
        rng = np.random.default_rng(1)
        x = _ar1_simulate(rng, 4096, Ar1Params(phi=0.7, sigma=1.0))
        fit = ar1_fit(x)
        assert 0.65 <= fit.phi <= 0.75

    def test_variance_matching(self):
        rng = np.random.default_rng(2)
        x = _ar1_simulate(rng, 8192, Ar1Params(phi=0.6, sigma=0.8))
        fit = ar1_fit(x)
        # sigma^2 = var(x) (1 - phi^2) by construction
        assert abs(fit.sigma ** 2 - np.var(x) * (1 - fit.phi ** 2)) < 1e-12

    def test_constant_rejected(self):
        with pytest.raises(ValueError, match="constant"):
            ar1_fit(np.ones(64))


class TestSignificance:
    def test_identical_pair_blankets_coi(self):
        rng = np.random.default_rng(3)
        x = rng.standard_normal(192)
        field = significance_montecarlo(x, x, n_surrogates=100, seed=0)
        inside = field.inside_coi()
        assert field.sig_mask[inside].mean() > 0.95

    def test_stricter_quantile_is_subset(self):
        rng = np.random.default_rng(4)
        x, y = rng.standard_normal(192), rng.standard_normal(192)
        loose = significance_montecarlo(x, y, n_surrogates=100, quantile=0.95,
                                        seed=11)
        strict = significance_montecarlo(x, y, n_surrogates=100, quantile=0.99,
                                         seed=11)
        assert np.all(strict.sig_mask <= loose.sig_mask)
        assert strict.sig_mask.sum() <= loose.sig_mask.sum()

    def test_surrogate_floor(self):
        with pytest.raises(ValueError, match="100"):
            significance_montecarlo(np.zeros(64), np.zeros(64), n_surrogates=50)

    def test_per_cell_mode(self):
        rng = np.random.default_rng(5)
        x, y = rng.standard_normal(160), rng.standard_normal(160)
        field = significance_montecarlo(x, y, n_surrogates=100, seed=2,
                                        per_cell=True)
        assert field.thresholds.shape == field.r2.shape

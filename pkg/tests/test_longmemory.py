import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wavepanel.longmemory import (
    cluster_markets,
    fractal_connectivity,
    hurst_wls,
    logscale_diagram,
    rolling_hurst,
    scaling_parameters,
    scaling_parameters_from_fit,
    synth_fgn,
)
from wavepanel.modwt import dwt_detail_variances, modwt_transform


class TestSynthFgn:
    def test_deterministic_per_seed(self):
        np.testing.assert_array_equal(synth_fgn(0.7, 256, 9), synth_fgn(0.7, 256, 9))
        assert not np.array_equal(synth_fgn(0.7, 256, 9), synth_fgn(0.7, 256, 10))

    def test_half_is_white(self):
        z = synth_fgn(0.5, 4096, 1)
        r1 = np.corrcoef(z[:-1], z[1:])[0, 1]
        assert abs(r1) < 0.05

    def test_lag_one_autocorrelation_oracle(self):
        # fGn autocovariance gives rho(1) = 2^(2H-1) - 1; the mean-free
        # estimator over a few seeds stays within the stated tolerance
        target = 2.0 ** (2 * 0.8 - 1) - 1
        estimates = []
        for seed in range(10):
            z = synth_fgn(0.8, 4096, seed)
            estimates.append(np.sum(z[:-1] * z[1:]) / np.sum(z * z))
        assert abs(np.mean(estimates) - target) < 0.05

    def test_unit_variance(self):
        z = synth_fgn(0.7, 8192, 3)
        assert abs(np.var(z) - 1.0) < 0.2

    def test_domain_checks(self):
        with pytest.raises(ValueError):
            synth_fgn(1.2, 256, 0)
        with pytest.raises(ValueError):
            synth_fgn(0.5, 32, 0)


class TestLogscale:
    def test_white_noise_flat(self):
        diagram = logscale_diagram(synth_fgn(0.5, 4096, 11))
        assert abs(diagram.fit_slope) < 0.1
        assert abs(diagram.fit.H - 0.5) < 0.05

    def test_fgn_slope_oracle(self):
        diagram = logscale_diagram(synth_fgn(0.8, 4096, 12))
        assert abs(diagram.fit_slope - 0.6) <= 0.1

    def test_eta_matches_direct_computation(self):
        x = synth_fgn(0.6, 2048, 13)
        diagram = logscale_diagram(x, 2, 8)
        variances, counts = dwt_detail_variances(x, 8)
        np.testing.assert_allclose(diagram.eta, np.log2(variances), atol=1e-10)
        np.testing.assert_array_equal(diagram.n_j, counts)

    def test_ci_brackets_eta(self):
        diagram = logscale_diagram(synth_fgn(0.7, 2048, 14))
        assert np.all(diagram.ci_low < diagram.eta)
        assert np.all(diagram.eta < diagram.ci_high)

    def test_octave_validation(self):
        x = synth_fgn(0.5, 256, 15)
        with pytest.raises(ValueError, match="floor"):
            logscale_diagram(x, 2, 12)
        with pytest.raises(ValueError, match="fewer than 4|at least 3"):
            logscale_diagram(x, 2, 8)  # n_8 = 1 coefficient


class TestHurstWls:
    def test_exact_linear_diagram(self):
        js = np.arange(2, 9)
        eta = 0.6 * js + 1.0
        fit = hurst_wls(js, eta, 4096)
        assert fit.H == pytest.approx(0.8, abs=1e-12)
        assert fit.std_err == pytest.approx(0.0, abs=1e-12)
        assert fit.p_value < 1e-50

    def test_weight_scale_invariance(self):
        js = np.arange(2, 9)
        rng = np.random.default_rng(16)
        eta = 0.2 * js + rng.normal(0, 0.1, js.size)
        h_small = hurst_wls(js, eta, 1024).H
        h_big = hurst_wls(js, eta, 2048).H
        assert h_small == pytest.approx(h_big, abs=1e-12)

    def test_equal_weights_reduce_to_ols(self):
        js = np.arange(1, 8)
        rng = np.random.default_rng(17)
        eta = -0.3 * js + rng.normal(0, 0.2, js.size)
        fit = hurst_wls(js, eta, 4096, weights=np.ones(js.size))
        slope, intercept = np.polyfit(js, eta, 1)
        assert fit.slope == pytest.approx(slope, abs=1e-12)
        assert fit.intercept == pytest.approx(intercept, abs=1e-12)

    def test_too_few_octaves(self):
        with pytest.raises(ValueError, match="3 octaves"):
            hurst_wls(np.array([2, 3]), np.array([0.1, 0.2]), 1024)

    def test_calibration_quick(self):
        for target in (0.5, 0.7, 0.9):
            estimates = [
                logscale_diagram(synth_fgn(target, 4096, 100 + s)).fit.H
                for s in range(15)
            ]
            assert abs(np.mean(estimates) - target) <= 0.03
            assert np.std(estimates) <= 0.05

    def test_slope_ci_covers_true_exponent(self):
        # fitted slope within its 95% interval in >= 90% of fGn replicates
        hits = total = 0
        for target in (0.5, 0.7, 0.9):
            for rep in range(40):
                fit = logscale_diagram(synth_fgn(target, 4096, 7000 + rep)).fit
                lo, hi = fit.alpha_ci(0.95)
                hits += lo <= 2 * target - 1 <= hi
                total += 1
        assert hits / total >= 0.90


class TestScalingParams:
    def test_first_identity_row(self):
        p = scaling_parameters(0.117)
        # values as printed to three decimals; epsilon guards float repr
        assert abs(p.H_lrd - 0.558) <= 5e-4 + 1e-9
        assert abs(p.h_ss - (-0.442)) <= 5e-4 + 1e-9
        assert abs(p.D - 2.442) <= 5e-4 + 1e-9

    def test_second_identity_row(self):
        p = scaling_parameters(0.247)
        assert abs(p.H_lrd - 0.624) <= 5e-4 + 1e-9
        assert abs(p.h_ss - (-0.376)) <= 5e-4 + 1e-9
        assert abs(p.D - 2.376) <= 5e-4 + 1e-9

    def test_zero_alpha_boundary(self):
        p = scaling_parameters(0.0)
        assert (p.H_lrd, p.h_ss, p.D) == (0.5, -0.5, 2.5)

    def test_ci_mapping(self):
        p = scaling_parameters(0.117, (0.042, 0.192))
        assert p.H_ci == pytest.approx((0.521, 0.596), abs=5e-4)
        assert p.h_ci == pytest.approx((-0.479, -0.404), abs=5e-4)
        assert p.D_ci == pytest.approx((2.404, 2.479), abs=5e-4)
        assert p.D_ci[0] < p.D_ci[1]

    @given(st.floats(min_value=-2, max_value=2, allow_nan=False))
    @settings(max_examples=100, deadline=None)
    def test_affine_identities_exact(self, alpha):
        p = scaling_parameters(alpha)
        assert p.H_lrd == (1 + alpha) / 2
        assert p.h_ss == p.H_lrd - 1
        assert p.D == 2 - p.h_ss

    def test_from_fit_carries_cf(self):
        diagram = logscale_diagram(synth_fgn(0.7, 2048, 18))
        p = scaling_parameters_from_fit(diagram.fit)
        assert p.cf == pytest.approx(2.0 ** diagram.fit_intercept)
        assert p.cf_ci[0] < p.cf < p.cf_ci[1]
        assert p.alpha == diagram.fit_slope


class TestRollingHurst:
    def test_splice_detection(self):
        rng_seed = 19
        a = synth_fgn(0.5, 2600, rng_seed)
        b = synth_fgn(0.8, 2600, rng_seed + 1)
        x = np.concatenate([a, b])
        series = rolling_hurst(x, window_length=260, step=24)
        pre = series.hurst[series.anchors < 2600]
        post = series.hurst[series.anchors >= 2600 + 260]
        assert post.mean() - pre.mean() >= 0.15

    def test_stationary_stable(self):
        count = total = 0
        for seed in range(5):
            series = rolling_hurst(synth_fgn(0.5, 2600, 400 + seed))
            count += np.sum(series.hurst > 0.6)
            total += series.hurst.size
        assert count / total < 0.10

    def test_single_window_matches_full_fit(self):
        x = synth_fgn(0.7, 1024, 20)
        series = rolling_hurst(x, window_length=1024, step=1024)
        full = logscale_diagram(x, 2, series.j2).fit
        assert len(series.hurst) == 1
        assert series.hurst[0] == pytest.approx(full.H, abs=1e-12)

    def test_window_octave_validation(self):
        with pytest.raises(ValueError, match="too short"):
            rolling_hurst(synth_fgn(0.5, 1024, 0), window_length=128, j2=6)


class TestConnectivity:
    def decompose_panel(self, series, levels=7):
        return [modwt_transform(s, levels) for s in series]

    def test_common_factor_pair(self):
        rng = np.random.default_rng(21)
        x = synth_fgn(0.8, 4096, 22)
        y = x + 0.1 * rng.standard_normal(4096)
        result = fractal_connectivity(self.decompose_panel([x, y]), 4, 7)
        assert result.F[0, 1] >= 0.9
        assert result.converged[0, 1]

    def test_independent_panel_weak(self):
        series = [synth_fgn(0.7, 4096, 30 + s) for s in range(4)]
        result = fractal_connectivity(self.decompose_panel(series), 4, 7)
        off = result.F[~np.eye(4, dtype=bool)]
        assert np.max(np.abs(off)) < 0.5

    def test_diagonal_and_symmetry_exact(self):
        series = [synth_fgn(0.6, 2048, 40 + s) for s in range(3)]
        result = fractal_connectivity(self.decompose_panel(series, 6), 4, 6)
        np.testing.assert_array_equal(np.diag(result.F), 1.0)
        np.testing.assert_array_equal(result.F, result.F.T)

    def test_range_validation(self):
        series = [synth_fgn(0.6, 512, 50 + s) for s in range(2)]
        with pytest.raises(ValueError, match="8 coarse"):
            fractal_connectivity(self.decompose_panel(series, 7), 5, 7)


def block_matrix(p=6, inner=0.9, outer=0.0):
    F = np.full((p, p), outer)
    half = p // 2
    F[:half, :half] = inner
    F[half:, half:] = inner
    np.fill_diagonal(F, 1.0)
    return F


class TestClustering:
    def test_two_block_recovery(self):
        F = block_matrix()
        dendrogram, labels = cluster_markets(F, n_clusters=2)
        assert labels.tolist() == [0, 0, 0, 1, 1, 1]
        heights = dendrogram.heights
        assert np.all(np.diff(heights) >= -1e-12)

    def test_identity_matrix_singletons(self):
        F = np.eye(5)
        dendrogram, labels = cluster_markets(F, height=0.99)
        np.testing.assert_allclose(dendrogram.heights, 1.0)
        assert sorted(labels.tolist()) == [0, 1, 2, 3, 4]

    def test_perturbed_blocks_robust(self):
        recovered = 0
        for seed in range(100):
            rng = np.random.default_rng(seed)
            noise = rng.uniform(-0.05, 0.05, (6, 6))
            noise = (noise + noise.T) / 2
            F = np.clip(block_matrix() + noise, -1, 1)
            np.fill_diagonal(F, 1.0)
            _, labels = cluster_markets(F, n_clusters=2)
            ok = labels.tolist() in ([0, 0, 0, 1, 1, 1], [1, 1, 1, 0, 0, 0])
            recovered += ok
        assert recovered >= 95

    def test_deterministic_tie_break(self):
        # all distances equal: the first merge must join indices 0 and 1
        F = np.full((4, 4), 0.5)
        np.fill_diagonal(F, 1.0)
        dendrogram, _ = cluster_markets(F, n_clusters=2)
        assert dendrogram.merges[0][:2] == (0, 1)

    def test_k_validation(self):
        with pytest.raises(ValueError, match="n_clusters"):
            cluster_markets(np.eye(3), n_clusters=5)
        with pytest.raises(ValueError, match="exactly one"):
            cluster_markets(np.eye(3))

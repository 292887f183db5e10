"""Acceptance suite: one test per criterion, each at its stated tolerance.

Run with `pytest tests/test_acceptance.py -v -s` to see one line per
criterion. Monte Carlo criteria use fixed seeds so the whole suite is
deterministic.
"""

import contextlib
import io
import subprocess
import sys
import time
from pathlib import Path

import numpy as np

from wavepanel.cli import main as cli_main
from wavepanel.contagion import event_ttest, rolling_wavelet_correlation
from wavepanel.coherence import significance_montecarlo, wavelet_coherence
from wavepanel.dependence import (
    covariance_decomposition,
    wavelet_correlation,
    wavelet_cross_correlation,
    wmc,
)
from wavepanel.longmemory import (
    cluster_markets,
    fractal_connectivity,
    logscale_diagram,
    rolling_hurst,
    scaling_parameters,
    synth_fgn,
)
from wavepanel.modwt import build_filter, modwt_transform, mra_components, \
    mra_reconstruct

DATA = Path(__file__).resolve().parents[1] / "data" / "sample_prices.csv"
LA8 = build_filter("la8")


def report(num, text):
    print(f"PASS criterion {num}: {text}")


def grid_series():
    """100 random series over n in {512, 1024, 4096} with J up to 6."""
    rng = np.random.default_rng(20240101)
    cases = []
    lengths = [512, 1024, 4096]
    for i in range(100):
        n = lengths[i % 3]
        levels = 1 + i % 6
        cases.append((rng.standard_normal(n), levels))
    return cases


def test_criterion_01_mra_additivity():
    start = time.perf_counter()
    worst = 0.0
    for x, levels in grid_series():
        dec = modwt_transform(x, levels, LA8)
        worst = max(worst, np.max(np.abs(mra_reconstruct(dec) - x)))
    elapsed = time.perf_counter() - start
    assert worst <= 1e-8
    assert elapsed < 5.0
    report(1, f"MRA additivity max err {worst:.2e} over 100 series "
              f"({elapsed:.2f}s < 5s)")


def test_criterion_02_energy_preservation():
    worst = 0.0
    for x, levels in grid_series():
        dec = modwt_transform(x, levels, LA8)
        energy = np.sum(dec.details ** 2) + np.sum(dec.smooth ** 2)
        worst = max(worst, abs(energy - np.sum(x ** 2)) / np.sum(x ** 2))
    assert worst <= 1e-10
    report(2, f"energy preservation max rel err {worst:.2e}")


def test_criterion_03_covariance_decomposition():
    rng = np.random.default_rng(3)
    common = rng.standard_normal(4096)
    a = common + 0.7 * rng.standard_normal(4096)
    b = 0.6 * common + 0.7 * rng.standard_normal(4096)
    dec_a = modwt_transform(a, 6, LA8)
    dec_b = modwt_transform(b, 6, LA8)
    per_level, smooth_cov = covariance_decomposition(dec_a, dec_b)
    sample = np.cov(a, b, bias=True)[0, 1]
    rel = abs(per_level.sum() + smooth_cov - sample) / abs(sample)
    assert rel <= 1e-8
    report(3, f"covariance decomposition rel err {rel:.2e}")


def test_criterion_04_self_correlation():
    x = np.random.default_rng(4).standard_normal(2048)
    dec = modwt_transform(x, 6, LA8)
    dec_neg = modwt_transform(-x, 6, LA8)
    rho_self = wavelet_correlation(dec, dec).estimate
    rho_anti = wavelet_correlation(dec, dec_neg).estimate
    assert np.max(np.abs(rho_self - 1.0)) <= 1e-12
    assert np.max(np.abs(rho_anti + 1.0)) <= 1e-12
    report(4, "self-correlation +1 / sign-flip -1 exact at every level")


def test_criterion_05_lag_recovery():
    hits = 0
    for seed in range(20):
        base = modwt_transform(
            np.random.default_rng(500 + seed).standard_normal(1024), 6, LA8
        )
        x = mra_components(base)[2]  # level-3 band-limited series
        y = np.roll(x, 5)  # y(t) = x(t - 5)
        profs = wavelet_cross_correlation(
            modwt_transform(x, 6, LA8), modwt_transform(y, 6, LA8), 12
        )
        peak = profs[2].lags[np.argmax(profs[2].rho)]
        hits += peak == 5
    assert hits == 20
    report(5, "cross-correlation peak at +5 lag, level 3, 20/20 seeds")


def test_criterion_06_hurst_calibration():
    start = time.perf_counter()
    summary = []
    for target in (0.5, 0.7, 0.9):
        estimates = np.array([
            logscale_diagram(synth_fgn(target, 4096, 600 + rep), 2, 8, LA8).fit.H
            for rep in range(50)
        ])
        bias = abs(estimates.mean() - target)
        spread = estimates.std()
        assert bias <= 0.03, f"H={target}: bias {bias:.4f}"
        assert spread <= 0.05, f"H={target}: std {spread:.4f}"
        summary.append(f"H={target}: bias {bias:.3f} std {spread:.3f}")
    elapsed = time.perf_counter() - start
    assert elapsed < 30.0
    report(6, "; ".join(summary) + f" ({elapsed:.1f}s < 30s)")


def test_criterion_07_scaling_identity_rows():
    tol = 5e-4 + 1e-9  # printed three-decimal values; epsilon guards float repr
    p = scaling_parameters(0.117)
    assert abs(p.H_lrd - 0.558) <= tol
    assert abs(p.h_ss - (-0.442)) <= tol
    assert abs(p.D - 2.442) <= tol
    p = scaling_parameters(0.247)
    assert abs(p.H_lrd - 0.624) <= tol
    assert abs(p.h_ss - (-0.376)) <= tol
    assert abs(p.D - 2.376) <= tol
    report(7, "alpha 0.117 -> (0.558, -0.442, 2.442); "
              "0.247 -> (0.624, -0.376, 2.376) within 5e-4")


def test_criterion_08_coherence_bounds_and_self():
    rng = np.random.default_rng(8)
    x = rng.standard_normal(512)
    y = rng.standard_normal(512)
    field = wavelet_coherence(x, y)
    assert np.all(field.r2 >= 0.0) and np.all(field.r2 <= 1.0)
    self_field = wavelet_coherence(x, x)
    assert np.all(self_field.r2 >= 0.0) and np.all(self_field.r2 <= 1.0)
    inside = self_field.inside_coi()
    min_self = self_field.r2[inside].min()
    assert min_self >= 0.99
    report(8, f"R2 in [0,1] on full grids; self-coherence min {min_self:.4f} "
              f"inside COI")


def test_criterion_09_significance_calibration():
    start = time.perf_counter()
    fractions = []
    for trial in range(20):
        rng = np.random.default_rng(9000 + trial)
        x = rng.standard_normal(256)
        y = rng.standard_normal(256)
        field = significance_montecarlo(
            x, y, n_surrogates=300, quantile=0.95, seed=90_000 + trial
        )
        inside = field.inside_coi()
        fractions.append(field.sig_mask[inside].mean())
    mean_frac = float(np.mean(fractions))
    elapsed = time.perf_counter() - start
    assert 0.03 <= mean_frac <= 0.07, f"mean significant fraction {mean_frac:.4f}"
    assert elapsed < 180.0
    report(9, f"mean significant fraction {mean_frac:.3f} in [3%, 7%] "
              f"({elapsed:.0f}s < 180s)")


def _event_results(x, y, levels=3, window=128):
    series = rolling_wavelet_correlation(
        x, y, levels, window_length=window, step=window
    )
    n = len(x)
    return [event_ttest(s, n // 2, pre_len=n // 2, post_len=n // 2)
            for s in series]


def test_criterion_10_contagion_power_and_size():
    n = 4096
    power_hits = np.zeros(3)
    for seed in range(50):
        rng = np.random.default_rng(10_000 + seed)
        x = rng.standard_normal(n)
        y = rng.standard_normal(n)
        y[n // 2:] = x[n // 2:]
        for j, res in enumerate(_event_results(x, y)):
            power_hits[j] += res.significant_1pct
    assert np.all(power_hits >= 45), f"power per level: {power_hits}"

    size_rejections = trials = 0
    for seed in range(50):
        rng = np.random.default_rng(20_000 + seed)
        common = rng.standard_normal(n)
        x = common + rng.standard_normal(n)
        y = 0.5 * common + rng.standard_normal(n)
        for res in _event_results(x, y):
            size_rejections += res.significant_5pct
            trials += 1
    rate = size_rejections / trials
    assert 0.02 <= rate <= 0.09, f"size {rate:.4f}"
    report(10, f"power {power_hits.astype(int).tolist()}/50 at 1% on d1-d3; "
               f"size {rate:.3f} in [2%, 9%]")


def test_criterion_11_wmc_leader():
    rng = np.random.default_rng(11)
    n = 4096
    others = rng.standard_normal((4, n))
    lead = others.mean(axis=0) + 1e-3 * rng.standard_normal(n)
    decs = [modwt_transform(s, 8, LA8) for s in np.vstack([lead, others])]
    profile = wmc(decs)
    assert profile.levels.size == 8
    assert np.all(profile.leader_index == 0)
    assert np.all(profile.phi >= 0.99)

    a = rng.standard_normal(2048)
    b = 0.6 * a + rng.standard_normal(2048)
    dec_a = modwt_transform(a, 6, LA8)
    dec_b = modwt_transform(b, 6, LA8)
    two = wmc([dec_a, dec_b]).phi
    pairwise = np.abs(wavelet_correlation(dec_a, dec_b).estimate)
    assert np.max(np.abs(two - pairwise)) <= 1e-10
    report(11, "leader index 0 with phi >= 0.99 at all 8 levels; "
               "2-series WMC equals |pairwise rho|")


def test_criterion_12_rolling_hurst_regime():
    hits = 0
    for seed in range(20):
        x = np.concatenate([
            synth_fgn(0.5, 2600, 12_000 + seed),
            synth_fgn(0.8, 2600, 12_500 + seed),
        ])
        series = rolling_hurst(x, window_length=260, step=24)
        pre = series.hurst[series.anchors < 2600]
        post = series.hurst[series.anchors >= 2600 + 260]
        hits += (post.mean() - pre.mean()) >= 0.15
    assert hits >= 18
    report(12, f"spliced fGn 0.5->0.8 detected in {hits}/20 seeds")


def test_criterion_13_connectivity_clustering():
    rng = np.random.default_rng(13)
    n = 2048
    factor_a = rng.standard_normal(n)
    factor_b = rng.standard_normal(n)
    series = [factor_a + 0.3 * rng.standard_normal(n) for _ in range(3)]
    series += [factor_b + 0.3 * rng.standard_normal(n) for _ in range(3)]
    decs = [modwt_transform(s, 7, LA8) for s in series]
    result = fractal_connectivity(decs, 4, 7, n_clusters=2)
    np.testing.assert_array_equal(result.F, result.F.T)
    np.testing.assert_array_equal(np.diag(result.F), 1.0)
    assert result.labels.tolist() == [0, 0, 0, 1, 1, 1]
    dendrogram, labels = cluster_markets(result.F, n_clusters=2)
    assert labels.tolist() == [0, 0, 0, 1, 1, 1]
    assert np.all(np.diff(dendrogram.heights) >= -1e-12)
    report(13, "two-block panel recovered exactly at k=2; F symmetric, "
               "unit diagonal")


CLI_CASES = [
    ["stats", str(DATA)],
    ["decompose", str(DATA), "--series", "mkt_a", "--levels", "4"],
    ["wcor", str(DATA), "--pair", "mkt_a", "mkt_b"],
    ["wccor", str(DATA), "--pair", "mkt_a", "mkt_b", "--lag-max", "10"],
    ["wmc", str(DATA), "--levels", "6"],
    ["wmcc", str(DATA), "--levels", "6", "--lag-max", "6"],
    ["leaders", str(DATA), "--levels", "6"],
    ["coherence", str(DATA), "--pair", "mkt_a", "mkt_b",
     "--surrogates", "100", "--n-scales", "20", "--seed", "5"],
    ["rolling-cor", str(DATA), "--pair", "mkt_a", "mkt_b", "--step", "64"],
    ["contagion-test", str(DATA), "--pair", "mkt_a", "mkt_c",
     "--event", "2004-01-01", "--step", "16"],
    ["logscale", str(DATA), "--series", "mkt_b"],
    ["hurst", str(DATA)],
    ["rolling-hurst", str(DATA), "--series", "mkt_c"],
    ["connectivity", str(DATA), "--j1", "4", "--j2", "7"],
    ["synth-fgn", "--H", "0.8", "--n", "1024", "--seed", "7"],
]


def test_criterion_14_cli_determinism(tmp_path):
    assert len(CLI_CASES) == 15  # every subcommand exercised
    for case in CLI_CASES:
        out_a = tmp_path / case[0] / "a"
        out_b = tmp_path / case[0] / "b"
        for out in (out_a, out_b):
            with contextlib.redirect_stdout(io.StringIO()):
                code = cli_main(case + ["--outdir", str(out), "--tag", "t"])
            assert code == 0, f"{case[0]} failed"
        files_a = sorted(p.name for p in out_a.iterdir())
        files_b = sorted(p.name for p in out_b.iterdir())
        assert files_a == files_b and files_a
        for name in files_a:
            assert (out_a / name).read_bytes() == (out_b / name).read_bytes(), (
                f"{case[0]}: {name} differs between runs"
            )
    # the installed entry point behaves like the in-process call
    env_out = tmp_path / "subproc"
    proc = subprocess.run(
        [sys.executable, "-m", "wavepanel", "synth-fgn", "--H", "0.8",
         "--n", "1024", "--seed", "7", "--outdir", str(env_out), "--tag", "t"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert (env_out / "synth-fgn-t.csv").read_bytes() == \
        (tmp_path / "synth-fgn" / "a" / "synth-fgn-t.csv").read_bytes()
    report(14, "all 15 subcommands byte-identical across reruns")

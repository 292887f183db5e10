"""Walkthrough: long-memory estimation against known ground truth.

Fractional Gaussian noise with a chosen Hurst exponent is the oracle:
the logscale diagram's slope recovers it, the rolling estimator tracks a
mid-sample regime change, and coarse-scale correlations group markets
that share a generating mechanism.
"""

from pathlib import Path

import numpy as np

from wavepanel import (
    cluster_markets,
    fractal_connectivity,
    logscale_diagram,
    modwt_transform,
    rolling_hurst,
    scaling_parameters_from_fit,
    synth_fgn,
)
from wavepanel.svgplot import logscale_svg, matrix_heatmap_svg

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

# 1. the estimator recovers the exponent it was fed
for target in (0.5, 0.7, 0.9):
    x = synth_fgn(target, 4096, seed=int(target * 100))
    fit = logscale_diagram(x, 2, 8).fit
    print(f"target H = {target}: estimate {fit.H:.3f} (se {fit.std_err:.3f}, "
          f"t = {fit.t_value:.1f})")

diagram = logscale_diagram(synth_fgn(0.8, 4096, 80), 2, 8)
(OUT / "05_logscale.svg").write_text(logscale_svg(diagram))
params = scaling_parameters_from_fit(diagram.fit)
print(f"\nscaling parameters of the H=0.8 draw: alpha = {params.alpha:.3f}, "
      f"H = {params.H_lrd:.3f}, h = {params.h_ss:.3f}, D = {params.D:.3f}")

# 2. a persistence regime change shows up in the rolling estimates
x = np.concatenate([synth_fgn(0.5, 2600, 1), synth_fgn(0.85, 2600, 2)])
series = rolling_hurst(x, window_length=260, step=24)
pre = series.hurst[series.anchors < 2600].mean()
post = series.hurst[series.anchors >= 2860].mean()
print(f"\nrolling Hurst: mean {pre:.3f} while memoryless, {post:.3f} after "
      f"the splice (threshold for persistence: 0.5)")

# 3. coarse-scale correlations recover which series share a driver
rng = np.random.default_rng(9)
driver_a = synth_fgn(0.8, 4096, 10)
driver_b = synth_fgn(0.8, 4096, 11)
names = ["a1", "a2", "a3", "b1", "b2", "b3"]
panel = [driver_a + 0.4 * rng.standard_normal(4096) for _ in range(3)]
panel += [driver_b + 0.4 * rng.standard_normal(4096) for _ in range(3)]
decs = [modwt_transform(s, 7) for s in panel]
result = fractal_connectivity(decs, j1=4, j2=7, n_clusters=2)
print("\nlong-run correlation matrix:")
print(np.array_str(result.F, precision=2, suppress_small=True))
print("flat clusters:", dict(zip(names, result.labels.tolist())))

dendrogram, labels = cluster_markets(result.F, n_clusters=2)
order = np.argsort(labels, kind="stable")
svg = matrix_heatmap_svg(result.F, names, order=order,
                         title="long-run correlation, clustered order")
(OUT / "05_connectivity.svg").write_text(svg)
print(f"\nwrote {OUT / '05_logscale.svg'} and 05_connectivity.svg")

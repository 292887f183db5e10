"""Regenerate the bundled synthetic price panel (data/sample_prices.csv).

Four markets driven by one common factor with decreasing loadings plus
idiosyncratic noise, so pairwise dependence is strongest for mkt_a/mkt_b
and fades toward mkt_d. 2200 daily prices support eight decomposition
levels with brick-wall masking. Deterministic: fixed seed, fixed dates.
"""

from pathlib import Path
import datetime as dt

import numpy as np

N_OBS = 2200
LOADINGS = {"mkt_a": 1.0, "mkt_b": 0.8, "mkt_c": 0.5, "mkt_d": 0.2}


def main() -> None:
    rng = np.random.default_rng(20010101)
    factor = rng.standard_normal(N_OBS - 1) * 0.010
    start = dt.date(2001, 1, 1)
    dates = [start + dt.timedelta(days=i) for i in range(N_OBS)]
    columns = {}
    for name, beta in LOADINGS.items():
        returns = beta * factor + rng.standard_normal(N_OBS - 1) * 0.008
        prices = 100.0 * np.exp(np.concatenate([[0.0], np.cumsum(returns)]))
        columns[name] = prices
    out = Path(__file__).parent / "sample_prices.csv"
    with out.open("w") as handle:
        handle.write("date," + ",".join(LOADINGS) + "\n")
        for i, date in enumerate(dates):
            row = ",".join(f"{columns[n][i]:.6f}" for n in LOADINGS)
            handle.write(f"{date},{row}\n")
    print(f"wrote {out} ({N_OBS} rows x {len(LOADINGS)} series)")


if __name__ == "__main__":
    main()

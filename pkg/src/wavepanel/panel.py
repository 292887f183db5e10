"""Panel ingestion, log returns and descriptive statistics.

A Panel is an aligned matrix of dated observations, one row per series.
CSV input comes in two layouts: wide (one date column plus one value column
per series) and long (date, name, value). Multiple files are aligned on the
intersection of their dates by default; forward-filling over the union of
dates is available behind an explicit flag because silent imputation
corrupts downstream correlation estimates.
"""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
import pandas as pd

__all__ = ["Panel", "StatsSummary", "load_panel", "log_returns",
           "descriptive_stats", "stats_frame"]

MIN_ALIGNED_OBS = 32


@dataclass(frozen=True)
class Panel:
    """Aligned multi-series matrix of dated values (prices or returns)."""

    names: tuple[str, ...]
    dates: tuple[dt.date, ...]
    values: np.ndarray  # [n_series, n_obs]

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "dates", tuple(self.dates))
        if values.ndim != 2:
            raise ValueError("panel values must be 2-D [n_series, n_obs]")
        if values.shape != (len(self.names), len(self.dates)):
            raise ValueError(
                f"panel shape {values.shape} does not match "
                f"{len(self.names)} names x {len(self.dates)} dates"
            )
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate series names")
        if any(b <= a for a, b in zip(self.dates, self.dates[1:])):
            raise ValueError("dates must be strictly increasing")
        if not np.all(np.isfinite(values)):
            raise ValueError("panel contains non-finite values")

    @property
    def n_series(self) -> int:
        return self.values.shape[0]

    @property
    def n_obs(self) -> int:
        return self.values.shape[1]

    def series(self, name: str) -> np.ndarray:
        return self.values[self.names.index(name)]


@dataclass(frozen=True)
class StatsSummary:
    """Moment summary of one series; shape statistics are None when the
    series has zero variance (rather than propagating NaN)."""

    name: str
    mean: float
    median: float
    min: float
    max: float
    std_dev: float
    skewness: float | None
    excess_kurtosis: float | None
    jarque_bera_stat: float | None
    count: int


def _parse_dates(raw: pd.Series, path: Path) -> list[dt.date]:
    out = []
    for pos, value in raw.items():
        try:
            out.append(dt.date.fromisoformat(str(value).strip()))
        except ValueError:
            raise ValueError(
                f"{path}: unparsable date {value!r} at line {pos + 2}"
            ) from None
    return out


def _parse_values(raw: pd.Series, column: str, path: Path) -> np.ndarray:
    converted = pd.to_numeric(raw, errors="coerce")
    bad = converted.index[converted.isna() & raw.notna()]
    if len(bad):
        pos = bad[0]
        raise ValueError(
            f"{path}: non-numeric value {raw.loc[pos]!r} in column "
            f"'{column}' at line {pos + 2}"
        )
    return converted.to_numpy(dtype=float)


def _read_one(
    path: Path,
    date_column: str,
    long_format: bool,
    name_column: str,
    value_column: str,
) -> dict[str, pd.Series]:
    """Read one CSV into {series name: values indexed by date}."""
    if not path.exists():
        raise FileNotFoundError(f"input file not found: {path}")
    frame = pd.read_csv(path, dtype=str)
    if date_column not in frame.columns:
        raise ValueError(f"{path}: missing date column '{date_column}'")
    dates = _parse_dates(frame[date_column], path)

    out: dict[str, pd.Series] = {}
    if long_format:
        for col in (name_column, value_column):
            if col not in frame.columns:
                raise ValueError(f"{path}: missing column '{col}'")
        values = _parse_values(frame[value_column], value_column, path)
        sub = pd.DataFrame(
            {"date": dates, "name": frame[name_column], "value": values}
        )
        for name, grp in sub.groupby("name", sort=False):
            if grp["date"].duplicated().any():
                raise ValueError(f"{path}: duplicate dates for series '{name}'")
            out[str(name)] = pd.Series(
                grp["value"].to_numpy(), index=grp["date"].to_numpy()
            ).sort_index()
    else:
        value_cols = [c for c in frame.columns if c != date_column]
        if not value_cols:
            raise ValueError(f"{path}: no value columns besides '{date_column}'")
        if len(set(dates)) != len(dates):
            raise ValueError(f"{path}: duplicate dates")
        for col in value_cols:
            values = _parse_values(frame[col], col, path)
            series = pd.Series(values, index=dates).dropna().sort_index()
            out[col] = series
    return out


def load_panel(
    paths: str | Path | Sequence[str | Path],
    date_column: str = "date",
    long_format: bool = False,
    name_column: str = "name",
    value_column: str = "value",
    fill: str = "intersect",
    min_obs: int = MIN_ALIGNED_OBS,
) -> Panel:
    """Load one or more CSV files into an aligned Panel.

    fill='intersect' keeps only dates common to every series; fill='ffill'
    aligns on the union of dates, forward-filling gaps (rows before a
    series' first observation are dropped for all series).
    """
    if isinstance(paths, (str, Path)):
        paths = [paths]
    if fill not in ("intersect", "ffill"):
        raise ValueError("fill must be 'intersect' or 'ffill'")

    columns: dict[str, pd.Series] = {}
    for p in paths:
        for name, series in _read_one(
            Path(p), date_column, long_format, name_column, value_column
        ).items():
            if name in columns:
                raise ValueError(f"series '{name}' appears in more than one file")
            columns[name] = series
    if not columns:
        raise ValueError("no series found in input")

    if fill == "intersect":
        common = None
        for series in columns.values():
            idx = set(series.index)
            common = idx if common is None else common & idx
        dates = sorted(common)
    else:
        merged = pd.DataFrame(columns).sort_index().ffill().dropna()
        dates = list(merged.index)

    if len(dates) < min_obs:
        raise ValueError(
            f"only {len(dates)} aligned observations; need at least {min_obs}"
        )

    names = list(columns)
    if fill == "intersect":
        values = np.vstack([columns[n].loc[dates].to_numpy() for n in names])
    else:
        values = merged[names].to_numpy().T
    return Panel(names=tuple(names), dates=tuple(dates), values=values)


def log_returns(panel: Panel) -> Panel:
    """First-order logarithmic differences of a price panel."""
    bad = np.argwhere(panel.values <= 0)
    if len(bad):
        i, t = bad[0]
        raise ValueError(
            f"non-positive price in series '{panel.names[i]}' on "
            f"{panel.dates[t]}: {panel.values[i, t]}"
        )
    returns = np.diff(np.log(panel.values), axis=1)
    return Panel(names=panel.names, dates=panel.dates[1:], values=returns)


def _summary(name: str, x: np.ndarray) -> StatsSummary:
    n = x.size
    mean = float(np.mean(x))
    centred = x - mean
    m2 = float(np.mean(centred ** 2))
    if m2 == 0.0:
        skew = kurt = jb = None
    else:
        skew = float(np.mean(centred ** 3) / m2 ** 1.5)
        kurt = float(np.mean(centred ** 4) / m2 ** 2 - 3.0)
        jb = float(n / 6.0 * (skew ** 2 + kurt ** 2 / 4.0))
    return StatsSummary(
        name=name,
        mean=mean,
        median=float(np.median(x)),
        min=float(np.min(x)),
        max=float(np.max(x)),
        std_dev=float(np.std(x, ddof=1)),
        skewness=skew,
        excess_kurtosis=kurt,
        jarque_bera_stat=jb,
        count=n,
    )


def descriptive_stats(panel: Panel) -> list[StatsSummary]:
    """Per-series moment summaries (sample std, excess kurtosis convention)."""
    if panel.n_obs < 4:
        raise ValueError("descriptive statistics need at least 4 observations")
    return [_summary(name, panel.values[i]) for i, name in enumerate(panel.names)]


def stats_frame(summaries: Iterable[StatsSummary]) -> pd.DataFrame:
    """Tabulate summaries, one row per series."""
    return pd.DataFrame([s.__dict__ for s in summaries]).set_index("name")

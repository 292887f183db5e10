"""Command-line front end.

Fifteen subcommands cover the full pipeline: descriptive statistics,
decomposition export, pairwise/multiple correlation with and without lags,
leader tables, coherence maps, rolling correlation, the contagion event
test, logscale/Hurst estimation (full-sample and rolling), connectivity
clustering, and synthetic fractional-noise generation.

Option resolution order is: explicit flag > config file (flat key=value
lines) > built-in default. The output directory may also come from the
WAVEPANEL_OUTDIR environment variable. Outputs are written atomically
(temp file + rename) after all computation succeeds, named
<command>-<tag>.<ext>; with a fixed seed and config, reruns are
byte-identical.
"""

from __future__ import annotations

import argparse
import datetime as dt
import json
import os
import sys
import tempfile
from pathlib import Path

import numpy as np
import pandas as pd

from . import contagion as ct
from . import coherence as ch
from . import dependence as dp
from . import longmemory as lm
from . import modwt
from . import panel as pn
from . import svgplot

ENV_OUTDIR = "WAVEPANEL_OUTDIR"

_COMMON_DEFAULTS = {
    "filter": "la8",
    "confidence": 0.95,
    "fill": "intersect",
    "returns": False,
    "volatility": False,
    "date_column": "date",
    "long": False,
    "name_column": "name",
    "value_column": "value",
}

# thesis-shaped defaults: LA8 everywhere; 6 levels and brick-wall masking for
# correlation work, 8 levels for multiple-correlation maps, reflection and
# 256-observation windows for rolling correlation, 260/24 rolling Hurst
# windows, 300 surrogates, 95% confidence
DEFAULTS: dict[str, dict] = {
    "stats": {},
    "decompose": {"levels": 6, "boundary": "periodic", "series": None},
    "wcor": {"levels": 6, "boundary": "brickwall", "pair": None, "base": None},
    "wccor": {"levels": 6, "boundary": "brickwall", "pair": None, "lag_max": 36},
    "wmc": {"levels": 8, "boundary": "brickwall"},
    "wmcc": {"levels": 8, "boundary": "brickwall", "lag_max": 36},
    "leaders": {"levels": 8, "boundary": "brickwall"},
    "coherence": {
        "pair": None,
        "omega0": 6.0,
        "s0": 2.0,
        "dj": 1.0 / 12.0,
        "n_scales": None,
        "surrogates": 300,
        "quantile": 0.95,
        "seed": 0,
        "arrow_step": 8,
        "per_cell": False,
        "events": None,
    },
    "rolling-cor": {
        "levels": 6,
        "boundary": "reflection",
        "pair": None,
        "window": 256,
        "step": 1,
    },
    "contagion-test": {
        "levels": 6,
        "boundary": "reflection",
        "pair": None,
        "window": 256,
        "step": 1,
        "event": None,
        "pre": 250,
        "post": 250,
    },
    "logscale": {"series": None, "j1": 2, "j2": None},
    "hurst": {"j1": 2, "j2": None},
    "rolling-hurst": {"series": None, "window": 260, "step": 24, "j1": 2, "j2": None},
    "connectivity": {
        "j1": 5,
        "j2": 8,
        "boundary": "periodic",
        "tolerance": 0.1,
        "clusters": 2,
    },
    "synth-fgn": {"H": 0.7, "n": 4096, "seed": 0},
}

_PANEL_COMMANDS = set(DEFAULTS) - {"synth-fgn"}
_NO_FILTER = {"stats", "coherence", "synth-fgn"}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wavepanel",
        description="multiscale dependence, contagion and long-memory analysis",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_)
        p.add_argument("--outdir", default=None, help="output directory")
        p.add_argument("--tag", default=None, help="output name tag")
        p.add_argument("--config", default=None, help="flat key=value config file")
        if name in _PANEL_COMMANDS:
            p.add_argument("inputs", nargs="+", help="input CSV file(s)")
            p.add_argument("--date-column", default=None)
            p.add_argument(
                "--long", action=argparse.BooleanOptionalAction, default=None,
                help="long-format input (date,name,value)",
            )
            p.add_argument("--name-column", default=None)
            p.add_argument("--value-column", default=None)
            p.add_argument("--fill", choices=["intersect", "ffill"], default=None)
            p.add_argument(
                "--returns", action=argparse.BooleanOptionalAction, default=None,
                help="input is already returns; skip log differencing",
            )
        if name not in _NO_FILTER:
            p.add_argument("--filter", choices=["la8", "haar"], default=None)
        return p

    add("stats", "descriptive statistics of returns")
    p = add("decompose", "export one series' decomposition")
    p.add_argument("--series", default=None)
    p.add_argument("--levels", type=int, default=None)
    p.add_argument("--boundary", choices=["periodic", "brickwall", "reflection"],
                   default=None)

    for name in ("wcor", "wccor"):
        p = add(name, "pairwise per-level correlation" +
                (" with lags" if name == "wccor" else ""))
        p.add_argument("--pair", nargs=2, default=None, metavar=("A", "B"))
        p.add_argument("--levels", type=int, default=None)
        p.add_argument("--boundary", choices=["periodic", "brickwall", "reflection"],
                       default=None)
        p.add_argument("--confidence", type=float, default=None)
        if name == "wccor":
            p.add_argument("--lag-max", type=int, default=None)
        else:
            p.add_argument("--base", default=None,
                           help="correlate this series against every other "
                                "(wide table, one column set per counterpart)")

    for name in ("wmc", "wmcc", "leaders"):
        p = add(name, {"wmc": "multiple correlation per level",
                       "wmcc": "lagged multiple correlation",
                       "leaders": "per-horizon leading series"}[name])
        p.add_argument("--levels", type=int, default=None)
        p.add_argument("--boundary", choices=["periodic", "brickwall", "reflection"],
                       default=None)
        p.add_argument("--confidence", type=float, default=None)
        if name == "wmcc":
            p.add_argument("--lag-max", type=int, default=None)

    p = add("coherence", "time-scale coherence map with surrogate significance")
    p.add_argument("--pair", nargs=2, default=None, metavar=("A", "B"))
    p.add_argument("--omega0", type=float, default=None)
    p.add_argument("--s0", type=float, default=None)
    p.add_argument("--dj", type=float, default=None)
    p.add_argument("--n-scales", type=int, default=None)
    p.add_argument("--surrogates", type=int, default=None,
                   help="0 disables the significance test")
    p.add_argument("--quantile", type=float, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--arrow-step", type=int, default=None)
    p.add_argument("--per-cell", action=argparse.BooleanOptionalAction, default=None)
    p.add_argument("--events", default=None,
                   help="date,label file; labels are drawn on the map only")

    for name in ("rolling-cor", "contagion-test"):
        p = add(name, {"rolling-cor": "rolling-window per-level correlation",
                       "contagion-test": "before/after event t-test"}[name])
        p.add_argument("--pair", nargs=2, default=None, metavar=("A", "B"))
        p.add_argument("--levels", type=int, default=None)
        p.add_argument("--boundary", choices=["periodic", "brickwall", "reflection"],
                       default=None)
        p.add_argument("--window", type=int, default=None)
        p.add_argument("--step", type=int, default=None)
        if name == "contagion-test":
            p.add_argument("--event", default=None,
                           help="event date (ISO) or observation index")
            p.add_argument("--pre", type=int, default=None)
            p.add_argument("--post", type=int, default=None)

    p = add("logscale", "per-octave log-energy diagram")
    p.add_argument("--series", default=None)
    p.add_argument("--j1", type=int, default=None)
    p.add_argument("--j2", type=int, default=None)
    p.add_argument("--volatility", action=argparse.BooleanOptionalAction,
                   default=None, help="analyse absolute returns")

    p = add("hurst", "Hurst estimates for every series")
    p.add_argument("--j1", type=int, default=None)
    p.add_argument("--j2", type=int, default=None)
    p.add_argument("--volatility", action=argparse.BooleanOptionalAction,
                   default=None)

    p = add("rolling-hurst", "rolling-window Hurst estimates")
    p.add_argument("--series", default=None)
    p.add_argument("--window", type=int, default=None)
    p.add_argument("--step", type=int, default=None)
    p.add_argument("--j1", type=int, default=None)
    p.add_argument("--j2", type=int, default=None)
    p.add_argument("--volatility", action=argparse.BooleanOptionalAction,
                   default=None)

    p = add("connectivity", "long-run correlation matrix and clustering")
    p.add_argument("--j1", type=int, default=None)
    p.add_argument("--j2", type=int, default=None)
    p.add_argument("--boundary", choices=["periodic", "brickwall", "reflection"],
                   default=None)
    p.add_argument("--tolerance", type=float, default=None)
    p.add_argument("--clusters", type=int, default=None)

    p = add("synth-fgn", "generate fractional Gaussian noise")
    p.add_argument("--H", type=float, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)

    return parser


def _read_config(path: str | None) -> dict[str, str]:
    if path is None:
        return {}
    p = Path(path)
    if not p.exists():
        raise FileNotFoundError(f"config file not found: {p}")
    out = {}
    for raw_line in p.read_text().splitlines():
        line = raw_line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"config line without '=': {line!r}")
        key, value = line.split("=", 1)
        out[key.strip().replace("-", "_")] = value.strip()
    return out


# config-file values arrive as strings; typed here because several options
# default to None and carry no type of their own
_INT_KEYS = {"levels", "lag_max", "window", "step", "surrogates", "seed",
             "arrow_step", "pre", "post", "j1", "j2", "n_scales", "clusters",
             "n"}
_FLOAT_KEYS = {"confidence", "omega0", "s0", "dj", "quantile", "tolerance", "H"}
_BOOL_KEYS = {"returns", "volatility", "long", "per_cell"}


def _coerce(key: str, value: str) -> object:
    if key in _BOOL_KEYS:
        if value.lower() in ("1", "true", "yes"):
            return True
        if value.lower() in ("0", "false", "no"):
            return False
        raise ValueError(f"config key '{key}' expects a boolean, got {value!r}")
    if key in _INT_KEYS:
        return int(value)
    if key in _FLOAT_KEYS:
        return float(value)
    if key == "pair":
        parts = [p.strip() for p in value.split(",")]
        if len(parts) != 2:
            raise ValueError(f"config key 'pair' expects 'A,B', got {value!r}")
        return parts
    return value


def _resolve(args: argparse.Namespace) -> dict:
    """Merge flags, config file and defaults into one option dict."""
    config = _read_config(args.config)
    merged = dict(_COMMON_DEFAULTS)
    merged.update(DEFAULTS[args.command])
    for key in list(merged):
        flag = getattr(args, key, None)
        if flag is not None:
            merged[key] = flag
        elif key in config:
            merged[key] = _coerce(key, config[key])
    merged["command"] = args.command
    merged["inputs"] = getattr(args, "inputs", None)
    merged["tag"] = args.tag or (config.get("tag") or "run")
    outdir = args.outdir or config.get("outdir") or os.environ.get(ENV_OUTDIR) or "."
    merged["outdir"] = Path(outdir)
    return merged


def _load_returns(cfg: dict) -> pn.Panel:
    raw = pn.load_panel(
        cfg["inputs"],
        date_column=cfg["date_column"],
        long_format=cfg["long"],
        name_column=cfg["name_column"],
        value_column=cfg["value_column"],
        fill=cfg["fill"],
    )
    return raw if cfg["returns"] else pn.log_returns(raw)


def _pick_series(panel: pn.Panel, name: str | None) -> tuple[str, np.ndarray]:
    if name is None:
        name = panel.names[0]
    if name not in panel.names:
        raise ValueError(f"series '{name}' not in panel {list(panel.names)}")
    return name, panel.series(name)


def _pick_pair(panel: pn.Panel, pair) -> tuple[tuple[str, str], np.ndarray, np.ndarray]:
    if pair is None:
        if panel.n_series < 2:
            raise ValueError("need at least two series")
        pair = panel.names[:2]
    a, b = pair
    for name in (a, b):
        if name not in panel.names:
            raise ValueError(f"series '{name}' not in panel {list(panel.names)}")
    return (a, b), panel.series(a), panel.series(b)


def _apply_volatility(cfg: dict, values: np.ndarray) -> np.ndarray:
    return np.abs(values) if cfg.get("volatility") else values


def _decompose_panel(cfg: dict, panel: pn.Panel) -> list:
    filt = modwt.build_filter(cfg["filter"])
    return [
        modwt.modwt_transform(panel.values[i], cfg["levels"], filt, cfg["boundary"])
        for i in range(panel.n_series)
    ]


def _star(p: float) -> str:
    return "**" if p < 0.01 else ("*" if p < 0.05 else "")


def _json_default(obj):
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serialisable: {type(obj)}")


# ---------------------------------------------------------------------------
# per-command artifact builders: cfg -> {filename: text content}
# ---------------------------------------------------------------------------

def _run_stats(cfg: dict) -> dict[str, str]:
    table = pn.stats_frame(pn.descriptive_stats(_load_returns(cfg))).reset_index()
    return {
        "csv": table.to_csv(index=False),
        "json": json.dumps(table.to_dict(orient="records"), indent=2,
                           default=_json_default),
    }


def _run_decompose(cfg: dict) -> dict[str, str]:
    panel = _load_returns(cfg)
    _, x = _pick_series(panel, cfg["series"])
    dec = modwt.modwt_transform(
        x, cfg["levels"], modwt.build_filter(cfg["filter"]), cfg["boundary"]
    )
    return {"csv": modwt.decomposition_frame(dec).to_csv(index=False)}


def _profile_frame(profile: dp.ScaleProfile) -> pd.DataFrame:
    return pd.DataFrame(
        {
            "level": profile.levels,
            "horizon": profile.horizon_labels,
            "estimate": profile.estimate,
            "ci_low": profile.ci_low,
            "ci_high": profile.ci_high,
            "effective_n": profile.effective_n,
        }
    )


def _run_wcor(cfg: dict) -> dict[str, str]:
    panel = _load_returns(cfg)
    filt = modwt.build_filter(cfg["filter"])
    transform = lambda x: modwt.modwt_transform(
        x, cfg["levels"], filt, cfg["boundary"]
    )
    if cfg["base"] is not None:
        # one base market against every counterpart: rows are horizons,
        # one estimate + band column set per counterpart
        base, xb = _pick_series(panel, cfg["base"])
        dec_base = transform(xb)
        frame = pd.DataFrame(
            {"horizon": [dp.horizon_label(j) for j in
                         range(1, cfg["levels"] + 1)]}
        )
        counterparts = {}
        for name in panel.names:
            if name == base:
                continue
            profile = dp.wavelet_correlation(
                dec_base, transform(panel.series(name)), cfg["confidence"]
            )
            frame[name] = profile.estimate
            frame[f"{name}_ci_low"] = profile.ci_low
            frame[f"{name}_ci_high"] = profile.ci_high
            counterparts[name] = _profile_frame(profile).to_dict(orient="records")
        payload = {"base": base, "confidence": cfg["confidence"],
                   "counterparts": counterparts}
    else:
        (a, b), xa, xb = _pick_pair(panel, cfg["pair"])
        profile = dp.wavelet_correlation(transform(xa), transform(xb),
                                         cfg["confidence"])
        frame = _profile_frame(profile)
        payload = {"pair": [a, b], "confidence": cfg["confidence"],
                   "levels": frame.to_dict(orient="records")}
    return {"csv": frame.to_csv(index=False),
            "json": json.dumps(payload, indent=2, default=_json_default)}


def _run_wccor(cfg: dict) -> dict[str, str]:
    panel = _load_returns(cfg)
    (a, b), xa, xb = _pick_pair(panel, cfg["pair"])
    filt = modwt.build_filter(cfg["filter"])
    dec_a = modwt.modwt_transform(xa, cfg["levels"], filt, cfg["boundary"])
    dec_b = modwt.modwt_transform(xb, cfg["levels"], filt, cfg["boundary"])
    profiles = dp.wavelet_cross_correlation(
        dec_a, dec_b, cfg["lag_max"], cfg["confidence"]
    )
    rows = []
    for prof in profiles:
        for i, lag in enumerate(prof.lags):
            rows.append(
                {
                    "level": prof.level,
                    "horizon": dp.horizon_label(prof.level),
                    "lag": int(lag),
                    "rho": prof.rho[i],
                    "ci_low": prof.ci_low[i],
                    "ci_high": prof.ci_high[i],
                }
            )
    frame = pd.DataFrame(rows)
    peaks = []
    for prof in profiles:
        # near-ties resolve toward the smallest |lag|
        order = np.lexsort((prof.lags, np.abs(prof.lags), -np.round(prof.rho, 12)))
        peaks.append(
            {
                "level": prof.level,
                "peak_lag": int(prof.lags[order[0]]),
                "peak_rho": float(prof.rho[order[0]]),
            }
        )
    payload = {"pair": [a, b], "lag_max": cfg["lag_max"], "peaks": peaks}
    return {"csv": frame.to_csv(index=False),
            "json": json.dumps(payload, indent=2, default=_json_default)}


def _wmc_payload(cfg: dict, lagged: bool):
    panel = _load_returns(cfg)
    decs = _decompose_panel(cfg, panel)
    if lagged:
        profile = dp.wmcc(decs, cfg["lag_max"], cfg["confidence"])
    else:
        profile = dp.wmc(decs, cfg["confidence"])
    return panel, profile


def _run_wmc(cfg: dict) -> dict[str, str]:
    panel, profile = _wmc_payload(cfg, lagged=False)
    frame = pd.DataFrame(
        {
            "level": profile.levels,
            "horizon": profile.horizon_labels,
            "phi": profile.phi,
            "ci_low": profile.ci_low,
            "ci_high": profile.ci_high,
            "leader": [panel.names[i] for i in profile.leader_index],
        }
    )
    payload = {"names": list(panel.names),
               "levels": frame.to_dict(orient="records")}
    return {"csv": frame.to_csv(index=False),
            "json": json.dumps(payload, indent=2, default=_json_default)}


def _run_wmcc(cfg: dict) -> dict[str, str]:
    panel, profile = _wmc_payload(cfg, lagged=True)
    rows = []
    for j, level in enumerate(profile.levels):
        for t, lag in enumerate(profile.lags):
            rows.append(
                {
                    "level": int(level),
                    "lag": int(lag),
                    "phi": profile.phi_by_lag[j, t],
                }
            )
    frame = pd.DataFrame(rows)
    summary = [
        {
            "level": int(level),
            "horizon": profile.horizon_labels[j],
            "leader": panel.names[profile.leader_index[j]],
            "best_lag": int(profile.best_lag[j]),
            "phi": float(profile.phi[j]),
            "ci_low": float(profile.ci_low[j]),
            "ci_high": float(profile.ci_high[j]),
        }
        for j, level in enumerate(profile.levels)
    ]
    payload = {"names": list(panel.names), "lag_max": cfg["lag_max"],
               "levels": summary}
    return {"csv": frame.to_csv(index=False),
            "json": json.dumps(payload, indent=2, default=_json_default)}


def _run_leaders(cfg: dict) -> dict[str, str]:
    panel = _load_returns(cfg)
    decs = _decompose_panel(cfg, panel)
    table = dp.scale_leader_table(decs, list(panel.names), cfg["confidence"])
    return {"csv": table.to_csv(index=False),
            "json": json.dumps(table.to_dict(orient="records"), indent=2,
                               default=_json_default)}


def _read_events(path: str | None) -> list[tuple[dt.date, str]]:
    if path is None:
        return []
    out = []
    for raw_line in Path(path).read_text().splitlines():
        line = raw_line.strip()
        if not line or line.startswith("#"):
            continue
        date_str, label = line.split(",", 1)
        out.append((dt.date.fromisoformat(date_str.strip()), label.strip()))
    return out


def _run_coherence(cfg: dict) -> dict[str, str]:
    panel = _load_returns(cfg)
    (a, b), xa, xb = _pick_pair(panel, cfg["pair"])
    params = ch.MorletParams(
        omega0=cfg["omega0"], s0=cfg["s0"], dj=cfg["dj"], n_scales=cfg["n_scales"]
    )
    if cfg["surrogates"]:
        field = ch.significance_montecarlo(
            xa, xb, params,
            n_surrogates=cfg["surrogates"],
            quantile=cfg["quantile"],
            seed=cfg["seed"],
            per_cell=cfg["per_cell"],
        )
    else:
        field = ch.wavelet_coherence(xa, xb, params)
    inside = field.inside_coi()
    sig = field.sig_mask if field.sig_mask is not None \
        else np.zeros_like(field.r2, dtype=bool)
    n_s, n_t = field.r2.shape
    frame = pd.DataFrame(
        {
            "time": np.repeat(field.times, n_s),
            "date": np.repeat([str(d) for d in panel.dates], n_s),
            "scale": np.tile(field.scales, n_t),
            "r2": field.r2.T.ravel(),
            "phase": field.phase.T.ravel(),
            "in_coi": inside.T.ravel(),
            "significant": sig.T.ravel(),
        }
    )
    events = _read_events(cfg["events"])
    annotations = [
        (panel.dates.index(d), label) for d, label in events if d in panel.dates
    ]
    svg = svgplot.coherence_svg(
        field, arrow_step=cfg["arrow_step"],
        title=f"squared wavelet coherence: {a} vs {b}",
        annotations=annotations,
    )
    payload = {
        "pair": [a, b],
        "n_scales": int(n_s),
        "n_surrogates": int(field.n_surrogates),
        "quantile": cfg["quantile"] if cfg["surrogates"] else None,
        "thresholds": None if field.thresholds is None else field.thresholds,
        "significant_fraction_inside_coi":
            float(sig[inside].mean()) if inside.any() else 0.0,
    }
    return {"csv": frame.to_csv(index=False),
            "json": json.dumps(payload, indent=2, default=_json_default),
            "svg": svg}


def _rolling_frames(cfg: dict):
    panel = _load_returns(cfg)
    (a, b), xa, xb = _pick_pair(panel, cfg["pair"])
    series = ct.rolling_wavelet_correlation(
        xa, xb, cfg["levels"], cfg["window"], cfg["step"],
        modwt.build_filter(cfg["filter"]), cfg["boundary"],
    )
    return panel, (a, b), series


def _run_rolling_cor(cfg: dict) -> dict[str, str]:
    panel, _, series = _rolling_frames(cfg)
    rows = []
    for roll in series:
        for anchor, rho in zip(roll.anchors, roll.rho):
            rows.append(
                {
                    "level": roll.level,
                    "horizon": dp.horizon_label(roll.level),
                    "anchor_index": int(anchor),
                    "anchor_date": str(panel.dates[anchor]),
                    "rho": rho,
                }
            )
    return {"csv": pd.DataFrame(rows).to_csv(index=False)}


def _event_index(panel: pn.Panel, event) -> int:
    if event is None:
        raise ValueError("contagion-test requires --event (date or index)")
    text = str(event)
    try:
        idx = int(text)
    except ValueError:
        date = dt.date.fromisoformat(text)
        if date not in panel.dates:
            raise ValueError(f"event date {date} not in panel dates")
        idx = panel.dates.index(date)
    if not 0 <= idx < panel.n_obs:
        raise ValueError(f"event index {idx} outside the sample")
    return idx


def _run_contagion(cfg: dict) -> dict[str, str]:
    panel, pair, series = _rolling_frames(cfg)
    event = _event_index(panel, cfg["event"])
    results = [
        ct.event_ttest(roll, event, cfg["pre"], cfg["post"]) for roll in series
    ]
    frame = pd.DataFrame(
        {
            "horizon": [dp.horizon_label(r.level) for r in results],
            "before": [r.mean_before for r in results],
            "after": [r.mean_after for r in results],
            "t_stat": [r.t_stat for r in results],
            "p_value": [r.p_value for r in results],
            "significance": [_star(r.p_value) for r in results],
        }
    )
    payload = {
        "pair": list(pair),
        "event_index": event,
        "event_date": str(panel.dates[event]),
        "levels": [r.__dict__ for r in results],
    }
    return {"csv": frame.to_csv(index=False),
            "json": json.dumps(payload, indent=2, default=_json_default)}


def _run_logscale(cfg: dict) -> dict[str, str]:
    panel = _load_returns(cfg)
    name, x = _pick_series(panel, cfg["series"])
    diagram = lm.logscale_diagram(
        _apply_volatility(cfg, x), cfg["j1"], cfg["j2"],
        modwt.build_filter(cfg["filter"]),
    )
    frame = pd.DataFrame(
        {
            "octave": diagram.octaves,
            "eta": diagram.eta,
            "ci_low": diagram.ci_low,
            "ci_high": diagram.ci_high,
            "n_j": diagram.n_j,
        }
    )
    svg = svgplot.logscale_svg(diagram)
    return {"csv": frame.to_csv(index=False), "svg": svg}


def _run_hurst(cfg: dict) -> dict[str, str]:
    panel = _load_returns(cfg)
    filt = modwt.build_filter(cfg["filter"])
    rows, detail = [], []
    for i, name in enumerate(panel.names):
        x = _apply_volatility(cfg, panel.values[i])
        diagram = lm.logscale_diagram(x, cfg["j1"], cfg["j2"], filt)
        fit = diagram.fit
        params = lm.scaling_parameters_from_fit(fit)
        rows.append(
            {
                "series": name,
                "hurst": fit.H,
                "std_err": fit.std_err,
                "t_value": fit.t_value,
                "p_value": fit.p_value,
                "j1": fit.j1,
                "j2": fit.j2,
            }
        )
        detail.append(
            {
                "series": name,
                "hurst": fit.H,
                "std_err": fit.std_err,
                "t_value": fit.t_value,
                "p_value": fit.p_value,
                "alpha": params.alpha,
                "alpha_ci": list(params.alpha_ci),
                "H_lrd": params.H_lrd,
                "H_ci": list(params.H_ci),
                "h_ss": params.h_ss,
                "h_ci": list(params.h_ci),
                "D": params.D,
                "D_ci": list(params.D_ci),
                "cf": params.cf,
                "cf_ci": list(params.cf_ci) if params.cf_ci else None,
            }
        )
    return {"csv": pd.DataFrame(rows).to_csv(index=False),
            "json": json.dumps(detail, indent=2, default=_json_default)}


def _run_rolling_hurst(cfg: dict) -> dict[str, str]:
    panel = _load_returns(cfg)
    name, x = _pick_series(panel, cfg["series"])
    series = lm.rolling_hurst(
        _apply_volatility(cfg, x), cfg["window"], cfg["step"],
        cfg["j1"], cfg["j2"], modwt.build_filter(cfg["filter"]),
    )
    frame = pd.DataFrame(
        {
            "anchor_index": series.anchors,
            "anchor_date": [str(panel.dates[i]) for i in series.anchors],
            "hurst": series.hurst,
            "std_err": series.std_err,
        }
    )
    frame.insert(0, "series", name)
    return {"csv": frame.to_csv(index=False)}


def _run_connectivity(cfg: dict) -> dict[str, str]:
    panel = _load_returns(cfg)
    cfg = dict(cfg, levels=cfg["j2"])
    decs = _decompose_panel(cfg, panel)
    result = lm.fractal_connectivity(
        decs, cfg["j1"], cfg["j2"], cfg["tolerance"], cfg["clusters"]
    )
    names = list(panel.names)
    frame = pd.DataFrame(result.F, index=names, columns=names)
    order = np.argsort(result.labels, kind="stable")
    payload = {
        "names": names,
        "scale_range": list(result.scale_range),
        "labels": result.labels,
        "merges": [list(m) for m in result.dendrogram.merges],
        "converged": result.converged,
    }
    svg = svgplot.matrix_heatmap_svg(
        result.F, names, order=order,
        title=f"long-run correlation (octaves {cfg['j1']}-{cfg['j2']})",
    )
    return {"csv": frame.to_csv(), "svg": svg,
            "json": json.dumps(payload, indent=2, default=_json_default)}


def _run_synth_fgn(cfg: dict) -> dict[str, str]:
    if not 0.0 < cfg["H"] < 1.0:
        raise ValueError("--H must lie in (0, 1)")
    values = lm.synth_fgn(cfg["H"], cfg["n"], cfg["seed"])
    start = dt.date(2000, 1, 1)
    frame = pd.DataFrame(
        {
            "date": [str(start + dt.timedelta(days=i)) for i in range(cfg["n"])],
            "fgn": values,
        }
    )
    return {"csv": frame.to_csv(index=False)}


_RUNNERS = {
    "stats": _run_stats,
    "decompose": _run_decompose,
    "wcor": _run_wcor,
    "wccor": _run_wccor,
    "wmc": _run_wmc,
    "wmcc": _run_wmcc,
    "leaders": _run_leaders,
    "coherence": _run_coherence,
    "rolling-cor": _run_rolling_cor,
    "contagion-test": _run_contagion,
    "logscale": _run_logscale,
    "hurst": _run_hurst,
    "rolling-hurst": _run_rolling_hurst,
    "connectivity": _run_connectivity,
    "synth-fgn": _run_synth_fgn,
}


def _write_atomic(path: Path, content: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(content)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def main(argv: list[str] | None = None) -> int:
    try:
        args = _build_parser().parse_args(argv)
        cfg = _resolve(args)
        if cfg.get("inputs"):
            for p in cfg["inputs"]:
                if not Path(p).exists():
                    raise FileNotFoundError(f"input file not found: {p}")
        artifacts = _RUNNERS[cfg["command"]](cfg)
        outdir = cfg["outdir"]
        outdir.mkdir(parents=True, exist_ok=True)
        written = []
        for ext, content in artifacts.items():
            path = outdir / f"{cfg['command']}-{cfg['tag']}.{ext}"
            _write_atomic(path, content)
            written.append(str(path))
        print("\n".join(written))
        return 0
    except SystemExit as exc:  # argparse errors already printed usage
        return int(exc.code or 0)
    except Exception as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

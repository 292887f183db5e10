"""Scale-by-scale dependence estimators on MODWT decompositions.

Estimators operate on the non-boundary coefficients of one or more
decompositions sharing length, depth, filter and boundary handling:

* per-level variance, pairwise correlation and lagged cross-correlation
  with Fisher-z confidence bands,
* multiple correlation across a panel (the square root of the best
  regression R^2 at each level) with the per-level leading series, with
  and without lags,
* the per-level leader table summarising return spillover direction.

Correlations are computed as Pearson correlations of the included
coefficients (mean-centred). Detail coefficients of a periodic transform
have zero mean up to rounding, so this coincides with the uncentred
textbook estimator there; under boundary masking the centred form keeps
the correlation, multiple-correlation and covariance-decomposition
identities mutually consistent.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import pandas as pd
from scipy import stats

from .modwt import Decomposition, nonboundary_counts

__all__ = [
    "ScaleProfile",
    "CrossCorrProfile",
    "WmcProfile",
    "horizon_label",
    "wavelet_variance",
    "wavelet_correlation",
    "wavelet_cross_correlation",
    "covariance_decomposition",
    "wmc",
    "wmcc",
    "scale_leader_table",
]


def horizon_label(level: int) -> str:
    """Investment-horizon label of a detail level, '2^(j-1)-2^j days'."""
    return f"{2 ** (level - 1)}-{2 ** level} days"


@dataclass(frozen=True)
class ScaleProfile:
    """A per-level statistic with confidence bands."""

    levels: np.ndarray
    horizon_labels: tuple[str, ...]
    estimate: np.ndarray
    ci_low: np.ndarray
    ci_high: np.ndarray
    effective_n: np.ndarray


@dataclass(frozen=True)
class CrossCorrProfile:
    """Lagged correlation at one level; rho[lags == 0] matches the
    contemporaneous ScaleProfile value."""

    level: int
    lags: np.ndarray
    rho: np.ndarray
    ci_low: np.ndarray
    ci_high: np.ndarray


@dataclass(frozen=True)
class WmcProfile:
    """Multiple correlation per level: phi = sqrt(max_i R^2_i) where series i
    is regressed on all others; leader_index is the maximising series.

    For the lagged variant, phi_by_lag[j, t] holds phi with the leader
    shifted by lags[t], and best_lag the maximising lag (ties resolved
    toward the smallest |lag|)."""

    levels: np.ndarray
    horizon_labels: tuple[str, ...]
    phi: np.ndarray
    ci_low: np.ndarray
    ci_high: np.ndarray
    leader_index: np.ndarray
    lags: np.ndarray | None = None
    phi_by_lag: np.ndarray | None = None
    best_lag: np.ndarray | None = None


def _check_compatible(*decs: Decomposition) -> None:
    ref = decs[0]
    for d in decs[1:]:
        if (
            d.n != ref.n
            or d.levels != ref.levels
            or d.filter.name != ref.filter.name
            or d.boundary_mode != ref.boundary_mode
        ):
            raise ValueError(
                "decompositions differ in length, depth, filter or boundary mode"
            )


def _fisher_band(rho: np.ndarray, m: np.ndarray, confidence: float):
    """Two-sided Fisher-z interval with effective sample size m."""
    z = stats.norm.ppf(0.5 + confidence / 2.0)
    se = z / np.sqrt(np.maximum(np.asarray(m, dtype=float) - 3.0, 1.0))
    atanh = np.arctanh(np.clip(rho, -1.0 + 1e-15, 1.0 - 1e-15))
    return np.tanh(atanh - se), np.tanh(atanh + se)


def wavelet_variance(dec: Decomposition, confidence: float = 0.95) -> ScaleProfile:
    """Per-level mean squared coefficient over non-boundary entries.

    Confidence bands use a chi-squared approximation with equivalent
    degrees of freedom max(count_j / 2^j, 1), reflecting the serial
    correlation of same-level coefficients.
    """
    counts = np.asarray(nonboundary_counts(dec))
    bad = np.nonzero(counts < 4)[0]
    if len(bad):
        raise ValueError(
            f"level {bad[0] + 1} has {counts[bad[0]]} usable coefficients (< 4)"
        )
    levels = np.arange(1, dec.levels + 1)
    var = np.array(
        [
            np.mean(dec.details[j][dec.nonboundary_mask[j]] ** 2)
            for j in range(dec.levels)
        ]
    )
    edof = np.maximum(counts / 2.0 ** levels, 1.0)
    lo = edof * var / stats.chi2.ppf(0.5 + confidence / 2.0, edof)
    hi = edof * var / stats.chi2.ppf(0.5 - confidence / 2.0, edof)
    return ScaleProfile(
        levels=levels,
        horizon_labels=tuple(horizon_label(j) for j in levels),
        estimate=var,
        ci_low=lo,
        ci_high=hi,
        effective_n=counts,
    )


def _level_arrays(dec: Decomposition, j: int) -> np.ndarray:
    return dec.details[j][dec.nonboundary_mask[j]]


def wavelet_correlation(
    dec_a: Decomposition, dec_b: Decomposition, confidence: float = 0.95
) -> ScaleProfile:
    """Per-level correlation of two series' detail coefficients.

    effective_n reports the non-boundary coefficient count; the Fisher band
    divides it by 2^j because same-level coefficients of the non-decimated
    transform are serially dependent over spans of order 2^j (the full count
    understates the estimator's dispersion badly at coarse levels).
    """
    _check_compatible(dec_a, dec_b)
    counts = np.asarray(nonboundary_counts(dec_a))
    levels = np.arange(1, dec_a.levels + 1)
    rho = np.empty(dec_a.levels)
    for j in range(dec_a.levels):
        a = _level_arrays(dec_a, j)
        b = _level_arrays(dec_b, j)
        if a.size < 4:
            raise ValueError(f"level {j + 1} has fewer than 4 usable coefficients")
        a = a - a.mean()
        b = b - b.mean()
        denom = np.sqrt(np.sum(a * a) * np.sum(b * b))
        if denom == 0.0:
            raise ValueError(f"zero variance at level {j + 1}")
        rho[j] = np.sum(a * b) / denom
    lo, hi = _fisher_band(rho, counts / 2.0 ** levels, confidence)
    return ScaleProfile(
        levels=levels,
        horizon_labels=tuple(horizon_label(j) for j in levels),
        estimate=rho,
        ci_low=lo,
        ci_high=hi,
        effective_n=counts,
    )


def covariance_decomposition(
    dec_a: Decomposition, dec_b: Decomposition
) -> tuple[np.ndarray, float]:
    """Per-level covariances plus the smooth-level covariance.

    For periodic decompositions these sum to the (1/n-denominator) sample
    covariance of the two input series. Detail terms are mean products of
    coefficients; the smooth term is mean-centred, absorbing the series
    means. Requires periodic boundary handling.
    """
    _check_compatible(dec_a, dec_b)
    if dec_a.boundary_mode != "periodic":
        raise ValueError("covariance decomposition requires periodic decompositions")
    per_level = np.array(
        [
            np.mean(dec_a.details[j] * dec_b.details[j])
            - dec_a.details[j].mean() * dec_b.details[j].mean()
            for j in range(dec_a.levels)
        ]
    )
    smooth_cov = float(
        np.mean(dec_a.smooth * dec_b.smooth)
        - dec_a.smooth.mean() * dec_b.smooth.mean()
    )
    return per_level, smooth_cov


def wavelet_cross_correlation(
    dec_a: Decomposition,
    dec_b: Decomposition,
    lag_max: int,
    confidence: float = 0.95,
) -> list[CrossCorrProfile]:
    """Lagged per-level correlation for lags in [-lag_max, lag_max].

    Sign convention: a peak at lag tau > 0 means the second series at time
    k + tau co-moves with the first at time k, i.e. the first series leads.
    The lagged covariance keeps the contemporaneous 1/M_j normalisation
    (biased estimator), which bounds |rho| by 1.
    """
    _check_compatible(dec_a, dec_b)
    counts = np.asarray(nonboundary_counts(dec_a))
    if lag_max < 0:
        raise ValueError("lag_max must be >= 0")
    if np.any(lag_max >= counts / 2.0):
        raise ValueError(
            f"lag_max={lag_max} too large for effective counts {counts.tolist()}"
        )
    lags = np.arange(-lag_max, lag_max + 1)
    n = dec_a.n
    out = []
    for j in range(dec_a.levels):
        mask = dec_a.nonboundary_mask[j]
        da, db = dec_a.details[j], dec_b.details[j]
        mu_a, mu_b = da[mask].mean(), db[mask].mean()
        sd = np.sqrt(np.sum((da[mask] - mu_a) ** 2) * np.sum((db[mask] - mu_b) ** 2))
        if sd == 0.0:
            raise ValueError(f"zero variance at level {j + 1}")
        rho = np.empty(lags.size)
        pair_counts = np.empty(lags.size)
        for t, tau in enumerate(lags):
            if tau >= 0:
                ka = np.arange(0, n - tau)
            else:
                ka = np.arange(-tau, n)
            kb = ka + tau
            sel = mask[ka] & mask[kb]
            prod = np.sum((da[ka[sel]] - mu_a) * (db[kb[sel]] - mu_b))
            # sd equals M_j * sigma_a * sigma_b, so this is the biased
            # (1/M_j-normalised) lagged covariance over the level sigmas
            rho[t] = prod / sd
            pair_counts[t] = sel.sum()
        lo, hi = _fisher_band(rho, pair_counts / 2.0 ** (j + 1), confidence)
        out.append(
            CrossCorrProfile(level=j + 1, lags=lags, rho=rho, ci_low=lo, ci_high=hi)
        )
    return out


def _r_squared(y: np.ndarray, x: np.ndarray, level: int) -> float:
    """R^2 of an intercept-including least-squares fit of y on columns x."""
    design = np.column_stack([np.ones(len(y)), x])
    rank = np.linalg.matrix_rank(design)
    if rank < design.shape[1]:
        raise ValueError(f"singular regressor matrix at level {level}")
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    resid = y - design @ coef
    sst = np.sum((y - y.mean()) ** 2)
    if sst == 0.0:
        raise ValueError(f"zero variance at level {level}")
    return float(np.clip(1.0 - np.sum(resid ** 2) / sst, 0.0, 1.0))


def wmc(decs: list[Decomposition], confidence: float = 0.95) -> WmcProfile:
    """Multiple correlation of a panel per level.

    For each level, every series' coefficients are regressed on all others;
    phi is the square root of the best R^2 and the maximising series is the
    level's leader. Confidence bands use the Fisher transform with the
    effective sample size n / 2^j.
    """
    if len(decs) < 2:
        raise ValueError("multiple correlation needs at least two series")
    _check_compatible(*decs)
    levels = np.arange(1, decs[0].levels + 1)
    n = decs[0].n
    phi = np.empty(len(levels))
    leader = np.empty(len(levels), dtype=int)
    for j in range(len(levels)):
        cols = np.column_stack([_level_arrays(d, j) for d in decs])
        if cols.shape[0] < cols.shape[1] + 2:
            raise ValueError(f"too few usable coefficients at level {j + 1}")
        r2 = np.array(
            [
                _r_squared(cols[:, i], np.delete(cols, i, axis=1), j + 1)
                for i in range(cols.shape[1])
            ]
        )
        # ties (e.g. the two-series case, where both R^2 coincide) break
        # toward the lowest series index
        leader[j] = int(np.argmax(r2 > r2.max() - 1e-12))
        phi[j] = np.sqrt(r2[leader[j]])
    eff = n / 2.0 ** levels
    lo, hi = _fisher_band(phi, eff, confidence)
    return WmcProfile(
        levels=levels,
        horizon_labels=tuple(horizon_label(j) for j in levels),
        phi=phi,
        ci_low=lo,
        ci_high=hi,
        leader_index=leader,
    )


def wmcc(
    decs: list[Decomposition], lag_max: int, confidence: float = 0.95
) -> WmcProfile:
    """Lagged multiple correlation.

    The contemporaneous leader is fixed per level, its coefficients shifted
    by each lag and the regression on the remaining series re-run; a peak at
    lag tau > 0 means the leader at time k + tau co-moves with the others at
    time k, i.e. the rest of the panel leads the leader by tau steps.
    """
    base = wmc(decs, confidence)
    lags = np.arange(-lag_max, lag_max + 1)
    n = decs[0].n
    phi_by_lag = np.empty((len(base.levels), lags.size))
    best = np.empty(len(base.levels), dtype=int)
    for j in range(len(base.levels)):
        mask = decs[0].nonboundary_mask[j]
        lead = int(base.leader_index[j])
        d_lead = decs[lead].details[j]
        others = np.column_stack(
            [d.details[j] for i, d in enumerate(decs) if i != lead]
        )
        for t, tau in enumerate(lags):
            if tau >= 0:
                k = np.arange(0, n - tau)
            else:
                k = np.arange(-tau, n)
            sel = mask[k] & mask[k + tau]
            if sel.sum() < others.shape[1] + 3:
                raise ValueError(f"lag {tau} leaves too few pairs at level {j + 1}")
            phi_by_lag[j, t] = np.sqrt(
                _r_squared(d_lead[k + tau][sel], others[k][sel], j + 1)
            )
        # argmax with near-ties (within rounding) resolved toward |tau| = 0
        order = np.lexsort((lags, np.abs(lags), -np.round(phi_by_lag[j], 12)))
        best[j] = lags[order[0]]
    return WmcProfile(
        levels=base.levels,
        horizon_labels=base.horizon_labels,
        phi=base.phi,
        ci_low=base.ci_low,
        ci_high=base.ci_high,
        leader_index=base.leader_index,
        lags=lags,
        phi_by_lag=phi_by_lag,
        best_lag=best,
    )


def scale_leader_table(
    decs: list[Decomposition], names: list[str], confidence: float = 0.95
) -> pd.DataFrame:
    """Per-horizon leading series (the return-spillover source).

    Rows are flagged low-confidence when the multiple-correlation band
    reaches zero, i.e. the leadership signal is indistinguishable from noise.
    """
    if len(names) != len(decs):
        raise ValueError("one name per decomposition required")
    profile = wmc(decs, confidence)
    return pd.DataFrame(
        {
            "level": profile.levels,
            "horizon": profile.horizon_labels,
            "leader": [names[i] for i in profile.leader_index],
            "phi": profile.phi,
            "ci_low": profile.ci_low,
            "ci_high": profile.ci_high,
            "low_confidence": profile.ci_low <= 0.0,
        }
    )

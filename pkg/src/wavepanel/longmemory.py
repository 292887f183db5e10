"""Wavelet-domain long-range dependence estimation.

Per-octave log2 energies of decimated detail coefficients form the logscale
diagram; over an alignment range of octaves the diagram is linear with
slope 2H - 1, and a weighted least-squares fit with weights
S_j = n ln(2)^2 / 2^(j+1) (the inverse asymptotic variance of each octave's
log energy) yields the Hurst estimate H = (slope + 1) / 2. Derived scaling
parameters follow the affine identities H = (1 + alpha) / 2, h = H - 1 and
D = 2 - h. A rolling variant tracks time-varying persistence, and the
coarse-scale average of pairwise wavelet correlations gives the long-run
(fractal) connectivity matrix, clustered by average linkage on 1 - F.

Synthetic fractional Gaussian noise with exact autocovariance (circulant
embedding) provides the ground-truth oracle for all estimators here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats

from .dependence import wavelet_correlation
from .modwt import (
    Decomposition,
    FilterPair,
    dwt_detail_variances,
    max_level,
    nonboundary_counts,
)

__all__ = [
    "LogscaleDiagram",
    "HurstFit",
    "ScalingParams",
    "RollingHurstSeries",
    "Dendrogram",
    "ConnectivityResult",
    "synth_fgn",
    "logscale_diagram",
    "hurst_wls",
    "scaling_parameters",
    "rolling_hurst",
    "fractal_connectivity",
    "cluster_markets",
]


# ---------------------------------------------------------------------------
# synthetic fractional Gaussian noise
# ---------------------------------------------------------------------------

def _fgn_autocovariance(h: float, lags: np.ndarray) -> np.ndarray:
    k = np.abs(lags.astype(float))
    return 0.5 * (
        (k + 1.0) ** (2 * h) - 2.0 * k ** (2 * h) + np.abs(k - 1.0) ** (2 * h)
    )


def synth_fgn(h: float, n: int, seed: int) -> np.ndarray:
    """Unit-variance fractional Gaussian noise via circulant embedding.

    Exact in distribution: the circulant eigenvalue construction reproduces
    the fGn autocovariance. Deterministic per seed. If the first embedding
    is not positive semidefinite the embedding length is doubled once before
    giving up.
    """
    if not 0.0 < h < 1.0:
        raise ValueError("H must lie in (0, 1)")
    if n < 64:
        raise ValueError("need n >= 64")
    rng = np.random.default_rng(seed)
    for m in (n, 2 * n):
        rho = _fgn_autocovariance(h, np.arange(m))
        row = np.concatenate([rho, [0.0], rho[1:][::-1]])
        lam = np.fft.fft(row).real
        if lam.min() < -1e-9 * lam.max():
            continue
        lam = np.maximum(lam, 0.0)
        size = 2 * m
        zr = rng.standard_normal(m + 1)
        zi = rng.standard_normal(m - 1)
        w = np.empty(size, dtype=complex)
        w[0] = np.sqrt(lam[0] / size) * zr[0]
        w[1:m] = np.sqrt(lam[1:m] / (2 * size)) * (zr[1:m] + 1j * zi)
        w[m] = np.sqrt(lam[m] / size) * zr[m]
        w[m + 1 :] = np.conj(w[1:m][::-1])
        return np.fft.fft(w)[:n].real
    raise ValueError(f"circulant embedding not positive semidefinite for H={h}")


# ---------------------------------------------------------------------------
# logscale diagram and Hurst fit
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HurstFit:
    """Weighted least-squares Hurst estimate over octaves [j1, j2].

    slope is the fitted log2-energy slope (the scaling exponent alpha);
    H = (slope + 1) / 2. std_err is the residual-scaled WLS standard error
    of H; t_value = H / std_err tests H != 0 with k - 2 degrees of freedom.
    """

    H: float
    std_err: float
    t_value: float
    p_value: float
    j1: int
    j2: int
    slope: float
    intercept: float
    slope_std_err: float
    intercept_std_err: float

    @property
    def alpha(self) -> float:
        return self.slope

    @property
    def dof(self) -> int:
        return self.j2 - self.j1 - 1

    def alpha_ci(self, confidence: float = 0.95) -> tuple[float, float]:
        # Student quantile: the standard error is residual-scaled on few octaves
        q = stats.t.ppf(0.5 + confidence / 2.0, df=self.dof)
        return (self.slope - q * self.slope_std_err,
                self.slope + q * self.slope_std_err)


@dataclass(frozen=True)
class LogscaleDiagram:
    """Per-octave log2 mean squared detail energy with chi-squared bands."""

    octaves: np.ndarray
    eta: np.ndarray
    n_j: np.ndarray
    ci_low: np.ndarray
    ci_high: np.ndarray
    fit_slope: float
    fit_intercept: float
    alignment_range: tuple[int, int]
    fit: HurstFit


def hurst_wls(
    octaves: np.ndarray,
    eta: np.ndarray,
    n: int,
    j1: int | None = None,
    j2: int | None = None,
    weights: np.ndarray | None = None,
) -> HurstFit:
    """Weighted least squares of eta on the octave index.

    Default weights S_j = n ln(2)^2 / 2^(j+1) are the inverse theoretical
    asymptotic variances of eta_j, so doubling n rescales every weight
    uniformly and leaves the point estimate unchanged; equal explicit
    weights reduce the fit to ordinary least squares. Standard errors are
    residual-scaled (s^2 times the inverse weighted normal matrix), hence
    zero for an exactly linear diagram.
    """
    octaves = np.asarray(octaves)
    eta = np.asarray(eta, dtype=float)
    j1 = int(octaves[0]) if j1 is None else j1
    j2 = int(octaves[-1]) if j2 is None else j2
    sel = (octaves >= j1) & (octaves <= j2)
    js = octaves[sel].astype(float)
    ys = eta[sel]
    k = js.size
    if k < 3:
        raise ValueError("need at least 3 octaves in the fit range")
    if not np.all(np.isfinite(ys)):
        raise ValueError("non-finite log energy in the fit range")

    if weights is None:
        weights = n * np.log(2.0) ** 2 / 2.0 ** (js + 1)
    else:
        weights = np.asarray(weights, dtype=float)[sel] \
            if len(weights) == len(octaves) else np.asarray(weights, dtype=float)
        if weights.size != k or np.any(weights <= 0):
            raise ValueError("weights must be positive, one per fitted octave")
    sw = weights.sum()
    swj = np.sum(weights * js)
    swjj = np.sum(weights * js * js)
    swy = np.sum(weights * ys)
    swjy = np.sum(weights * js * ys)
    det = sw * swjj - swj ** 2
    slope = (sw * swjy - swj * swy) / det
    intercept = (swjj * swy - swj * swjy) / det

    resid = ys - (slope * js + intercept)
    s2 = np.sum(weights * resid ** 2) / (k - 2)
    se_slope = float(np.sqrt(s2 * sw / det))
    se_intercept = float(np.sqrt(s2 * swjj / det))

    hurst = (slope + 1.0) / 2.0
    se_h = se_slope / 2.0
    if se_h > 0:
        t_value = hurst / se_h
        p_value = 2.0 * stats.t.sf(abs(t_value), df=k - 2)
    else:
        t_value = np.inf if hurst != 0 else 0.0
        p_value = 0.0 if hurst != 0 else 1.0
    return HurstFit(
        H=float(hurst),
        std_err=se_h,
        t_value=float(t_value),
        p_value=float(p_value),
        j1=int(j1),
        j2=int(j2),
        slope=float(slope),
        intercept=float(intercept),
        slope_std_err=se_slope,
        intercept_std_err=se_intercept,
    )


def _default_j2(n: int, j1: int, cap: int = 8) -> int:
    """Largest octave <= cap keeping at least 4 decimated coefficients."""
    j2 = min(cap, max_level(n))
    while j2 > j1 and n // 2 ** j2 < 4:
        j2 -= 1
    return j2


def logscale_diagram(
    x: np.ndarray,
    j1: int = 2,
    j2: int | None = None,
    filt: FilterPair | None = None,
    confidence: float = 0.95,
) -> LogscaleDiagram:
    """Log2 energy per octave with the weighted fit over [j1, j2].

    Octave energies come from the decimated transform, so coefficient counts
    halve per octave (n_j ~ n / 2^j). Confidence bands treat each octave's
    mean squared coefficient as chi-squared with n_j degrees of freedom.
    The default alignment range is [2, 8], shrunk to keep n_j >= 4.
    """
    x = np.asarray(x, dtype=float)
    n = x.size
    if j1 < 1:
        raise ValueError("j1 must be >= 1")
    if j2 is None:
        j2 = _default_j2(n, j1)
    if j2 > max_level(n):
        raise ValueError(f"j2={j2} exceeds floor(log2(n))={max_level(n)}")
    if j2 - j1 < 2:
        raise ValueError("alignment range must span at least 3 octaves")
    variances, counts = dwt_detail_variances(x, j2, filt)
    octaves = np.arange(1, j2 + 1)
    if np.any(counts[j1 - 1 :] < 4):
        bad = octaves[j1 - 1 :][counts[j1 - 1 :] < 4][0]
        raise ValueError(f"octave {bad} has fewer than 4 coefficients")
    if np.any(variances <= 0.0):
        raise ValueError("zero detail energy; series has no fluctuation")
    eta = np.log2(variances)
    lo_q = stats.chi2.ppf(0.5 + confidence / 2.0, counts)
    hi_q = stats.chi2.ppf(0.5 - confidence / 2.0, counts)
    ci_low = np.log2(variances * counts / lo_q)
    ci_high = np.log2(variances * counts / hi_q)
    fit = hurst_wls(octaves, eta, n, j1, j2)
    return LogscaleDiagram(
        octaves=octaves,
        eta=eta,
        n_j=np.asarray(counts),
        ci_low=ci_low,
        ci_high=ci_high,
        fit_slope=fit.slope,
        fit_intercept=fit.intercept,
        alignment_range=(j1, j2),
        fit=fit,
    )


# ---------------------------------------------------------------------------
# derived scaling parameters
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ScalingParams:
    """Scaling exponent and its affine relatives.

    H_lrd = (1 + alpha) / 2 exactly, h_ss = H_lrd - 1 and D = 2 - h_ss
    (fractal dimension convention for alpha in (1, 3) applied uniformly).
    Confidence intervals are the alpha interval mapped through the same
    affine maps. cf is the rectified fit intercept, 2^intercept; it fixes
    the level of the scaling law, not a calibrated spectral constant.
    """

    alpha: float
    H_lrd: float
    h_ss: float
    D: float
    cf: float | None
    alpha_ci: tuple[float, float]
    H_ci: tuple[float, float]
    h_ci: tuple[float, float]
    D_ci: tuple[float, float]
    cf_ci: tuple[float, float] | None


def scaling_parameters(
    alpha: float,
    alpha_ci: tuple[float, float] | None = None,
    cf: float | None = None,
    cf_ci: tuple[float, float] | None = None,
) -> ScalingParams:
    """Map a scaling exponent (and interval) to the derived parameters."""
    if alpha_ci is None:
        alpha_ci = (alpha, alpha)
    lo, hi = float(alpha_ci[0]), float(alpha_ci[1])
    H = (1.0 + alpha) / 2.0
    h = H - 1.0
    d = 2.0 - h
    h_ci = ((1.0 + lo) / 2.0 - 1.0, (1.0 + hi) / 2.0 - 1.0)
    return ScalingParams(
        alpha=float(alpha),
        H_lrd=H,
        h_ss=h,
        D=d,
        cf=cf,
        alpha_ci=(lo, hi),
        H_ci=((1.0 + lo) / 2.0, (1.0 + hi) / 2.0),
        h_ci=h_ci,
        D_ci=(2.0 - h_ci[1], 2.0 - h_ci[0]),
        cf_ci=cf_ci,
    )


def scaling_parameters_from_fit(
    fit: HurstFit, confidence: float = 0.95
) -> ScalingParams:
    """Derived scaling parameters of a fitted logscale diagram."""
    q = stats.t.ppf(0.5 + confidence / 2.0, df=fit.dof)
    cf = 2.0 ** fit.intercept
    cf_ci = (
        2.0 ** (fit.intercept - q * fit.intercept_std_err),
        2.0 ** (fit.intercept + q * fit.intercept_std_err),
    )
    return scaling_parameters(fit.slope, fit.alpha_ci(confidence), cf, cf_ci)


# ---------------------------------------------------------------------------
# rolling Hurst
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RollingHurstSeries:
    """Window-end anchored Hurst estimates; values above 0.5 mark persistent
    (long-memory) phases, values at or below 0.5 efficient ones."""

    window_length: int
    step: int
    j1: int
    j2: int
    anchors: np.ndarray
    hurst: np.ndarray
    std_err: np.ndarray
    fits: tuple[HurstFit, ...]


def rolling_hurst(
    x: np.ndarray,
    window_length: int = 260,
    step: int = 24,
    j1: int = 2,
    j2: int | None = None,
    filt: FilterPair | None = None,
) -> RollingHurstSeries:
    """Hurst estimates over sliding windows, anchored at window ends."""
    x = np.asarray(x, dtype=float)
    if step < 1:
        raise ValueError("step must be >= 1")
    if window_length > x.size:
        raise ValueError("window longer than the series")
    if j2 is None:
        j2 = _default_j2(window_length, j1)
    if window_length < 2 ** j2 * 4:
        raise ValueError(
            f"window_length={window_length} too short for octave {j2} "
            f"(need >= {2 ** j2 * 4})"
        )
    starts = np.arange(0, x.size - window_length + 1, step)
    fits = []
    for s in starts:
        diagram = logscale_diagram(x[s : s + window_length], j1, j2, filt)
        fits.append(diagram.fit)
    return RollingHurstSeries(
        window_length=window_length,
        step=step,
        j1=j1,
        j2=int(j2),
        anchors=starts + window_length - 1,
        hurst=np.array([f.H for f in fits]),
        std_err=np.array([f.std_err for f in fits]),
        fits=tuple(fits),
    )


# ---------------------------------------------------------------------------
# fractal connectivity and clustering
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Dendrogram:
    """Agglomerative merge list: (cluster_a, cluster_b, height, size).

    Original observations are clusters 0..p-1; merge i creates cluster p+i.
    Average linkage guarantees non-decreasing heights."""

    merges: tuple[tuple[int, int, float, int], ...]

    @property
    def heights(self) -> np.ndarray:
        return np.array([m[2] for m in self.merges])


@dataclass(frozen=True)
class ConnectivityResult:
    """Long-run correlation matrix over a coarse scale range.

    converged[i, l] is True when the pairwise wavelet correlation varies by
    less than the tolerance across the averaged octaves, i.e. the pair has
    reached its asymptotic long-run correlation."""

    F: np.ndarray
    scale_range: tuple[int, int]
    converged: np.ndarray
    dendrogram: Dendrogram
    labels: np.ndarray


def _average_linkage(dist: np.ndarray):
    """Deterministic average-linkage agglomeration of a distance matrix.

    Scans pairs in index order so exact ties resolve toward the lowest
    index pair. Returns the merge list and the per-step member sets.
    """
    p = dist.shape[0]
    d = dist.astype(float).copy()
    active = list(range(p))
    members = {i: [i] for i in range(p)}
    ids = {i: i for i in range(p)}
    merges = []
    for merge_idx in range(p - 1):
        best = None
        for ai in range(len(active)):
            for bi in range(ai + 1, len(active)):
                i, j = active[ai], active[bi]
                if best is None or d[i, j] < best[0] - 1e-15:
                    best = (d[i, j], i, j)
        _, i, j = best
        new_id = p + merge_idx
        merges.append((ids[i], ids[j], float(d[i, j]),
                       len(members[i]) + len(members[j])))
        # average-linkage update: weighted mean of distances to the merged pair
        ni, nj = len(members[i]), len(members[j])
        for k in active:
            if k in (i, j):
                continue
            d[i, k] = d[k, i] = (ni * d[i, k] + nj * d[j, k]) / (ni + nj)
        members[i] = members[i] + members[j]
        ids[i] = new_id
        active.remove(j)
    return merges, members[active[0]]


def cluster_markets(
    F: np.ndarray,
    n_clusters: int | None = None,
    height: float | None = None,
) -> tuple[Dendrogram, np.ndarray]:
    """Average-linkage clustering of a connectivity matrix on 1 - F.

    Exactly one of n_clusters / height selects the flat clustering: either
    the k-cluster cut or all merges strictly below the height threshold.
    Flat labels are numbered by each cluster's smallest member index.
    """
    F = np.asarray(F, dtype=float)
    p = F.shape[0]
    if F.shape != (p, p):
        raise ValueError("connectivity matrix must be square")
    if (n_clusters is None) == (height is None):
        raise ValueError("specify exactly one of n_clusters or height")
    if n_clusters is not None and not 1 <= n_clusters <= p:
        raise ValueError(f"n_clusters must lie in [1, {p}]")

    merges, _ = _average_linkage(1.0 - F)
    dendrogram = Dendrogram(merges=tuple(merges))

    if n_clusters is not None:
        n_merges = p - n_clusters
    else:
        n_merges = int(np.sum(dendrogram.heights < height))
    parent = list(range(p + len(merges)))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for idx in range(n_merges):
        a, b, _, _ = merges[idx]
        root = p + idx
        parent[find(a)] = root
        parent[find(b)] = root

    groups: dict[int, list[int]] = {}
    for i in range(p):
        groups.setdefault(find(i), []).append(i)
    labels = np.empty(p, dtype=int)
    for lab, (_, group) in enumerate(
        sorted(groups.items(), key=lambda kv: min(kv[1]))
    ):
        labels[group] = lab
    return dendrogram, labels


def fractal_connectivity(
    decs: list[Decomposition],
    j1: int,
    j2: int,
    tolerance: float = 0.1,
    n_clusters: int = 2,
) -> ConnectivityResult:
    """Long-run correlation matrix from coarse-scale wavelet correlations.

    F[i, l] averages the pairwise per-level correlation over octaves
    [j1, j2]; correlation normalisation cancels the per-scale energy growth
    of long-memory series, so no further rescaling is applied. A pair is
    converged when its correlation varies less than the tolerance across
    the range.
    """
    if len(decs) < 2:
        raise ValueError("need at least 2 series")
    levels = decs[0].levels
    if not 1 <= j1 < j2 <= levels:
        raise ValueError(f"scale range [{j1}, {j2}] invalid for {levels} levels")
    counts = np.asarray(nonboundary_counts(decs[0]))
    n = decs[0].n
    if min(counts[j1 - 1 : j2].min(), n // 2 ** j2) < 8:
        raise ValueError("fewer than 8 coarse-scale coefficients in range")
    p = len(decs)
    F = np.eye(p)
    converged = np.ones((p, p), dtype=bool)
    for i in range(p):
        for l in range(i + 1, p):
            profile = wavelet_correlation(decs[i], decs[l])
            rhos = profile.estimate[j1 - 1 : j2]
            F[i, l] = F[l, i] = rhos.mean()
            converged[i, l] = converged[l, i] = bool(np.ptp(rhos) < tolerance)
    dendrogram, labels = cluster_markets(F, n_clusters=n_clusters)
    return ConnectivityResult(
        F=F,
        scale_range=(j1, j2),
        converged=converged,
        dendrogram=dendrogram,
        labels=labels,
    )

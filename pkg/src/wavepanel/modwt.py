"""Maximal-overlap discrete wavelet transform core.

Implements the non-decimated pyramid transform with periodic, brick-wall
(boundary-masked) and reflection boundary handling, the inverse transform
and the additive multiresolution split, plus construction of the supported
wavelet filters (Haar and the length-8 least-asymmetric Daubechies filter).

Conventions
-----------
* Scaling (low-pass) filters sum to sqrt(2) and have unit energy.
* Wavelet (high-pass) filters follow the quadrature-mirror relation
  h[l] = (-1)^l * g[L-1-l], so they sum to zero.
* The pyramid applies filters rescaled by 1/sqrt(2) at every stage, which
  preserves energy: sum_j ||d_j||^2 + ||s_J||^2 == ||x||^2 under periodic
  boundary handling.
* Level-j coefficients describe fluctuations at horizons of 2^(j-1) to 2^j
  sampling periods.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from math import comb

import numpy as np
import pandas as pd

__all__ = [
    "FilterPair",
    "Decomposition",
    "build_filter",
    "modwt_transform",
    "mra_components",
    "mra_reconstruct",
    "nonboundary_counts",
    "boundary_width",
    "decomposition_frame",
]

_FILTER_TOL = 1e-12


@dataclass(frozen=True)
class FilterPair:
    """A scaling/wavelet filter pair in the quadrature-mirror convention."""

    name: str
    scaling: np.ndarray
    wavelet: np.ndarray

    @property
    def length(self) -> int:
        return len(self.scaling)

    def validate(self, tol: float = _FILTER_TOL) -> None:
        """Raise if the pair violates the defining filter identities."""
        g, h = self.scaling, self.wavelet
        if len(g) != len(h):
            raise ValueError("scaling and wavelet filters differ in length")
        L = len(g)
        checks = {
            "wavelet sum": abs(np.sum(h)),
            "scaling sum": abs(np.sum(g) - np.sqrt(2.0)),
            "wavelet energy": abs(np.sum(h * h) - 1.0),
            "scaling energy": abs(np.sum(g * g) - 1.0),
            "quadrature mirror": np.max(
                np.abs(h - (-1.0) ** np.arange(L) * g[::-1])
            ),
        }
        bad = {k: v for k, v in checks.items() if v > tol}
        if bad:
            raise ValueError(f"filter '{self.name}' fails invariants: {bad}")


def _least_asymmetric_scaling(n_moments: int) -> np.ndarray:
    """Daubechies scaling filter of length 2*n_moments, least-asymmetric variant.

    Spectral factorization of |m0(w)|^2 = cos^(2N)(w/2) * P(sin^2(w/2)) with
    P(y) = sum_{k<N} C(N-1+k,k) y^k. Each root of P in y yields a reciprocal
    pair of roots in z; every conjugate-consistent selection of one root per
    pair gives a valid real filter. The least-asymmetric variant is the
    selection whose transfer function deviates least from linear phase; the
    remaining mirror ambiguity is resolved toward the front-loaded (smaller
    energy centroid) orientation, which is the conventional tabulation.
    """
    N = n_moments
    P = np.array([comb(N - 1 + k, k) for k in range(N)], dtype=float)
    yroots = np.roots(P[::-1])
    zpairs = []
    for y in yroots:
        b = 2.0 - 4.0 * y
        disc = np.sqrt(b * b - 4.0 + 0j)
        zpairs.append(((b + disc) / 2.0, (b - disc) / 2.0))

    candidates = []
    for picks in product(range(2), repeat=len(zpairs)):
        zs = [pair[i] for pair, i in zip(zpairs, picks)]
        poly = np.poly(zs + [-1.0] * N)
        if np.max(np.abs(poly.imag)) > 1e-8:
            continue  # conjugate-inconsistent pick, complex filter
        g = poly.real
        candidates.append(g / np.sum(g) * np.sqrt(2.0))
    if not candidates:
        raise RuntimeError("spectral factorization produced no real filter")

    omega = np.linspace(1e-3, np.pi - 1e-3, 512)
    design = np.vstack([omega, np.ones_like(omega)]).T

    def phase_nonlinearity(g: np.ndarray) -> float:
        response = np.exp(-1j * np.outer(omega, np.arange(len(g)))) @ g
        phase = np.unwrap(np.angle(response))
        coef, *_ = np.linalg.lstsq(design, phase, rcond=None)
        return float(np.mean((phase - design @ coef) ** 2))

    scores = np.array([phase_nonlinearity(g) for g in candidates])
    near_best = [g for g, s in zip(candidates, scores) if s < scores.min() + 1e-6]
    # mirror twins tie on phase; keep the front-loaded orientation
    centroid = lambda g: np.sum(np.arange(len(g)) * g * g)
    return min(near_best, key=centroid)


@lru_cache(maxsize=None)
def _filter_arrays(name: str) -> tuple[np.ndarray, np.ndarray]:
    if name == "haar":
        g = np.array([1.0, 1.0]) / np.sqrt(2.0)
    elif name == "la8":
        g = _least_asymmetric_scaling(4)
    else:
        raise ValueError(f"unknown filter '{name}' (supported: la8, haar)")
    h = (-1.0) ** np.arange(len(g)) * g[::-1]
    g.flags.writeable = False
    h.flags.writeable = False
    return g, h


def build_filter(name: str) -> FilterPair:
    """Return the validated filter pair for ``name`` ('la8' or 'haar')."""
    g, h = _filter_arrays(name.lower())
    pair = FilterPair(name=name.lower(), scaling=g, wavelet=h)
    pair.validate()
    return pair


@dataclass(frozen=True)
class Decomposition:
    """Per-level detail coefficients plus the final smooth of one series.

    ``details`` has shape [levels, n] and ``smooth`` shape [n]; the transform
    is non-decimated so every level keeps the input length.
    ``nonboundary_mask[j-1, k]`` is True where the level-j coefficient is
    untouched by boundary treatment; under 'periodic' and 'reflection' all
    coefficients count, under 'brickwall' the first L_j - 1 per level are
    masked out, L_j = (2^j - 1)(L - 1) + 1.
    """

    levels: int
    details: np.ndarray
    smooth: np.ndarray
    boundary_mode: str
    nonboundary_mask: np.ndarray
    filter: FilterPair

    @property
    def n(self) -> int:
        return self.details.shape[-1]


def boundary_width(level: int, filter_length: int) -> int:
    """Equivalent filter width L_j = (2^j - 1)(L - 1) + 1 at a given level."""
    return (2 ** level - 1) * (filter_length - 1) + 1


def max_level(n: int) -> int:
    """Largest admissible decomposition depth, floor(log2(n))."""
    return int(np.floor(np.log2(n)))


def _pyramid(x: np.ndarray, levels: int, filt: FilterPair):
    """Non-decimated analysis pyramid along the last axis (periodic)."""
    n = x.shape[-1]
    gt = filt.scaling / np.sqrt(2.0)
    ht = filt.wavelet / np.sqrt(2.0)
    taps = np.arange(filt.length)
    v = x
    details = []
    for j in range(1, levels + 1):
        idx = (np.arange(n)[None, :] - 2 ** (j - 1) * taps[:, None]) % n
        lagged = v[..., idx]  # [..., L, n]
        details.append(np.tensordot(ht, lagged, axes=(0, -2)))
        v = np.tensordot(gt, lagged, axes=(0, -2))
    return details, v


def _inverse_pyramid(details, smooth: np.ndarray, filt: FilterPair) -> np.ndarray:
    """Synthesis pyramid inverting :func:`_pyramid` (periodic, 1-D)."""
    n = smooth.shape[-1]
    gt = filt.scaling / np.sqrt(2.0)
    ht = filt.wavelet / np.sqrt(2.0)
    taps = np.arange(filt.length)
    v = smooth
    for j in range(len(details), 0, -1):
        idx = (np.arange(n)[None, :] + 2 ** (j - 1) * taps[:, None]) % n
        v = ht @ details[j - 1][idx] + gt @ v[idx]
    return v


def modwt_transform(
    x: np.ndarray,
    levels: int,
    filt: FilterPair | None = None,
    boundary_mode: str = "periodic",
) -> Decomposition:
    """Decompose a series into ``levels`` details plus a smooth.

    boundary_mode:
        'periodic'   circular filtering, the computational base case
        'brickwall'  periodic filtering, then the L_j - 1 wrap-affected
                     leading coefficients per level are masked out of the
                     nonboundary mask (they stay in the arrays)
        'reflection' the series is extended symmetrically to length 2n,
                     transformed periodically and truncated back
    """
    filt = filt or build_filter("la8")
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ValueError("modwt_transform expects a 1-D series")
    n = x.size
    if n < filt.length:
        raise ValueError(f"series of length {n} shorter than filter ({filt.length})")
    if levels < 1:
        raise ValueError("levels must be >= 1")
    if levels > max_level(n):
        raise ValueError(
            f"levels={levels} exceeds floor(log2(n))={max_level(n)} for n={n}"
        )
    if boundary_mode not in ("periodic", "brickwall", "reflection"):
        raise ValueError(f"unknown boundary_mode '{boundary_mode}'")

    if boundary_mode == "reflection":
        ext = np.concatenate([x, x[::-1]])
        details, smooth = _pyramid(ext, levels, filt)
        details = [d[:n] for d in details]
        smooth = smooth[:n]
    else:
        details, smooth = _pyramid(x, levels, filt)

    mask = np.ones((levels, n), dtype=bool)
    if boundary_mode == "brickwall":
        for j in range(1, levels + 1):
            cut = min(boundary_width(j, filt.length) - 1, n)
            mask[j - 1, :cut] = False

    return Decomposition(
        levels=levels,
        details=np.asarray(details),
        smooth=smooth,
        boundary_mode=boundary_mode,
        nonboundary_mask=mask,
        filter=filt,
    )


def nonboundary_counts(dec: Decomposition) -> list[int]:
    """Number of usable (non-boundary) coefficients per level."""
    return [int(c) for c in dec.nonboundary_mask.sum(axis=1)]


def mra_components(dec: Decomposition) -> np.ndarray:
    """Additive band series, shape [levels + 1, n]: one per detail level,
    the last row synthesized from the smooth. Rows sum to the input series.

    Only defined for periodic decompositions; masking breaks additivity.
    """
    if dec.boundary_mode != "periodic":
        raise ValueError(
            f"multiresolution synthesis requires a periodic decomposition, "
            f"got '{dec.boundary_mode}'"
        )
    n = dec.n
    zero = np.zeros(n)
    bands = []
    for j in range(dec.levels):
        parts = [dec.details[k] if k == j else zero for k in range(dec.levels)]
        bands.append(_inverse_pyramid(parts, zero, dec.filter))
    bands.append(_inverse_pyramid([zero] * dec.levels, dec.smooth, dec.filter))
    return np.asarray(bands)


def mra_reconstruct(dec: Decomposition) -> np.ndarray:
    """Sum of all band series; recovers the input to machine precision."""
    return mra_components(dec).sum(axis=0)


def decomposition_frame(dec: Decomposition) -> pd.DataFrame:
    """Flatten a decomposition to (level, index, coefficient, is_boundary)."""
    rows = []
    for j in range(1, dec.levels + 1):
        rows.append(
            pd.DataFrame(
                {
                    "level": f"d{j}",
                    "index": np.arange(dec.n),
                    "coefficient": dec.details[j - 1],
                    "is_boundary": ~dec.nonboundary_mask[j - 1],
                }
            )
        )
    rows.append(
        pd.DataFrame(
            {
                "level": f"s{dec.levels}",
                "index": np.arange(dec.n),
                "coefficient": dec.smooth,
                "is_boundary": False,
            }
        )
    )
    return pd.concat(rows, ignore_index=True)


def dwt_detail_variances(
    x: np.ndarray, levels: int, filt: FilterPair | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """Mean squared decimated detail coefficients per octave.

    Used by the long-memory estimators, which need the decimated coefficient
    counts n_j ~ n / 2^j; the decimated transform itself is not part of the
    public decomposition API. Odd-length approximations drop their last
    sample before filtering, so n_{j+1} = floor(n_j / 2). Periodic filtering.

    Returns (variances[levels], counts[levels]).
    """
    filt = filt or build_filter("la8")
    v = np.asarray(x, dtype=float)
    g, h = filt.scaling, filt.wavelet
    taps = np.arange(filt.length)
    variances = np.empty(levels)
    counts = np.empty(levels, dtype=int)
    for j in range(levels):
        m = v.size - (v.size % 2)
        if m < 2:
            raise ValueError(f"series exhausted at octave {j + 1}")
        v = v[:m]
        idx = (2 * np.arange(m // 2)[:, None] + 1 - taps[None, :]) % m
        w = v[idx] @ h
        v = v[idx] @ g
        variances[j] = np.mean(w * w)
        counts[j] = w.size
    return variances, counts

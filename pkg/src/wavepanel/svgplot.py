"""Static SVG rendering of analysis outputs.

Hand-rolled SVG text keeps command outputs byte-reproducible (no library
metadata, no timestamps). Three plots are provided: the coherence map with
cone shading, significance outlines and decimated phase arrows; the
logscale diagram with confidence whiskers, fitted line and alignment
shading; and a (clustered-order) matrix heatmap.
"""

from __future__ import annotations

import numpy as np

from .coherence import CoherenceField
from .longmemory import LogscaleDiagram

__all__ = ["coherence_svg", "logscale_svg", "matrix_heatmap_svg"]

_SEQ_STOPS = [  # dark blue -> teal -> green -> yellow
    (0.0, (68, 1, 84)),
    (0.25, (59, 82, 139)),
    (0.5, (33, 145, 140)),
    (0.75, (94, 201, 98)),
    (1.0, (253, 231, 37)),
]


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _seq_color(v: float) -> str:
    v = float(min(max(v, 0.0), 1.0))
    for (lo, c_lo), (hi, c_hi) in zip(_SEQ_STOPS, _SEQ_STOPS[1:]):
        if v <= hi:
            t = (v - lo) / (hi - lo)
            rgb = [round(a + t * (b - a)) for a, b in zip(c_lo, c_hi)]
            return "#{:02x}{:02x}{:02x}".format(*rgb)
    return "#fde725"


def _div_color(v: float) -> str:
    """Blue (-1) -> white (0) -> red (+1)."""
    v = float(min(max(v, -1.0), 1.0))
    if v < 0:
        t = 1.0 + v
        rgb = (round(33 + t * 222), round(102 + t * 153), 255)
    else:
        t = 1.0 - v
        rgb = (255, round(t * 255), round(t * 255))
    return "#{:02x}{:02x}{:02x}".format(*rgb)


def _document(width: int, height: int, body: list[str]) -> str:
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">'
    )
    return "\n".join([head, *body, "</svg>"]) + "\n"


def coherence_svg(
    field: CoherenceField,
    arrow_step: int = 8,
    width: int = 900,
    height: int = 500,
    title: str = "squared wavelet coherence",
    annotations: list[tuple[int, str]] | None = None,
) -> str:
    """Coherence map: time on x, log2 scale on y (fine scales on top).

    Cells outside the cone of influence are washed out; significant cells
    are outlined; phase arrows (every arrow_step-th cell inside the cone)
    point right for in-phase, left for anti-phase, down when the first
    series leads. annotations are (time index, label) event markers drawn
    on the time axis."""
    margin_l, margin_t, margin_b = 60, 30, 40
    plot_w = width - margin_l - 20
    plot_h = height - margin_t - margin_b
    n_s, n_t = field.r2.shape
    cw = plot_w / n_t
    ch = plot_h / n_s
    inside = field.inside_coi()

    body = [
        f'<text x="{width // 2}" y="18" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13">{title}</text>'
    ]
    for i in range(n_s):
        y = margin_t + i * ch
        row = []
        for t in range(n_t):
            color = _seq_color(field.r2[i, t])
            op = "1.0" if inside[i, t] else "0.25"
            row.append(
                f'<rect x="{_fmt(margin_l + t * cw)}" y="{_fmt(y)}" '
                f'width="{_fmt(cw + 0.5)}" height="{_fmt(ch + 0.5)}" '
                f'fill="{color}" fill-opacity="{op}"/>'
            )
        body.extend(row)
    if field.sig_mask is not None:
        for i in range(n_s):
            for t in range(n_t):
                if field.sig_mask[i, t] and inside[i, t]:
                    body.append(
                        f'<rect x="{_fmt(margin_l + t * cw)}" '
                        f'y="{_fmt(margin_t + i * ch)}" width="{_fmt(cw)}" '
                        f'height="{_fmt(ch)}" fill="none" stroke="black" '
                        f'stroke-width="0.4"/>'
                    )
    # cone of influence boundary
    pts = []
    log_s0 = np.log2(field.scales[0])
    log_span = np.log2(field.scales[-1]) - log_s0
    for t in range(n_t):
        c = max(field.coi[t], field.scales[0] * 1e-6)
        frac = (np.log2(c) - log_s0) / log_span if log_span > 0 else 0.0
        frac = min(max(frac, 0.0), 1.0)
        pts.append(
            f"{_fmt(margin_l + (t + 0.5) * cw)},{_fmt(margin_t + frac * plot_h)}"
        )
    body.append(
        f'<polyline points="{" ".join(pts)}" fill="none" stroke="white" '
        f'stroke-width="1.2" stroke-dasharray="4,3"/>'
    )
    # phase arrows
    for i in range(0, n_s, arrow_step):
        for t in range(0, n_t, arrow_step):
            if not inside[i, t]:
                continue
            ang = field.phase[i, t]
            cx = margin_l + (t + 0.5) * cw
            cy = margin_t + (i + 0.5) * ch
            r = min(cw * arrow_step, ch * arrow_step) * 0.35
            dx, dy = r * np.cos(ang), r * np.sin(ang)
            body.append(
                f'<line x1="{_fmt(cx - dx)}" y1="{_fmt(cy + dy)}" '
                f'x2="{_fmt(cx + dx)}" y2="{_fmt(cy - dy)}" stroke="black" '
                f'stroke-width="0.8"/>'
            )
            body.append(
                f'<circle cx="{_fmt(cx + dx)}" cy="{_fmt(cy - dy)}" '
                f'r="1.2" fill="black"/>'
            )
    # scale axis labels (powers of two)
    j = int(np.ceil(np.log2(field.scales[0])))
    while 2 ** j <= field.scales[-1]:
        frac = (j - log_s0) / log_span if log_span > 0 else 0.0
        y = margin_t + frac * plot_h
        body.append(
            f'<text x="{margin_l - 8}" y="{_fmt(y + 4)}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11">{2 ** j}</text>'
        )
        j += 1
    body.append(
        f'<text x="{margin_l - 40}" y="{margin_t + plot_h / 2:.0f}" '
        f'font-family="sans-serif" font-size="11" '
        f'transform="rotate(-90 {margin_l - 40} {margin_t + plot_h / 2:.0f})" '
        f'text-anchor="middle">scale</text>'
    )
    body.append(
        f'<text x="{margin_l + plot_w / 2:.0f}" y="{height - 10}" '
        f'text-anchor="middle" font-family="sans-serif" font-size="11">time</text>'
    )
    for idx, label in annotations or []:
        x = margin_l + (idx + 0.5) * cw
        body.append(
            f'<line x1="{_fmt(x)}" y1="{margin_t}" x2="{_fmt(x)}" '
            f'y2="{margin_t + plot_h}" stroke="black" stroke-width="0.6" '
            f'stroke-dasharray="2,4"/>'
        )
        body.append(
            f'<text x="{_fmt(x)}" y="{margin_t + plot_h + 14}" '
            f'text-anchor="middle" font-family="sans-serif" font-size="10">'
            f"{label}</text>"
        )
    return _document(width, height, body)


def logscale_svg(
    diagram: LogscaleDiagram, width: int = 640, height: int = 440
) -> str:
    """Octave log-energy diagram with whiskers, fit line and alignment band."""
    margin_l, margin_t, margin_b = 60, 30, 45
    plot_w = width - margin_l - 25
    plot_h = height - margin_t - margin_b
    js = diagram.octaves.astype(float)
    lo = float(np.min(diagram.ci_low)) - 0.5
    hi = float(np.max(diagram.ci_high)) + 0.5

    def sx(j: float) -> float:
        return margin_l + (j - js[0]) / (js[-1] - js[0]) * plot_w

    def sy(e: float) -> float:
        return margin_t + (hi - e) / (hi - lo) * plot_h

    j1, j2 = diagram.alignment_range
    body = [
        f'<rect x="{_fmt(sx(j1))}" y="{margin_t}" '
        f'width="{_fmt(sx(j2) - sx(j1))}" height="{plot_h}" '
        f'fill="#f2e8cf" stroke="none"/>'
    ]
    y1 = sy(diagram.fit_slope * j1 + diagram.fit_intercept)
    y2 = sy(diagram.fit_slope * j2 + diagram.fit_intercept)
    body.append(
        f'<line x1="{_fmt(sx(j1))}" y1="{_fmt(y1)}" x2="{_fmt(sx(j2))}" '
        f'y2="{_fmt(y2)}" stroke="#c1121f" stroke-width="1.5"/>'
    )
    for j, e, cl, chi_ in zip(js, diagram.eta, diagram.ci_low, diagram.ci_high):
        body.append(
            f'<line x1="{_fmt(sx(j))}" y1="{_fmt(sy(cl))}" x2="{_fmt(sx(j))}" '
            f'y2="{_fmt(sy(chi_))}" stroke="#333333" stroke-width="1"/>'
        )
        body.append(
            f'<circle cx="{_fmt(sx(j))}" cy="{_fmt(sy(e))}" r="3" '
            f'fill="#1d3557"/>'
        )
        body.append(
            f'<text x="{_fmt(sx(j))}" y="{height - 25}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11">{int(j)}</text>'
        )
    fit = diagram.fit
    body.append(
        f'<text x="{margin_l}" y="18" font-family="sans-serif" font-size="12">'
        f"H = {fit.H:.3f} (se {fit.std_err:.3f}), slope = {fit.slope:.3f}, "
        f"octaves {j1}-{j2}</text>"
    )
    body.append(
        f'<text x="{margin_l + plot_w / 2:.0f}" y="{height - 8}" '
        f'text-anchor="middle" font-family="sans-serif" font-size="11">'
        f"octave</text>"
    )
    body.append(
        f'<text x="18" y="{margin_t + plot_h / 2:.0f}" '
        f'font-family="sans-serif" font-size="11" text-anchor="middle" '
        f'transform="rotate(-90 18 {margin_t + plot_h / 2:.0f})">'
        f"log2 energy</text>"
    )
    return _document(width, height, body)


def matrix_heatmap_svg(
    matrix: np.ndarray,
    names: list[str],
    order: np.ndarray | None = None,
    diverging: bool = True,
    cell: int = 42,
    title: str = "",
) -> str:
    """Square matrix heatmap, optionally permuted to a clustered order."""
    matrix = np.asarray(matrix, dtype=float)
    p = matrix.shape[0]
    if order is not None:
        matrix = matrix[np.ix_(order, order)]
        names = [names[i] for i in order]
    margin, top = 90, 40 if title else 20
    width = margin + p * cell + 20
    height = top + p * cell + margin
    body = []
    if title:
        body.append(
            f'<text x="{width // 2}" y="22" text-anchor="middle" '
            f'font-family="sans-serif" font-size="13">{title}</text>'
        )
    for i in range(p):
        for l in range(p):
            v = matrix[i, l]
            color = _div_color(v) if diverging else _seq_color(v)
            body.append(
                f'<rect x="{margin + l * cell}" y="{top + i * cell}" '
                f'width="{cell}" height="{cell}" fill="{color}" '
                f'stroke="#ffffff" stroke-width="1"/>'
            )
            body.append(
                f'<text x="{margin + l * cell + cell // 2}" '
                f'y="{top + i * cell + cell // 2 + 4}" text-anchor="middle" '
                f'font-family="sans-serif" font-size="10">{v:.2f}</text>'
            )
    for i, name in enumerate(names):
        body.append(
            f'<text x="{margin - 6}" y="{top + i * cell + cell // 2 + 4}" '
            f'text-anchor="end" font-family="sans-serif" font-size="11">'
            f"{name}</text>"
        )
        body.append(
            f'<text x="{margin + i * cell + cell // 2}" '
            f'y="{top + p * cell + 14}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11" '
            f'transform="rotate(45 {margin + i * cell + cell // 2} '
            f'{top + p * cell + 14})">{name}</text>'
        )
    return _document(width, height, body)

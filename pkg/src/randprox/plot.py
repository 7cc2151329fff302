"""Static SVG chart of squared error (log scale) against primal updates."""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

from .harness import read_trace_csv

WIDTH, HEIGHT = 640, 420
MARGIN = dict(left=70, right=150, top=20, bottom=50)
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")
FLOOR = 1e-300


def render_svg(*csv_texts: str) -> str:
    """Render one polyline per (algorithm, seed) found in the given traces."""
    series: dict[tuple, list] = {}
    for text in csv_texts:
        for r in read_trace_csv(text):
            series.setdefault((r.algorithm, r.seed), []).append(
                (r.primal_updates, max(r.squared_error, FLOOR))
            )
    pts = [p for s in series.values() for p in s]
    if not pts:
        raise ValueError("no trace rows to plot")

    x_max = max(max(p[0] for p in pts), 1)
    lo = math.floor(math.log10(min(p[1] for p in pts)))
    hi = math.ceil(math.log10(max(p[1] for p in pts)))
    if hi == lo:
        hi = lo + 1
    pw = WIDTH - MARGIN["left"] - MARGIN["right"]
    ph = HEIGHT - MARGIN["top"] - MARGIN["bottom"]

    def sx(x):
        return MARGIN["left"] + pw * x / x_max

    def sy(y):
        return MARGIN["top"] + ph * (hi - math.log10(y)) / (hi - lo)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<rect x="{MARGIN["left"]}" y="{MARGIN["top"]}" width="{pw}" height="{ph}" '
        'fill="none" stroke="black"/>',
    ]
    step = max(1, math.ceil((hi - lo) / 10))
    for e in range(lo, hi + 1, step):
        y = sy(10.0**e)
        out.append(
            f'<line x1="{MARGIN["left"]}" x2="{MARGIN["left"] + pw}" y1="{y:.2f}" y2="{y:.2f}" '
            'stroke="#ddd"/>'
        )
        out.append(
            f'<text x="{MARGIN["left"] - 6}" y="{y + 4:.2f}" text-anchor="end">1e{e}</text>'
        )
    for i in range(6):
        xv = x_max * i / 5
        x = sx(xv)
        out.append(
            f'<text x="{x:.2f}" y="{MARGIN["top"] + ph + 16}" text-anchor="middle">{xv:g}</text>'
        )
    out.append(
        f'<text x="{MARGIN["left"] + pw / 2}" y="{HEIGHT - 10}" text-anchor="middle">'
        "primal updates</text>"
    )
    out.append(
        f'<text transform="translate(16,{MARGIN["top"] + ph / 2}) rotate(-90)" '
        'text-anchor="middle">squared error</text>'
    )
    for i, ((algo, seed), s) in enumerate(sorted(series.items(), key=lambda kv: (kv[0][0], kv[0][1]))):
        color = COLORS[i % len(COLORS)]
        path = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in s)
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{path}"/>')
        ly = MARGIN["top"] + 14 * (i + 1)
        out.append(
            f'<text x="{MARGIN["left"] + pw + 10}" y="{ly}" fill="{color}">'
            f"{escape(algo)} (seed {seed})</text>"
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"

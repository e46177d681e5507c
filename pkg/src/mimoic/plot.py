"""Minimal deterministic SVG rendering of rate regions."""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

from .geometry import RateRegion2D

__all__ = ["regions_svg", "WIDTH", "HEIGHT"]

WIDTH, HEIGHT = 800, 600
_MARGIN = 70
_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _nice_step(span: float) -> float:
    raw = span / 8
    mag = 10 ** math.floor(math.log10(raw))
    for mult in (1, 2, 5, 10):
        if raw <= mult * mag:
            return mult * mag
    return 10 * mag


def regions_svg(regions, title: str = "") -> str:
    """Render ``[(label, RateRegion2D), ...]`` as an 800x600 SVG document.

    Axes are linear, scaled to the largest vertex coordinate, and labelled in
    bits.  Every region becomes one closed ``<polygon>``.
    """
    regions = list(regions)
    xmax = max([v[0] for _, r in regions for v in r.vertices] + [1e-9])
    ymax = max([v[1] for _, r in regions for v in r.vertices] + [1e-9])
    xmax, ymax = xmax * 1.05, ymax * 1.05
    pw, ph = WIDTH - 2 * _MARGIN, HEIGHT - 2 * _MARGIN

    def sx(x):
        return _MARGIN + pw * x / xmax

    def sy(y):
        return HEIGHT - _MARGIN - ph * y / ymax

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
    ]
    x0, y0 = sx(0), sy(0)
    out.append(f'<line x1="{x0:.2f}" y1="{y0:.2f}" x2="{sx(xmax):.2f}" y2="{y0:.2f}" stroke="black"/>')
    out.append(f'<line x1="{x0:.2f}" y1="{y0:.2f}" x2="{x0:.2f}" y2="{sy(ymax):.2f}" stroke="black"/>')
    for axis, top in (("x", xmax), ("y", ymax)):
        step = _nice_step(top)
        k = 0
        while k * step <= top:
            v = k * step
            label = f"{v:g}"
            if axis == "x":
                out.append(f'<line x1="{sx(v):.2f}" y1="{y0:.2f}" x2="{sx(v):.2f}" y2="{y0 + 5:.2f}" stroke="black"/>')
                out.append(f'<text x="{sx(v):.2f}" y="{y0 + 20:.2f}" font-size="12" text-anchor="middle">{label}</text>')
            else:
                out.append(f'<line x1="{x0 - 5:.2f}" y1="{sy(v):.2f}" x2="{x0:.2f}" y2="{sy(v):.2f}" stroke="black"/>')
                out.append(f'<text x="{x0 - 8:.2f}" y="{sy(v) + 4:.2f}" font-size="12" text-anchor="end">{label}</text>')
            k += 1
    out.append(f'<text x="{WIDTH / 2:.2f}" y="{HEIGHT - 20}" font-size="14" text-anchor="middle">R1 (bits)</text>')
    out.append(
        f'<text x="20" y="{HEIGHT / 2:.2f}" font-size="14" text-anchor="middle" '
        f'transform="rotate(-90 20 {HEIGHT / 2:.2f})">R2 (bits)</text>'
    )
    if title:
        out.append(f'<text x="{WIDTH / 2:.2f}" y="30" font-size="16" text-anchor="middle">{escape(title)}</text>')
    for k, (label, r) in enumerate(regions):
        color = _COLORS[k % len(_COLORS)]
        pts = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in r.vertices)
        out.append(
            f'<polygon data-region="{escape(label)}" points="{pts}" fill="{color}" '
            f'fill-opacity="0.15" stroke="{color}" stroke-width="2"/>'
        )
        out.append(
            f'<text x="{WIDTH - _MARGIN:.2f}" y="{60 + 18 * k}" font-size="12" '
            f'text-anchor="end" fill="{color}">{escape(label)}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"

"""Minimal deterministic SVG line plots (no plotting dependency).

Output is a plain text SVG built from formatted strings, so identical
inputs produce byte-identical files.
"""

from __future__ import annotations

from typing import Sequence, TextIO

WIDTH = 640
HEIGHT = 420
MARGIN_LEFT = 70
MARGIN_RIGHT = 20
MARGIN_TOP = 40
MARGIN_BOTTOM = 50

_COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]


def _ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    return [lo + (hi - lo) * k / (n - 1) for k in range(n)]


def line_plot(
    stream: TextIO,
    series: Sequence[tuple[Sequence[float], Sequence[float], str]],
    xlabel: str,
    ylabel: str,
    title: str,
) -> None:
    """Write an SVG line plot of (x, y, label) series to the stream."""
    xs_all = [float(x) for s in series for x in s[0]]
    ys_all = [float(y) for s in series for y in s[1]]
    if not xs_all:
        xs_all, ys_all = [0.0, 1.0], [0.0, 1.0]
    x_lo, x_hi = min(xs_all), max(xs_all)
    y_lo, y_hi = min(ys_all), max(ys_all)
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0
    pad = 0.05 * (y_hi - y_lo)
    y_lo -= pad
    y_hi += pad

    plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM

    def px(x: float) -> float:
        return MARGIN_LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w

    def py(y: float) -> float:
        return MARGIN_TOP + (y_hi - y) / (y_hi - y_lo) * plot_h

    w = stream.write
    w(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" '
        f'height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">\n'
    )
    w(f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>\n')
    w(
        f'<text x="{WIDTH / 2:.1f}" y="24" text-anchor="middle" '
        f'font-family="sans-serif" font-size="15">{title}</text>\n'
    )
    # Axes box
    w(
        f'<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{plot_w}" '
        f'height="{plot_h}" fill="none" stroke="black"/>\n'
    )
    for tx in _ticks(x_lo, x_hi):
        x = px(tx)
        w(
            f'<line x1="{x:.2f}" y1="{MARGIN_TOP + plot_h}" x2="{x:.2f}" '
            f'y2="{MARGIN_TOP + plot_h + 5}" stroke="black"/>\n'
        )
        w(
            f'<text x="{x:.2f}" y="{MARGIN_TOP + plot_h + 20}" '
            f'text-anchor="middle" font-family="sans-serif" '
            f'font-size="11">{tx:.4g}</text>\n'
        )
    for ty in _ticks(y_lo, y_hi):
        y = py(ty)
        w(
            f'<line x1="{MARGIN_LEFT - 5}" y1="{y:.2f}" x2="{MARGIN_LEFT}" '
            f'y2="{y:.2f}" stroke="black"/>\n'
        )
        w(
            f'<text x="{MARGIN_LEFT - 8}" y="{y + 4:.2f}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11">{ty:.4g}</text>\n'
        )
    w(
        f'<text x="{MARGIN_LEFT + plot_w / 2:.1f}" y="{HEIGHT - 10}" '
        f'text-anchor="middle" font-family="sans-serif" '
        f'font-size="13">{xlabel}</text>\n'
    )
    w(
        f'<text x="16" y="{MARGIN_TOP + plot_h / 2:.1f}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13" '
        f'transform="rotate(-90 16 {MARGIN_TOP + plot_h / 2:.1f})">{ylabel}</text>\n'
    )

    for k, (xs, ys, label) in enumerate(series):
        color = _COLORS[k % len(_COLORS)]
        points = " ".join(
            f"{px(float(x)):.2f},{py(float(y)):.2f}" for x, y in zip(xs, ys)
        )
        w(
            f'<polyline points="{points}" fill="none" stroke="{color}" '
            f'stroke-width="1.5"/>\n'
        )
        if label:
            ly = MARGIN_TOP + 16 + 16 * k
            w(
                f'<line x1="{WIDTH - 150}" y1="{ly - 4}" x2="{WIDTH - 125}" '
                f'y2="{ly - 4}" stroke="{color}" stroke-width="1.5"/>\n'
            )
            w(
                f'<text x="{WIDTH - 120}" y="{ly}" font-family="sans-serif" '
                f'font-size="11">{label}</text>\n'
            )
    w("</svg>\n")

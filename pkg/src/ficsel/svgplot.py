"""Minimal standalone SVG scatter plot for FIC output.

Hand-rolled so that identical inputs produce byte-identical files.
Data coordinates map to pixels through the affine transform published
in the root element's data- attributes:

    px = data-plot-x + (x - data-xmin) * data-xscale
    py = data-plot-y + data-plot-h - (y - data-ymin) * data-yscale
"""

from __future__ import annotations

import numpy as np

WIDTH, HEIGHT = 640.0, 480.0
PLOT_X, PLOT_Y = 70.0, 40.0
PLOT_W, PLOT_H = 540.0, 390.0


def _fmt(v: float, nd: int = 3) -> str:
    s = f"{v:.{nd}f}"
    if float(s) == 0.0:
        s = f"{0.0:.{nd}f}"
    return s


def _ticks(lo: float, hi: float, count: int = 5) -> np.ndarray:
    return np.linspace(lo, hi, count)


def render_fic_plot(
    xs,
    ys,
    selected_index: int,
    wide_index: int,
    xlabel: str = "root FIC",
    ylabel: str = "focus estimate",
    title: str = "",
) -> str:
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    xmin, xmax = float(xs.min()), float(xs.max())
    ymin, ymax = float(ys.min()), float(ys.max())
    xpad = 0.05 * (xmax - xmin) or 1.0
    ypad = 0.05 * (ymax - ymin) or 1.0
    xmin, xmax = xmin - xpad, xmax + xpad
    ymin, ymax = ymin - ypad, ymax + ypad
    xscale = PLOT_W / (xmax - xmin)
    yscale = PLOT_H / (ymax - ymin)

    def px(x):
        return PLOT_X + (x - xmin) * xscale

    def py(y):
        return PLOT_Y + PLOT_H - (y - ymin) * yscale

    out = []
    out.append(
        '<svg xmlns="http://www.w3.org/2000/svg" '
        f'width="{int(WIDTH)}" height="{int(HEIGHT)}" '
        f'viewBox="0 0 {int(WIDTH)} {int(HEIGHT)}" '
        f'data-xmin="{_fmt(xmin, 9)}" data-xscale="{_fmt(xscale, 9)}" '
        f'data-ymin="{_fmt(ymin, 9)}" data-yscale="{_fmt(yscale, 9)}" '
        f'data-plot-x="{_fmt(PLOT_X, 1)}" data-plot-y="{_fmt(PLOT_Y, 1)}" '
        f'data-plot-w="{_fmt(PLOT_W, 1)}" data-plot-h="{_fmt(PLOT_H, 1)}">'
    )
    out.append(f'<rect width="{int(WIDTH)}" height="{int(HEIGHT)}" fill="white"/>')
    out.append(
        f'<rect x="{_fmt(PLOT_X,1)}" y="{_fmt(PLOT_Y,1)}" width="{_fmt(PLOT_W,1)}" '
        f'height="{_fmt(PLOT_H,1)}" fill="none" stroke="black" stroke-width="1"/>'
    )
    if title:
        out.append(
            f'<text x="{_fmt(WIDTH / 2, 1)}" y="24" text-anchor="middle" '
            f'font-family="sans-serif" font-size="14">{title}</text>'
        )
    for tx in _ticks(xmin + xpad, xmax - xpad):
        out.append(
            f'<line x1="{_fmt(px(tx))}" y1="{_fmt(PLOT_Y + PLOT_H, 1)}" '
            f'x2="{_fmt(px(tx))}" y2="{_fmt(PLOT_Y + PLOT_H + 5, 1)}" stroke="black"/>'
        )
        out.append(
            f'<text x="{_fmt(px(tx))}" y="{_fmt(PLOT_Y + PLOT_H + 18, 1)}" '
            f'text-anchor="middle" font-family="sans-serif" font-size="11">{tx:.3g}</text>'
        )
    for ty in _ticks(ymin + ypad, ymax - ypad):
        out.append(
            f'<line x1="{_fmt(PLOT_X - 5, 1)}" y1="{_fmt(py(ty))}" '
            f'x2="{_fmt(PLOT_X, 1)}" y2="{_fmt(py(ty))}" stroke="black"/>'
        )
        out.append(
            f'<text x="{_fmt(PLOT_X - 8, 1)}" y="{_fmt(py(ty) + 4)}" '
            f'text-anchor="end" font-family="sans-serif" font-size="11">{ty:.3g}</text>'
        )
    out.append(
        f'<text x="{_fmt(PLOT_X + PLOT_W / 2, 1)}" y="{_fmt(HEIGHT - 8, 1)}" '
        f'text-anchor="middle" font-family="sans-serif" font-size="12">{xlabel}</text>'
    )
    out.append(
        f'<text x="16" y="{_fmt(PLOT_Y + PLOT_H / 2, 1)}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="12" '
        f'transform="rotate(-90 16 {_fmt(PLOT_Y + PLOT_H / 2, 1)})">{ylabel}</text>'
    )

    # reference lines through the flagged points
    out.append(
        f'<line x1="{_fmt(PLOT_X,1)}" y1="{_fmt(py(ys[wide_index]))}" '
        f'x2="{_fmt(PLOT_X + PLOT_W,1)}" y2="{_fmt(py(ys[wide_index]))}" '
        'stroke="blue" stroke-dasharray="4 3" stroke-width="1"/>'
    )
    out.append(
        f'<line x1="{_fmt(PLOT_X,1)}" y1="{_fmt(py(ys[selected_index]))}" '
        f'x2="{_fmt(PLOT_X + PLOT_W,1)}" y2="{_fmt(py(ys[selected_index]))}" '
        'stroke="red" stroke-dasharray="4 3" stroke-width="1"/>'
    )
    for i in range(xs.shape[0]):
        if i in (selected_index, wide_index):
            continue
        out.append(
            f'<circle class="candidate" cx="{_fmt(px(xs[i]))}" cy="{_fmt(py(ys[i]))}" '
            'r="3" fill="none" stroke="black" stroke-width="1"/>'
        )
    wx, wy = px(xs[wide_index]), py(ys[wide_index])
    out.append(
        f'<polygon class="wide" points="{_fmt(wx)},{_fmt(wy - 5)} '
        f'{_fmt(wx - 5)},{_fmt(wy + 4)} {_fmt(wx + 5)},{_fmt(wy + 4)}" fill="blue"/>'
    )
    out.append(
        f'<circle class="selected" cx="{_fmt(px(xs[selected_index]))}" '
        f'cy="{_fmt(py(ys[selected_index]))}" r="4" fill="red"/>'
    )
    out.append("</svg>")
    return "\n".join(out) + "\n"

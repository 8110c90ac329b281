"""Dependency-free SVG figures: line/scatter panels, histograms and heatmaps."""

from __future__ import annotations

from html import escape
from pathlib import Path

import numpy as np

__all__ = ["Panel", "figure", "line_panel", "histogram_panel", "heatmap_panel", "save_svg"]

PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"]


class Panel:
    """One plotting area; ``draw(x0, y0, w, h)`` returns SVG elements."""

    def __init__(self, title="", xlim=None, ylim=None):
        self.title = title
        self.xlim = xlim
        self.ylim = ylim
        self.items = []

    def line(self, x, y, label=None, color=None, width=1.2):
        self.items.append(("line", np.asarray(x, float), np.asarray(y, float), label, color, width))
        return self

    def scatter(self, x, y, label=None, color=None, size=2.0):
        self.items.append(("dots", np.asarray(x, float), np.asarray(y, float), label, color, size))
        return self

    def _limits(self):
        xs = np.concatenate([it[1] for it in self.items]) if self.items else np.zeros(1)
        ys = np.concatenate([it[2] for it in self.items]) if self.items else np.zeros(1)
        xlim = self.xlim or (float(np.nanmin(xs)), float(np.nanmax(xs)))
        ylim = self.ylim or (float(np.nanmin(ys)), float(np.nanmax(ys)))
        if xlim[1] <= xlim[0]:
            xlim = (xlim[0] - 1, xlim[0] + 1)
        if ylim[1] <= ylim[0]:
            ylim = (ylim[0] - 1, ylim[0] + 1)
        if self.ylim:
            return xlim, ylim
        pad = 0.05 * (ylim[1] - ylim[0])
        return xlim, (ylim[0] - pad, ylim[1] + pad)

    def draw(self, x0, y0, w, h):
        (xa, xb), (ya, yb) = self._limits()

        def X(x):
            return x0 + (x - xa) / (xb - xa) * w

        def Y(y):
            return y0 + h - (y - ya) / (yb - ya) * h

        out = [f'<rect x="{x0:.1f}" y="{y0:.1f}" width="{w:.1f}" height="{h:.1f}" '
               'fill="white" stroke="#444" stroke-width="0.8"/>']
        if self.title:
            out.append(f'<text x="{x0 + w / 2:.1f}" y="{y0 - 6:.1f}" font-size="11" '
                       f'text-anchor="middle">{escape(self.title)}</text>')
        for v, anchor in ((xa, "start"), (xb, "end")):
            out.append(f'<text x="{X(v):.1f}" y="{y0 + h + 12:.1f}" font-size="9" '
                       f'text-anchor="{anchor}">{v:.3g}</text>')
        for v in (ya, yb):
            out.append(f'<text x="{x0 - 3:.1f}" y="{Y(v) + 3:.1f}" font-size="9" '
                       f'text-anchor="end">{v:.3g}</text>')
        cid = f"clip{int(x0)}_{int(y0)}"
        out.append(f'<clipPath id="{cid}"><rect x="{x0:.1f}" y="{y0:.1f}" width="{w:.1f}" '
                   f'height="{h:.1f}"/></clipPath><g clip-path="url(#{cid})">')
        legend = []
        for i, (kind, x, y, label, color, size) in enumerate(self.items):
            color = color or PALETTE[i % len(PALETTE)]
            ok = np.isfinite(x) & np.isfinite(y)
            if kind == "line":
                pts = " ".join(f"{X(a):.2f},{Y(b):.2f}" for a, b in zip(x[ok], y[ok]))
                out.append(f'<polyline points="{pts}" fill="none" stroke="{color}" '
                           f'stroke-width="{size}"/>')
            else:
                out.extend(f'<circle cx="{X(a):.2f}" cy="{Y(b):.2f}" r="{size}" fill="{color}"/>'
                           for a, b in zip(x[ok], y[ok]))
            if label:
                legend.append((label, color))
        out.append("</g>")
        for j, (label, color) in enumerate(legend):
            ly = y0 + 12 + 11 * j
            out.append(f'<rect x="{x0 + 6:.1f}" y="{ly - 7:.1f}" width="8" height="3" fill="{color}"/>')
            out.append(f'<text x="{x0 + 18:.1f}" y="{ly - 3:.1f}" font-size="9">{escape(label)}</text>')
        return out


class _Heatmap(Panel):
    def __init__(self, Z, extent, title=""):
        super().__init__(title)
        self.Z = np.asarray(Z, float)
        self.extent = extent
        self.dots = None

    def draw(self, x0, y0, w, h):
        Z = self.Z
        lo, hi = float(np.nanmin(Z)), float(np.nanmax(Z))
        span = hi - lo if hi > lo else 1.0
        ny, nx = Z.shape
        cw, ch = w / nx, h / ny
        out = ['<g shape-rendering="crispEdges">']
        for i in range(ny):
            for j in range(nx):
                s = (Z[i, j] - lo) / span
                r, g, b = int(255 * s), int(255 * (1 - abs(2 * s - 1))), int(255 * (1 - s))
                # row 0 is the bottom edge
                out.append(f'<rect x="{x0 + j * cw:.2f}" y="{y0 + h - (i + 1) * ch:.2f}" '
                           f'width="{cw + 0.05:.2f}" height="{ch + 0.05:.2f}" '
                           f'fill="rgb({r},{g},{b})"/>')
        out.append("</g>")
        if self.dots is not None:
            ua, ub, va, vb = self.extent
            for u, v in self.dots:
                out.append(f'<circle cx="{x0 + (u - ua) / (ub - ua) * w:.2f}" '
                           f'cy="{y0 + h - (v - va) / (vb - va) * h:.2f}" r="1" fill="black"/>')
        out.append(f'<rect x="{x0:.1f}" y="{y0:.1f}" width="{w:.1f}" height="{h:.1f}" '
                   'fill="none" stroke="#444" stroke-width="0.8"/>')
        if self.title:
            out.append(f'<text x="{x0 + w / 2:.1f}" y="{y0 - 6:.1f}" font-size="11" '
                       f'text-anchor="middle">{escape(self.title)}</text>')
        out.append(f'<text x="{x0 + w:.1f}" y="{y0 + h + 12:.1f}" font-size="9" '
                   f'text-anchor="end">range [{lo:.3g}, {hi:.3g}]</text>')
        return out


def line_panel(title, series, scatter=None, xlim=None, ylim=None):
    """``series`` is a list of ``(x, y, label)``; ``scatter`` an optional ``(x, y, label)``."""
    p = Panel(title, xlim, ylim)
    for x, y, label in series:
        p.line(x, y, label)
    if scatter is not None:
        x, y, label = scatter
        p.scatter(x, y, label, color="black")
    return p


def histogram_panel(title, values, bins=40, range_=None):
    counts, edges = np.histogram(np.asarray(values, float), bins=bins, range=range_)
    x = np.repeat(edges, 2)[1:-1]
    y = np.repeat(counts, 2).astype(float)
    x = np.concatenate([[edges[0]], x, [edges[-1]]])
    y = np.concatenate([[0.0], y, [0.0]])
    return Panel(title, ylim=(0.0, float(counts.max()) or 1.0)).line(x, y)


def heatmap_panel(title, Z, extent, dots=None):
    """Color image of ``Z[i, j]`` over ``extent = (u0, u1, v0, v1)``; rows run along ``v``."""
    p = _Heatmap(Z, extent, title)
    p.dots = None if dots is None else np.asarray(dots, float)
    return p


def figure(panels, ncols=2, panel_size=(300, 180), margin=45):
    pw, ph = panel_size
    nrows = -(-len(panels) // ncols)
    W = ncols * (pw + margin) + margin
    H = nrows * (ph + margin) + margin
    body = []
    for i, p in enumerate(panels):
        r, c = divmod(i, ncols)
        body.extend(p.draw(margin + c * (pw + margin), margin + r * (ph + margin), pw, ph))
    return (f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" '
            f'viewBox="0 0 {W} {H}" font-family="sans-serif">\n'
            + "\n".join(body) + "\n</svg>\n")


def save_svg(path, panels, **kw):
    Path(path).write_text(figure(panels, **kw))

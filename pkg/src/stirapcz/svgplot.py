"""Minimal self-contained SVG 1.1 line plotter.

Just enough for the figure-reproduction outputs: polyline series on
linear or log axes, ticks, labels and a legend.  No external assets, no
plotting dependency, byte-stable for fixed inputs.
"""

import math
from dataclasses import dataclass, field

COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
          "#8c564b", "#17becf", "#7f7f7f")

WIDTH, HEIGHT = 640, 440
MARGIN = {"left": 78, "right": 24, "top": 40, "bottom": 58}


@dataclass
class Series:
    x: list
    y: list
    label: str = ""
    dashed: bool = False


@dataclass
class Figure:
    title: str = ""
    xlabel: str = ""
    ylabel: str = ""
    xlog: bool = False
    ylog: bool = False
    series: list = field(default_factory=list)

    def add(self, x, y, label="", dashed=False):
        x = [float(v) for v in x]
        y = [float(v) for v in y]
        if len(x) != len(y):
            raise ValueError("x and y lengths differ")
        self.series.append(Series(x, y, label, dashed))

    def save(self, path):
        with open(path, "w") as f:
            f.write(render(self))


def _finite_points(s, xlog, ylog):
    pts = []
    for x, y in zip(s.x, s.y):
        if not (math.isfinite(x) and math.isfinite(y)):
            continue
        if (xlog and x <= 0) or (ylog and y <= 0):
            continue
        pts.append((x, y))
    return pts


def _limits(vals, log):
    lo, hi = min(vals), max(vals)
    if log:
        lo, hi = math.log10(lo), math.log10(hi)
    if hi - lo < 1e-12:
        lo, hi = lo - 0.5, hi + 0.5
    pad = 0.05 * (hi - lo)
    return lo - pad, hi + pad


def _ticks(lo, hi, log):
    if log:
        start, stop = math.ceil(lo), math.floor(hi)
        if stop >= start:
            return [(e, "1e%d" % e) for e in range(start, stop + 1)]
        return [(lo, "1e%.1f" % lo), (hi, "1e%.1f" % hi)]
    span = hi - lo
    step = 10.0 ** math.floor(math.log10(span / 4.0))
    for m in (1.0, 2.0, 5.0, 10.0):
        if span / (step * m) <= 6:
            step *= m
            break
    first = math.ceil(lo / step) * step
    out = []
    v = first
    while v <= hi + 1e-9 * span:
        out.append((v, "%g" % round(v, 10)))
        v += step
    return out


def render(fig):
    """Render a Figure to an SVG 1.1 string."""
    pts_per_series = [_finite_points(s, fig.xlog, fig.ylog)
                      for s in fig.series]
    allpts = [p for pts in pts_per_series for p in pts]
    if not allpts:
        raise ValueError("nothing plottable")
    xlo, xhi = _limits([p[0] for p in allpts], fig.xlog)
    ylo, yhi = _limits([p[1] for p in allpts], fig.ylog)
    px0, px1 = MARGIN["left"], WIDTH - MARGIN["right"]
    py0, py1 = HEIGHT - MARGIN["bottom"], MARGIN["top"]

    def sx(x):
        v = math.log10(x) if fig.xlog else x
        return px0 + (v - xlo) / (xhi - xlo) * (px1 - px0)

    def sy(y):
        v = math.log10(y) if fig.ylog else y
        return py0 + (v - ylo) / (yhi - ylo) * (py1 - py0)

    out = ['<?xml version="1.0" encoding="UTF-8"?>',
           '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
           'width="%d" height="%d" viewBox="0 0 %d %d">'
           % (WIDTH, HEIGHT, WIDTH, HEIGHT),
           '<rect width="%d" height="%d" fill="white"/>' % (WIDTH, HEIGHT),
           '<rect x="%d" y="%d" width="%d" height="%d" fill="none" '
           'stroke="black"/>' % (px0, py1, px1 - px0, py0 - py1)]

    for v, lab in _ticks(xlo, xhi, fig.xlog):
        x = px0 + (v - xlo) / (xhi - xlo) * (px1 - px0)
        out.append('<line x1="%.1f" y1="%d" x2="%.1f" y2="%d" '
                   'stroke="black"/>' % (x, py0, x, py0 + 5))
        out.append('<text x="%.1f" y="%d" font-size="12" '
                   'text-anchor="middle" font-family="sans-serif">%s</text>'
                   % (x, py0 + 20, lab))
    for v, lab in _ticks(ylo, yhi, fig.ylog):
        y = py0 + (v - ylo) / (yhi - ylo) * (py1 - py0)
        out.append('<line x1="%d" y1="%.1f" x2="%d" y2="%.1f" '
                   'stroke="black"/>' % (px0 - 5, y, px0, y))
        out.append('<text x="%d" y="%.1f" font-size="12" text-anchor="end" '
                   'font-family="sans-serif">%s</text>'
                   % (px0 - 8, y + 4, lab))

    for k, (s, pts) in enumerate(zip(fig.series, pts_per_series)):
        if not pts:
            continue
        color = COLORS[k % len(COLORS)]
        coords = " ".join("%.2f,%.2f" % (sx(x), sy(y)) for x, y in pts)
        dash = ' stroke-dasharray="6,4"' if s.dashed else ""
        out.append('<polyline points="%s" fill="none" stroke="%s" '
                   'stroke-width="1.8"%s/>' % (coords, color, dash))

    if fig.title:
        out.append('<text x="%d" y="24" font-size="15" text-anchor="middle" '
                   'font-family="sans-serif">%s</text>'
                   % ((px0 + px1) // 2, fig.title))
    if fig.xlabel:
        out.append('<text x="%d" y="%d" font-size="13" text-anchor="middle" '
                   'font-family="sans-serif">%s</text>'
                   % ((px0 + px1) // 2, HEIGHT - 16, fig.xlabel))
    if fig.ylabel:
        out.append('<text x="18" y="%d" font-size="13" text-anchor="middle" '
                   'font-family="sans-serif" transform="rotate(-90 18 %d)">'
                   '%s</text>' % ((py0 + py1) // 2, (py0 + py1) // 2,
                                  fig.ylabel))

    labeled = [(k, s) for k, s in enumerate(fig.series) if s.label]
    for row, (k, s) in enumerate(labeled):
        y = py1 + 14 + 16 * row
        out.append('<line x1="%d" y1="%d" x2="%d" y2="%d" stroke="%s" '
                   'stroke-width="1.8"%s/>'
                   % (px1 - 120, y, px1 - 92, y, COLORS[k % len(COLORS)],
                      ' stroke-dasharray="6,4"' if s.dashed else ""))
        out.append('<text x="%d" y="%d" font-size="12" '
                   'font-family="sans-serif">%s</text>'
                   % (px1 - 86, y + 4, s.label))
    out.append("</svg>")
    return "\n".join(out) + "\n"

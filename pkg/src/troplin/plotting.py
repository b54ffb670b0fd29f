"""Figure rendering for tropical plane configurations.

Lines are drawn as their vertex plus three rays clipped exactly against the
bounding box; all geometry stays rational until the final conversion to
float for matplotlib.  The default bounding box fits every vertex and point
with a 20% margin.  Output format follows the file extension (SVG by
default); SVG output is kept byte-stable by fixing the hash salt and
dropping the timestamp.
"""

from __future__ import annotations

from fractions import Fraction

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .maxplus import TropPoint
from .plane import RAY_DIRECTIONS, TropLine

__all__ = ["auto_bbox", "clip_ray", "render_figure"]

_MARGIN = Fraction(1, 5)


def auto_bbox(anchors, margin: Fraction = _MARGIN):
    """Axis-aligned box around affine anchor points with a relative margin."""
    anchors = list(anchors)
    if not anchors:
        anchors = [(Fraction(0), Fraction(0))]
    xs = [p[0] for p in anchors]
    ys = [p[1] for p in anchors]
    xmin, xmax = min(xs), max(xs)
    ymin, ymax = min(ys), max(ys)
    pad_x = (xmax - xmin) * margin or Fraction(1)
    pad_y = (ymax - ymin) * margin or Fraction(1)
    return (xmin - pad_x, ymin - pad_y, xmax + pad_x, ymax + pad_y)


def clip_ray(base, direction, bbox):
    """Visible part of a ray inside a box, as exact endpoints or None.

    Standard slab clipping on the ray parameter; every tropical ray
    direction has a nonzero component, so the visible interval is bounded.
    """
    xmin, ymin, xmax, ymax = bbox
    t_low = Fraction(0)
    t_high = None
    for b, d, lo, hi in (
        (base[0], direction[0], xmin, xmax),
        (base[1], direction[1], ymin, ymax),
    ):
        if d == 0:
            if not lo <= b <= hi:
                return None
            continue
        t0 = (lo - b) / d
        t1 = (hi - b) / d
        if t0 > t1:
            t0, t1 = t1, t0
        if t0 > t_low:
            t_low = t0
        if t_high is None or t1 < t_high:
            t_high = t1
    if t_high is None or t_low > t_high:
        return None
    p0 = (base[0] + t_low * direction[0], base[1] + t_low * direction[1])
    p1 = (base[0] + t_high * direction[0], base[1] + t_high * direction[1])
    return p0, p1


def render_figure(points, lines, out_path, *, bbox=None, title=None):
    """Render labelled points and lines to ``out_path``.

    ``points`` maps labels to `TropPoint`, ``lines`` maps labels to
    `TropLine`.  ``bbox`` is (xmin, ymin, xmax, ymax) or None for the
    automatic fit around all vertices and points.
    """
    point_pairs = {
        label: (p if isinstance(p, TropPoint) else TropPoint(p)).affine()
        for label, p in points.items()
    }
    line_objs = {
        label: (l if isinstance(l, TropLine) else TropLine(l))
        for label, l in lines.items()
    }
    if bbox is None:
        anchors = list(point_pairs.values())
        anchors.extend(l.vertex for l in line_objs.values())
        bbox = auto_bbox(anchors)
    else:
        bbox = tuple(Fraction(b) if isinstance(b, int) else b for b in bbox)
    plt.rcParams["svg.hashsalt"] = "troplin"
    fig, ax = plt.subplots(figsize=(6.4, 6.4))
    for label, line in sorted(line_objs.items()):
        vertex = line.vertex
        for direction in RAY_DIRECTIONS:
            clipped = clip_ray(vertex, direction, bbox)
            if clipped is None:
                continue
            (x0, y0), (x1, y1) = clipped
            ax.plot(
                [float(x0), float(x1)],
                [float(y0), float(y1)],
                color="tab:blue",
                linewidth=1.2,
                zorder=1,
            )
        vx, vy = float(vertex[0]), float(vertex[1])
        if bbox[0] <= vertex[0] <= bbox[2] and bbox[1] <= vertex[1] <= bbox[3]:
            ax.annotate(
                label, (vx, vy), textcoords="offset points", xytext=(4, 4),
                fontsize=8, color="tab:blue",
            )
    for label, (x, y) in sorted(point_pairs.items()):
        ax.plot([float(x)], [float(y)], marker="o", color="tab:red",
                markersize=5, zorder=2)
        ax.annotate(
            label, (float(x), float(y)), textcoords="offset points",
            xytext=(5, -9), fontsize=8, color="tab:red",
        )
    ax.set_xlim(float(bbox[0]), float(bbox[2]))
    ax.set_ylim(float(bbox[1]), float(bbox[3]))
    ax.set_aspect("equal")
    ax.grid(True, linewidth=0.3, alpha=0.5)
    if title:
        ax.set_title(title)
    save_kwargs = {}
    if str(out_path).endswith(".svg"):
        save_kwargs["metadata"] = {"Date": None}
    fig.savefig(out_path, **save_kwargs)
    plt.close(fig)

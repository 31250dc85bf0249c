"""Deterministic SVG rendering of a biplot layout.

Plain string assembly, no plotting backend. Canonical units map to pixels
with a single scale factor (aspect ratio 1), the y axis is flipped to
screen orientation, and every float is formatted through one helper so two
runs over the same layout produce byte-identical documents.
"""

import math

_PALETTE = (
    "#1b6ca8", "#d1495b", "#2e8b57", "#e6a817", "#6f42c1",
    "#17a2b8", "#b8581b", "#5c5c8a", "#99004d", "#4d7326",
)
_GLYPHS = ("circle", "square", "triangle", "diamond", "plus", "cross")


def _fmt(x):
    if x == 0.0:
        x = 0.0  # normalize -0.0
    return f"{x:.3f}"


def _fmt_value(v):
    return f"{v:.10g}"


def _esc(text):
    return (
        str(text)
        .replace("&", "&amp;")
        .replace("<", "&lt;")
        .replace(">", "&gt;")
        .replace('"', "&quot;")
    )


def _glyph(kind, cx, cy, size, color, stroke="none", stroke_width=0.0):
    extra = "" if stroke == "none" else f' stroke="{stroke}" stroke-width="{_fmt(stroke_width)}"'
    if kind == "circle":
        return f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="{_fmt(size)}" fill="{color}"{extra}/>'
    if kind == "square":
        s = size * 0.9
        return (
            f'<rect x="{_fmt(cx - s)}" y="{_fmt(cy - s)}" width="{_fmt(2 * s)}" '
            f'height="{_fmt(2 * s)}" fill="{color}"{extra}/>'
        )
    if kind == "triangle":
        s = size * 1.2
        pts = f"{_fmt(cx)},{_fmt(cy - s)} {_fmt(cx - s)},{_fmt(cy + s * 0.8)} {_fmt(cx + s)},{_fmt(cy + s * 0.8)}"
        return f'<polygon points="{pts}" fill="{color}"{extra}/>'
    if kind == "diamond":
        s = size * 1.2
        pts = f"{_fmt(cx)},{_fmt(cy - s)} {_fmt(cx + s)},{_fmt(cy)} {_fmt(cx)},{_fmt(cy + s)} {_fmt(cx - s)},{_fmt(cy)}"
        return f'<polygon points="{pts}" fill="{color}"{extra}/>'
    if kind == "plus":
        s = size * 1.2
        w = max(size * 0.45, 0.8)
        return (
            f'<path d="M {_fmt(cx - s)} {_fmt(cy)} L {_fmt(cx + s)} {_fmt(cy)} '
            f'M {_fmt(cx)} {_fmt(cy - s)} L {_fmt(cx)} {_fmt(cy + s)}" '
            f'stroke="{color}" stroke-width="{_fmt(w)}" fill="none"/>'
        )
    s = size  # cross
    w = max(size * 0.45, 0.8)
    return (
        f'<path d="M {_fmt(cx - s)} {_fmt(cy - s)} L {_fmt(cx + s)} {_fmt(cy + s)} '
        f'M {_fmt(cx - s)} {_fmt(cy + s)} L {_fmt(cx + s)} {_fmt(cy - s)}" '
        f'stroke="{color}" stroke-width="{_fmt(w)}" fill="none"/>'
    )


def _clip_line_to_box(direction, xmin, xmax, ymin, ymax):
    # intersect {t * d : t in R} with the box; returns (t_lo, t_hi) or None
    dx, dy = direction
    t_lo, t_hi = -math.inf, math.inf
    for d, lo, hi in ((dx, xmin, xmax), (dy, ymin, ymax)):
        if d == 0.0:
            if not (lo <= 0.0 <= hi):
                return None
            continue
        t0, t1 = lo / d, hi / d
        if t0 > t1:
            t0, t1 = t1, t0
        t_lo = max(t_lo, t0)
        t_hi = min(t_hi, t1)
    if t_lo >= t_hi:
        return None
    return t_lo, t_hi


def render_svg(layout, axis_indices=None, width=760, title="CVA biplot"):
    """Render a layout to SVG 1.1 text.

    ``axis_indices`` restricts which variable axes are drawn (None draws
    every plottable axis). Output is byte-identical across runs for the
    same layout and options.
    """
    pad = 54.0
    plot = width - 2.0 * pad
    xmin, xmax, ymin, ymax = layout.bounds
    side = max(xmax - xmin, ymax - ymin)
    cx_world = (xmin + xmax) / 2.0
    cy_world = (ymin + ymax) / 2.0
    # square world window => aspect ratio exactly 1
    wx0 = cx_world - side / 2.0
    wy1 = cy_world + side / 2.0
    scale = plot / side

    def tx(x):
        return pad + (x - wx0) * scale

    def ty(y):
        return pad + (wy1 - y) * scale

    height = width
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<text x="{_fmt(pad)}" y="{_fmt(pad - 26.0)}" font-family="sans-serif" '
        f'font-size="15" fill="#222">{_esc(title)}</text>',
        f'<rect x="{_fmt(pad)}" y="{_fmt(pad)}" width="{_fmt(plot)}" height="{_fmt(plot)}" '
        'fill="none" stroke="#cccccc" stroke-width="1"/>',
    ]

    bxmin, bxmax = wx0, wx0 + side
    bymin, bymax = wy1 - side, wy1

    # calibrated axes under the points
    axes = layout.axes
    if axis_indices is not None:
        wanted = set(int(i) for i in axis_indices)
        axes = tuple(ax for ax in axes if ax.variable in wanted)
    for ax in axes:
        if not ax.plottable:
            continue
        span = _clip_line_to_box(
            (float(ax.direction[0]), float(ax.direction[1])), bxmin, bxmax, bymin, bymax
        )
        if span is None:
            continue
        t_lo, t_hi = span
        x0, y0 = t_lo * ax.direction[0], t_lo * ax.direction[1]
        x1, y1 = t_hi * ax.direction[0], t_hi * ax.direction[1]
        parts.append(
            f'<line x1="{_fmt(tx(x0))}" y1="{_fmt(ty(y0))}" x2="{_fmt(tx(x1))}" '
            f'y2="{_fmt(ty(y1))}" stroke="#999999" stroke-width="1"/>'
        )
        # ticks perpendicular to the axis, labels next to them
        nx, ny = -float(ax.direction[1]), float(ax.direction[0])
        for mk in ax.markers:
            t = float(mk.position[0]) * float(ax.direction[0]) + float(
                mk.position[1]
            ) * float(ax.direction[1])
            if not (t_lo <= t <= t_hi):
                continue
            mx, my = tx(float(mk.position[0])), ty(float(mk.position[1]))
            tick = 3.0
            parts.append(
                f'<line x1="{_fmt(mx - nx * tick)}" y1="{_fmt(my + ny * tick)}" '
                f'x2="{_fmt(mx + nx * tick)}" y2="{_fmt(my - ny * tick)}" '
                'stroke="#999999" stroke-width="1"/>'
            )
            parts.append(
                f'<text x="{_fmt(mx + nx * 6.0)}" y="{_fmt(my - ny * 6.0 + 3.0)}" '
                'font-family="sans-serif" font-size="8" fill="#777777">'
                f"{_esc(_fmt_value(mk.value))}</text>"
            )
        # axis name at the positive end
        lx, ly = tx(x1) , ty(y1)
        parts.append(
            f'<text x="{_fmt(lx)}" y="{_fmt(ly - 4.0)}" font-family="sans-serif" '
            f'font-size="10" fill="#555555">{_esc(ax.name)}</text>'
        )

    # sample points
    for irow in range(layout.points.shape[0]):
        g = int(layout.point_groups[irow])
        color = _PALETTE[g % len(_PALETTE)]
        kind = _GLYPHS[g % len(_GLYPHS)]
        parts.append(
            _glyph(kind, tx(float(layout.points[irow, 0])), ty(float(layout.points[irow, 1])), 3.2, color)
        )

    # group means: larger outlined glyphs
    for g in range(layout.group_mean_points.shape[0]):
        color = _PALETTE[g % len(_PALETTE)]
        kind = _GLYPHS[g % len(_GLYPHS)]
        parts.append(
            _glyph(
                kind,
                tx(float(layout.group_mean_points[g, 0])),
                ty(float(layout.group_mean_points[g, 1])),
                6.0,
                color,
                stroke="#000000",
                stroke_width=1.2,
            )
        )

    # legend
    lx, ly = pad + 10.0, pad + 16.0
    for g, name in enumerate(layout.group_names):
        color = _PALETTE[g % len(_PALETTE)]
        kind = _GLYPHS[g % len(_GLYPHS)]
        parts.append(_glyph(kind, lx, ly - 3.0, 4.0, color))
        parts.append(
            f'<text x="{_fmt(lx + 10.0)}" y="{_fmt(ly)}" font-family="sans-serif" '
            f'font-size="11" fill="#222">{_esc(name)}</text>'
        )
        ly += 16.0

    share_pct = layout.eigenvalue_share * 100.0
    caption = f"plotted plane carries {share_pct:.1f}% of the eigenvalue sum"
    if layout.degenerate:
        caption += "; second dimension is null (rank-1 separation)"
    parts.append(
        f'<text x="{_fmt(pad)}" y="{_fmt(height - 18.0)}" font-family="sans-serif" '
        f'font-size="10" fill="#555555">{_esc(caption)}</text>'
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"

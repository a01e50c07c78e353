"""Deterministic SVG output: matrix view, Ring Motif view and precision bar.

All numbers are written with six decimals so identical inputs give
byte-identical files.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from xml.sax.saxutils import escape

import numpy as np

from .graph import AdjacencyMatrix
from .layout import Glyph, LayoutState, boundary_map, boundary_point, local_point
from .palette import BLACK, DARK_GRAY, LIGHT_GRAY, LINK_GRAY, RED, WHITE
from .select import Decomposition, PrecisionCounts

SVG_NS = "http://www.w3.org/2000/svg"


@dataclass(frozen=True)
class RenderConfig:
    cell_px: float = 12.0
    scale: float = 24.0  # motif view: pixels per model unit
    show_labels: bool = True
    link_opacity: float = 0.5
    pattern_opacity: float = 0.35
    grid_stroke: float = 0.5
    pattern_stroke: float = 2.0
    glyph_stroke: float = 1.0
    attach_stroke: float = 3.5
    margin: float = 10.0
    bar_width: float = 24.0
    bar_height: float = 200.0

    def __post_init__(self):
        for name in ("cell_px", "scale", "bar_width", "bar_height"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if not 0 < self.link_opacity <= 1 or not 0 < self.pattern_opacity <= 1:
            raise ValueError("opacity must lie in (0, 1]")
        if min(self.grid_stroke, self.pattern_stroke, self.glyph_stroke, self.attach_stroke, self.margin) < 0:
            raise ValueError("stroke widths and margin must be >= 0")


def fmt(x: float) -> str:
    s = f"{float(x):.6f}"
    return "0.000000" if s == "-0.000000" else s


def _pt(p) -> str:
    return f"{fmt(p[0])},{fmt(p[1])}"


def document(width: float, height: float, body: list[str], title: str | None = None) -> str:
    head = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="{SVG_NS}" version="1.1" width="{fmt(width)}" height="{fmt(height)}" '
        f'viewBox="0 0 {fmt(width)} {fmt(height)}">',
    ]
    if title:
        head.append(f"<title>{escape(title)}</title>")
    return "\n".join(head + body + ["</svg>"]) + "\n"


# ---------------------------------------------------------------------------
# matrix view


def matrix_body(M, d: Decomposition | None, cfg: RenderConfig, x0: float = 0.0, y0: float = 0.0) -> tuple[float, float, list[str]]:
    cells = M.cells if isinstance(M, AdjacencyMatrix) else np.asarray(M)
    n = cells.shape[0]
    s = cfg.cell_px
    side = n * s
    out = [f'<g class="matrix" transform="translate({fmt(x0)},{fmt(y0)})">']
    out.append(f'<rect x="0.000000" y="0.000000" width="{fmt(side)}" height="{fmt(side)}" fill="{WHITE}"/>')
    out.append(f'<g class="cells" fill="{BLACK}">')
    for r, c in zip(*np.nonzero(cells)):
        out.append(f'<rect x="{fmt(c * s)}" y="{fmt(r * s)}" width="{fmt(s)}" height="{fmt(s)}"/>')
    out.append("</g>")
    if n and cfg.grid_stroke > 0:
        path = "".join(f"M{fmt(k * s)},0.000000V{fmt(side)}M0.000000,{fmt(k * s)}H{fmt(side)}" for k in range(n + 1))
        out.append(f'<path class="grid" d="{path}" fill="none" stroke="{LIGHT_GRAY}" stroke-width="{fmt(cfg.grid_stroke)}"/>')
    if d is not None:
        out.append('<g class="patterns">')
        for k, (p, color) in enumerate(zip(d.patterns, d.colors)):
            for r0, r1, c0, c1 in p.rects():
                out.append(
                    f'<rect data-pattern="{k}" data-kind="{p.kind.value}" x="{fmt(c0 * s)}" y="{fmt(r0 * s)}" '
                    f'width="{fmt((c1 - c0 + 1) * s)}" height="{fmt((r1 - r0 + 1) * s)}" '
                    f'fill="{color}" fill-opacity="{fmt(cfg.pattern_opacity)}" '
                    f'stroke="{color}" stroke-width="{fmt(cfg.pattern_stroke)}"/>'
                )
        out.append("</g>")
    out.append("</g>")
    return side, side, out


def render_matrix(M, d: Decomposition | None, cfg: RenderConfig = RenderConfig()) -> str:
    """Matrix cells with each pattern (and a biclique's mirror) tinted in its color."""
    w, h, body = matrix_body(M, d, cfg, cfg.margin, cfg.margin)
    return document(w + 2 * cfg.margin, h + 2 * cfg.margin, body, "adjacency matrix")


# ---------------------------------------------------------------------------
# precision bar

BAR_SEGMENTS = (
    ("white_out", WHITE),
    ("white_in", LIGHT_GRAY),
    ("black_in", DARK_GRAY),
    ("black_out", RED),
)


def bar_heights(p: PrecisionCounts, height: float) -> list[float]:
    total = p.total
    if total == 0:
        return [0.0] * 4
    return [height * getattr(p, name) / total for name, _ in BAR_SEGMENTS]


def render_precision_bar(p: PrecisionCounts, cfg: RenderConfig = RenderConfig(), x0: float = 0.0, y0: float = 0.0) -> str:
    """Stacked bar fragment, white at the top and red at the bottom.

    Returns an empty string when there is nothing to classify.
    """
    if p.total == 0:
        return ""
    out = [f'<g class="precision-bar" transform="translate({fmt(x0)},{fmt(y0)})">']
    y = 0.0
    for (name, color), h in zip(BAR_SEGMENTS, bar_heights(p, cfg.bar_height)):
        out.append(
            f'<rect data-count="{name}" data-value="{getattr(p, name)}" x="0.000000" y="{fmt(y)}" '
            f'width="{fmt(cfg.bar_width)}" height="{fmt(h)}" fill="{color}"/>'
        )
        y += h
    out.append(
        f'<rect x="0.000000" y="0.000000" width="{fmt(cfg.bar_width)}" height="{fmt(cfg.bar_height)}" '
        f'fill="none" stroke="{BLACK}" stroke-width="{fmt(cfg.glyph_stroke)}"/>'
    )
    out.append("</g>")
    return "\n".join(out)


def render_precision_bar_document(p: PrecisionCounts, cfg: RenderConfig = RenderConfig()) -> str:
    frag = render_precision_bar(p, cfg, cfg.margin, cfg.margin)
    return document(cfg.bar_width + 2 * cfg.margin, cfg.bar_height + 2 * cfg.margin, [frag] if frag else [], "precision bar")


# ---------------------------------------------------------------------------
# motif view


class _View:
    """Maps model coordinates to pixels."""

    def __init__(self, state: LayoutState, cfg: RenderConfig):
        xs, ys = [], []
        for g in state.placed():
            r = g.radius
            xs += [g.center[0] - r, g.center[0] + r]
            ys += [g.center[1] - r, g.center[1] + r]
        for poly in state.polygons():
            xs += [p[0] for p in poly]
            ys += [p[1] for p in poly]
        pad = 1.5 if cfg.show_labels else 0.5
        self.x0 = (min(xs) - pad) if xs else 0.0
        self.y0 = (min(ys) - pad) if ys else 0.0
        self.s = cfg.scale
        self.width = ((max(xs) + pad) - self.x0) * self.s if xs else 0.0
        self.height = ((max(ys) + pad) - self.y0) * self.s if ys else 0.0

    def __call__(self, p) -> tuple[float, float]:
        return ((p[0] - self.x0) * self.s, (p[1] - self.y0) * self.s)


def _circle(c, r) -> str:
    # two half arcs; a single arc cannot close on itself
    return (
        f"M{fmt(c[0])},{fmt(c[1] - r)}A{fmt(r)},{fmt(r)} 0 1 0 {fmt(c[0])},{fmt(c[1] + r)}"
        f"A{fmt(r)},{fmt(r)} 0 1 0 {fmt(c[0])},{fmt(c[1] - r)}Z"
    )


def _diamond_corners(g: Glyph, radius: float, view: _View) -> list[tuple[float, float]]:
    ca, sa = math.cos(g.rotation), math.sin(g.rotation)
    out = []
    for t in (0.0, 0.25, 0.5, 0.75):
        x, y = local_point("diamond", radius, t)
        out.append(view((g.center[0] + ca * x - sa * y, g.center[1] + sa * x + ca * y)))
    return out


def glyph_path(g: Glyph, view: _View) -> str:
    """Outer contour plus hole contour; drawn with the even-odd rule."""
    if g.shape == "annulus":
        c = view(g.center)
        d = _circle(c, g.outer * view.s)
        if g.inner > 0:
            d += _circle(c, g.inner * view.s)
        return d
    d = "M" + "L".join(_pt(p) for p in _diamond_corners(g, g.radius, view)) + "Z"
    if g.inner > 0:
        d += "M" + "L".join(_pt(p) for p in _diamond_corners(g, g.inner_radius, view)) + "Z"
    return d


def attachment_path(g: Glyph, span: tuple[float, float], view: _View) -> str:
    t0, t1 = span
    a = view(boundary_point(g, t0))
    b = view(boundary_point(g, t1))
    if g.shape == "annulus":
        r = g.outer * view.s
        if t1 - t0 >= 1 - 1e-12:
            return _circle(view(g.center), r)
        large = 1 if t1 - t0 > 0.5 else 0
        # increasing perimeter fraction is increasing angle in y-down pixels: sweep 1
        return f"M{_pt(a)}A{fmt(r)},{fmt(r)} 0 {large} 1 {_pt(b)}"
    pts = [a]
    k = math.floor(t0 * 4) + 1
    while k / 4 < t1 - 1e-12:
        pts.append(view(boundary_point(g, k / 4)))
        k += 1
    pts.append(b)
    return "M" + "L".join(_pt(p) for p in pts)


def motif_body(state: LayoutState, d: Decomposition | None, cfg: RenderConfig, view: _View) -> list[str]:
    glyphs = state.placed()
    out = ['<g class="links">']
    for l, poly in zip(state.links, state.polygons()):
        pts = " ".join(_pt(view(p)) for p in poly)
        out.append(
            f'<polygon data-clique="{l.clique}" data-other="{l.other}" points="{pts}" '
            f'fill="{LINK_GRAY}" fill-opacity="{fmt(cfg.link_opacity)}" stroke="none"/>'
        )
    out.append("</g>")
    out.append('<g class="glyphs">')
    for g in glyphs:
        out.append(
            f'<path data-glyph="{g.index}" data-kind="{g.pattern.kind.value}" data-shape="{g.shape}" '
            f'd="{glyph_path(g, view)}" fill="{g.color}" fill-rule="evenodd" '
            f'stroke="{BLACK}" stroke-width="{fmt(cfg.glyph_stroke)}"/>'
        )
    out.append("</g>")
    out.append('<g class="attachments" fill="none">')
    for l in state.links:
        for gi, span in ((l.clique, l.clique_span), (l.other, l.other_span)):
            out.append(
                f'<path data-glyph="{gi}" d="{attachment_path(glyphs[gi], span, view)}" '
                f'stroke="{BLACK}" stroke-width="{fmt(cfg.attach_stroke)}" stroke-linecap="round"/>'
            )
    out.append("</g>")
    if cfg.show_labels:
        labels = d.labels if d is not None else ()
        font = 0.45 * cfg.scale
        out.append(f'<g class="labels" font-family="sans-serif" font-size="{fmt(font)}" text-anchor="middle" dominant-baseline="central">')
        for g in glyphs:
            cx, cy = g.center
            for seg in boundary_map(g):
                px, py = boundary_point(g, (seg.t0 + seg.t1) / 2)
                dx, dy = px - cx, py - cy
                norm = math.hypot(dx, dy) or 1.0
                lx, ly = view((px + 0.5 * dx / norm, py + 0.5 * dy / norm))
                text = labels[seg.vertex] if seg.vertex < len(labels) else str(seg.vertex)
                out.append(f'<text x="{fmt(lx)}" y="{fmt(ly)}">{escape(text)}</text>')
        out.append("</g>")
    return out


def render_motifs(state: LayoutState, d: Decomposition | None = None, cfg: RenderConfig = RenderConfig()) -> str:
    """Ring Motif diagram: translucent links under the glyphs, thick attachment outlines."""
    view = _View(state, cfg)
    body = motif_body(state, d, cfg, view)
    return document(view.width, view.height, body, "ring motifs")


# ---------------------------------------------------------------------------
# composite


def render_composite(
    original,
    ordered,
    d: Decomposition,
    state: LayoutState,
    cfg: RenderConfig = RenderConfig(),
) -> str:
    """Input matrix | reordered matrix with overlays and bar | motif view, side by side."""
    gap = 2 * cfg.margin
    x = cfg.margin
    body = []
    w1, h1, b1 = matrix_body(original, None, cfg, x, cfg.margin)
    body += b1
    x += w1 + gap
    w2, h2, b2 = matrix_body(ordered, d, cfg, x, cfg.margin)
    body += b2
    x += w2 + cfg.margin
    bar = render_precision_bar(d.precision, cfg, x, cfg.margin)
    if bar:
        body.append(bar)
    x += cfg.bar_width + gap
    view = _View(state, cfg)
    body.append(f'<g class="motifs" transform="translate({fmt(x)},{fmt(cfg.margin)})">')
    body += motif_body(state, d, cfg, view)
    body.append("</g>")
    width = x + view.width + cfg.margin
    height = max(h1, h2, cfg.bar_height, view.height) + 2 * cfg.margin
    return document(width, height, body, "ring motif overview")

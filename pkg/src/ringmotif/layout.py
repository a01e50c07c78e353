"""Ring Motif glyphs and their force-directed placement.

Model coordinates put one unit on each matrix cell, x along columns and y
along rows (y grows downward, as in the rendered SVG). Angles follow
``atan2(y, x)`` in that frame.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .palette import pattern_color
from .patterns import Pattern, PatternKind
from .select import Decomposition

TWO_PI = 2 * math.pi
SQRT2 = math.sqrt(2)
GRAVITY_EPS = 1e-9


@dataclass(frozen=True)
class ForceParams:
    c_o: float = 0.8
    c_a: float = 1.0
    c_r: float = 1.0
    c_g: float = 1.0
    mu: float = 3.0
    max_iters: int = 5000
    convergence_eps: float = 1e-3

    def __post_init__(self):
        for name in ("c_o", "c_a", "c_r", "c_g", "mu", "convergence_eps"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.max_iters < 0:
            raise ValueError("max_iters must be >= 0")


@dataclass(frozen=True)
class Glyph:
    index: int
    pattern: Pattern
    shape: str  # "annulus" or "diamond"
    outer: float  # radius (annulus) or side length (diamond)
    inner: float
    start: tuple[float, float]
    center: tuple[float, float]
    rotation: float = 0.0
    color: str = "#000000"

    @property
    def is_clique(self) -> bool:
        return self.pattern.kind is PatternKind.CLIQUE

    @property
    def radius(self) -> float:
        """Effective radius: the circle radius, or a diamond's circumradius."""
        return self.outer if self.shape == "annulus" else self.outer / SQRT2

    @property
    def inner_radius(self) -> float:
        return self.inner if self.shape == "annulus" else self.inner / SQRT2

    @property
    def outer_area(self) -> float:
        return math.pi * self.outer**2 if self.shape == "annulus" else self.outer**2

    @property
    def hole_area(self) -> float:
        return math.pi * self.inner**2 if self.shape == "annulus" else self.inner**2

    @property
    def colored_area(self) -> float:
        return self.outer_area - self.hole_area


@dataclass(frozen=True)
class BoundarySegment:
    """Part of a glyph's outer boundary owned by one vertex.

    ``t0``/``t1`` are fractions of the perimeter measured from the glyph's
    reference point, independent of rotation.
    """

    glyph: int
    vertex: int
    t0: float
    t1: float


def build_glyph(index: int, p: Pattern, color: str | None = None) -> Glyph:
    (i, i2), (j, j2) = p.rows, p.cols
    start = ((j + j2 + 1) / 2.0, (i + i2 + 1) / 2.0)
    hole = p.cells_total - p.cells_black
    if p.kind is PatternKind.CLIQUE:
        shape, outer, inner = "annulus", math.sqrt(p.cells_total / math.pi), math.sqrt(hole / math.pi)
    else:
        shape, outer, inner = "diamond", math.sqrt(p.cells_total), math.sqrt(hole)
    return Glyph(index, p, shape, outer, inner, start, start, 0.0, color or pattern_color(index))


def build_glyphs(d: Decomposition) -> list[Glyph]:
    return [build_glyph(k, p, c) for k, (p, c) in enumerate(zip(d.patterns, d.colors))]


def boundary_map(g: Glyph) -> list[BoundarySegment]:
    p = g.pattern
    if p.kind is PatternKind.CLIQUE:
        vs = list(p.row_range)
        k = len(vs)
        return [BoundarySegment(g.index, v, t / k, (t + 1) / k) for t, v in enumerate(vs)]
    out = []
    for lo, vs in ((0.0, list(p.row_range)), (0.5, list(p.col_range))):
        k = len(vs)
        out.extend(BoundarySegment(g.index, v, lo + 0.5 * t / k, lo + 0.5 * (t + 1) / k) for t, v in enumerate(vs))
    return out


# diamond corners, counter-clockwise in atan2 terms, starting at angle pi/2
_DIAMOND = np.array([[0.0, 1.0], [-1.0, 0.0], [0.0, -1.0], [1.0, 0.0], [0.0, 1.0]])


def local_point(shape: str, radius: float, t: float) -> tuple[float, float]:
    """Boundary point at perimeter fraction t, before rotation/translation."""
    t = t % 1.0 if not (t == 1.0) else 1.0
    if shape == "annulus":
        a = math.pi / 2 + TWO_PI * t
        return radius * math.cos(a), radius * math.sin(a)
    s = min(int(4 * t), 3)
    u = 4 * t - s
    p = _DIAMOND[s] + u * (_DIAMOND[s + 1] - _DIAMOND[s])
    return radius * float(p[0]), radius * float(p[1])


def boundary_point(g: Glyph, t: float, center=None, rotation=None) -> tuple[float, float]:
    cx, cy = g.center if center is None else center
    a = g.rotation if rotation is None else rotation
    x, y = local_point(g.shape, g.radius, t)
    ca, sa = math.cos(a), math.sin(a)
    return cx + ca * x - sa * y, cy + sa * x + ca * y


def segment_angle(g: Glyph, t0: float, t1: float) -> float:
    """Central angle swept by the boundary between fractions t0 < t1."""
    if t1 - t0 >= 1 - 1e-12:
        return TWO_PI
    if g.shape == "annulus":
        return TWO_PI * (t1 - t0)
    ax, ay = local_point(g.shape, 1.0, t0)
    bx, by = local_point(g.shape, 1.0, t1)
    return (math.atan2(by, bx) - math.atan2(ay, ax)) % TWO_PI


@dataclass(frozen=True)
class Link:
    clique: int  # glyph index
    other: int  # glyph index of the biclique or star
    shared: tuple[int, ...]
    clique_span: tuple[float, float]
    other_span: tuple[float, float]


def _span(segments: list[BoundarySegment], shared: set[int]) -> tuple[float, float]:
    hit = [s for s in segments if s.vertex in shared]
    return (min(s.t0 for s in hit), max(s.t1 for s in hit))


def build_links(d: Decomposition, glyphs: list[Glyph]) -> list[Link]:
    maps = [boundary_map(g) for g in glyphs]
    links = []
    for a, ga in enumerate(glyphs):
        if not ga.is_clique:
            continue
        cv = set(ga.pattern.vertices)
        for b, gb in enumerate(glyphs):
            if gb.is_clique:
                continue
            # disjointness confines the overlap to one side of the biclique
            for side in (gb.pattern.row_range, gb.pattern.col_range):
                shared = cv.intersection(side)
                if shared:
                    sh = set(shared)
                    links.append(Link(a, b, tuple(sorted(shared)), _span(maps[a], sh), _span(maps[b], sh)))
    return links


def link_polygon(link: Link, glyphs: list[Glyph], centers=None, rotations=None) -> list[tuple[float, float]]:
    """Quadrilateral joining the two attachment segments.

    The endpoints are paired so the connecting edges are shortest, which keeps
    the quadrilateral simple.
    """
    pts = []
    for gi, span in ((link.clique, link.clique_span), (link.other, link.other_span)):
        g = glyphs[gi]
        c = None if centers is None else centers[gi]
        r = None if rotations is None else rotations[gi]
        pts.append((boundary_point(g, span[0], c, r), boundary_point(g, span[1], c, r)))
    (a1, b1), (a2, b2) = pts
    straight = math.dist(b1, a2) + math.dist(b2, a1)
    crossed = math.dist(b1, b2) + math.dist(a2, a1)
    return [a1, b1, a2, b2] if straight <= crossed else [a1, b1, b2, a2]


def polygon_centroid(poly) -> tuple[float, float]:
    return (sum(p[0] for p in poly) / len(poly), sum(p[1] for p in poly) / len(poly))


# ---------------------------------------------------------------------------
# forces


def signed_angle(frm, to) -> float:
    """Smallest signed angle rotating vector `frm` onto `to`, in (-pi, pi]."""
    a = math.atan2(to[1], to[0]) - math.atan2(frm[1], frm[0])
    a = (a + math.pi) % TWO_PI - math.pi
    return math.pi if a == -math.pi else a


def rotational_force(g: Glyph, span: tuple[float, float], link_centroid, c_o: float, center=None, rotation=None) -> float:
    cx, cy = g.center if center is None else center
    beta = segment_angle(g, *span)
    ax, ay = boundary_point(g, span[0], center, rotation)
    bx, by = boundary_point(g, span[1], center, rotation)
    m = ((ax + bx) / 2 - cx, (ay + by) / 2 - cy)
    if beta > math.pi:
        m = (-m[0], -m[1])
    if math.hypot(*m) < 1e-12:
        # endpoints diametrically opposite: use the direction of the mid-perimeter point
        px, py = boundary_point(g, (span[0] + span[1]) / 2, center, rotation)
        m = (px - cx, py - cy)
    m_star = (link_centroid[0] - cx, link_centroid[1] - cy)
    if math.hypot(*m_star) < 1e-12:
        return 0.0
    return c_o * signed_angle(m, m_star) * beta / TWO_PI


def attraction_force(center, link_centroid, c_a: float) -> np.ndarray:
    m = np.asarray(link_centroid, dtype=float) - np.asarray(center, dtype=float)
    norm = math.hypot(m[0], m[1])
    if norm == 0:
        return np.zeros(2)
    return c_a * m / norm


def _jitter_direction(i: int, j: int) -> np.ndarray:
    # deterministic direction for coincident centres, antisymmetric in (i, j)
    a, b = min(i, j), max(i, j)
    theta = TWO_PI * ((a * 0.6180339887498949 + b * 0.4142135623730951) % 1.0)
    d = np.array([math.cos(theta), math.sin(theta)])
    return d if i < j else -d


def repulsion_force(ci, cj, ri: float, rj: float, c_r: float, mu: float, i: int = 0, j: int = 1) -> np.ndarray:
    m = np.asarray(ci, dtype=float) - np.asarray(cj, dtype=float)
    dist = math.hypot(m[0], m[1])
    if dist < 1e-12:
        return c_r * _jitter_direction(i, j)
    return c_r * (m / dist) * ((ri + rj + mu) / dist) ** 3


def gravity_force(m, c_g: float, scale: float = 1.0, capture: float = 0.0) -> np.ndarray:
    """Pull of strength ``c_g * scale`` along m.

    Within ``capture`` of the target the pull shrinks linearly to zero. A
    constant-magnitude pull would otherwise overshoot and orbit its target
    forever; the simulation passes ``c_g / r`` so a glyph can at most land
    on its target in one step.
    """
    m = np.asarray(m, dtype=float)
    norm = math.hypot(m[0], m[1])
    if norm < GRAVITY_EPS:
        return np.zeros(2)
    f = c_g * scale / norm
    if norm < capture:
        f *= norm / capture
    return f * m


# ---------------------------------------------------------------------------
# simulation


@dataclass
class LayoutState:
    glyphs: list[Glyph]
    links: list[Link]
    centers: np.ndarray
    rotations: np.ndarray
    components: list[int] = field(default_factory=list)  # link-component id per glyph, -1 if unlinked
    iterations: int = 0
    stop: str = "not-run"
    last_displacement: float = 0.0

    @property
    def starts(self) -> np.ndarray:
        return np.array([g.start for g in self.glyphs], dtype=float).reshape(-1, 2)

    @property
    def radii(self) -> np.ndarray:
        return np.array([g.radius for g in self.glyphs], dtype=float)

    def placed(self) -> list[Glyph]:
        """Glyphs carrying the current centers and rotations."""
        return [
            replace(g, center=(float(c[0]), float(c[1])), rotation=float(a))
            for g, c, a in zip(self.glyphs, self.centers, self.rotations)
        ]

    def polygons(self) -> list[list[tuple[float, float]]]:
        return [link_polygon(l, self.glyphs, self.centers, self.rotations) for l in self.links]

    def to_dict(self) -> dict:
        glyphs = []
        for g in self.placed():
            glyphs.append(
                {
                    "index": g.index,
                    "kind": g.pattern.kind.value,
                    "shape": g.shape,
                    "outer": g.outer,
                    "inner": g.inner,
                    "radius": g.radius,
                    "start": list(g.start),
                    "center": list(g.center),
                    "rotation": g.rotation,
                    "color": g.color,
                    "segments": [
                        {"vertex": s.vertex, "t0": s.t0, "t1": s.t1} for s in boundary_map(g)
                    ],
                }
            )
        links = []
        for l, poly in zip(self.links, self.polygons()):
            links.append(
                {
                    "clique": l.clique,
                    "other": l.other,
                    "shared": list(l.shared),
                    "clique_span": list(l.clique_span),
                    "other_span": list(l.other_span),
                    "polygon": [list(p) for p in poly],
                    "centroid": list(polygon_centroid(poly)),
                }
            )
        return {
            "iterations": self.iterations,
            "stop": self.stop,
            "glyphs": glyphs,
            "links": links,
        }


def _components(n: int, links: list[Link]) -> list[int]:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    linked = set()
    for l in links:
        linked.update((l.clique, l.other))
        ra, rb = find(l.clique), find(l.other)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    return [find(k) if k in linked else -1 for k in range(n)]


def initial_state(d: Decomposition) -> LayoutState:
    glyphs = build_glyphs(d)
    links = build_links(d, glyphs)
    centers = np.array([g.start for g in glyphs], dtype=float).reshape(-1, 2)
    rotations = np.zeros(len(glyphs))
    return LayoutState(glyphs, links, centers, rotations, _components(len(glyphs), links))


def forces(state: LayoutState, params: ForceParams) -> tuple[np.ndarray, np.ndarray]:
    """Net translation force and torque on every glyph, from the current state."""
    G = len(state.glyphs)
    C = state.centers
    R = state.radii
    trans = np.zeros((G, 2))
    torque = np.zeros(G)

    for link, poly in zip(state.links, state.polygons()):
        cl = polygon_centroid(poly)
        for gi, span in ((link.clique, link.clique_span), (link.other, link.other_span)):
            g = state.glyphs[gi]
            trans[gi] += attraction_force(C[gi], cl, params.c_a)
            torque[gi] += rotational_force(g, span, cl, params.c_o, C[gi], state.rotations[gi])

    if G > 1:
        diff = C[:, None, :] - C[None, :, :]
        dist = np.hypot(diff[..., 0], diff[..., 1])
        reach = R[:, None] + R[None, :] + params.mu
        np.fill_diagonal(dist, np.inf)
        close = dist < 1e-12
        safe = np.where(close, 1.0, dist)
        mag = params.c_r * (reach / safe) ** 3 / safe
        mag[~np.isfinite(dist)] = 0.0
        mag[close] = 0.0
        trans += (diff * mag[..., None]).sum(axis=1)
        for i, j in zip(*np.nonzero(close)):
            trans[i] += params.c_r * _jitter_direction(int(i), int(j))

    trans += gravity_forces(state, params)
    return trans, torque


def gravity_forces(state: LayoutState, params: ForceParams) -> np.ndarray:
    """Unlinked glyphs pull toward their own start; linked cliques share the
    pull of their component's mean start; linked bicliques and stars pull
    toward their own start at a fifth of the strength."""
    G = len(state.glyphs)
    C = state.centers
    R = state.radii
    out = np.zeros((G, 2))
    starts = state.starts
    comp = state.components
    comp_vec = {}
    for cid in sorted(set(comp) - {-1}):
        members = [k for k in range(G) if comp[k] == cid and state.glyphs[k].is_clique]
        if members:
            comp_vec[cid] = starts[members].mean(axis=0) - C[members].mean(axis=0)
    for k, g in enumerate(state.glyphs):
        capture = params.c_g / R[k]
        if comp[k] == -1:
            out[k] = gravity_force(starts[k] - C[k], params.c_g, 1.0, capture)
        elif g.is_clique:
            out[k] = gravity_force(comp_vec[comp[k]], params.c_g, 1.0, capture)
        else:
            out[k] = gravity_force(starts[k] - C[k], params.c_g, 0.2, capture)
    return out


def step(state: LayoutState, params: ForceParams) -> LayoutState:
    trans, torque = forces(state, params)
    R = state.radii
    dc = trans / R[:, None]
    da = torque / R
    disp = np.hypot(dc[:, 0], dc[:, 1])
    disp = np.maximum(disp, np.abs(da) * R) if len(R) else disp
    return replace(
        state,
        centers=state.centers + dc,
        rotations=state.rotations + da,
        iterations=state.iterations + 1,
        last_displacement=float(disp.max()) if len(disp) else 0.0,
    )


def run(d: Decomposition, params: ForceParams = ForceParams(), state: LayoutState | None = None) -> LayoutState:
    """Iterate until the largest per-glyph move drops below convergence_eps."""
    state = state or initial_state(d)
    if not state.glyphs:
        return replace(state, stop="empty")
    for _ in range(params.max_iters):
        state = step(state, params)
        if state.last_displacement < params.convergence_eps:
            return replace(state, stop="converged")
    return replace(state, stop="max_iters")

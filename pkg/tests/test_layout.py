import math
from dataclasses import replace

import numpy as np
import pytest

from corpus import corpus, karate_decomposition
from ringmotif.layout import (
    ForceParams,
    Glyph,
    attraction_force,
    boundary_map,
    boundary_point,
    build_glyph,
    build_links,
    forces,
    gravity_force,
    gravity_forces,
    initial_state,
    repulsion_force,
    rotational_force,
    run,
    segment_angle,
    step,
)
from ringmotif.patterns import Pattern, PatternKind, build_prefix, make_pattern
from ringmotif.select import Decomposition, precision

C, B, S = PatternKind.CLIQUE, PatternKind.BICLIQUE, PatternKind.STAR


def decomposition(x, shapes):
    P = build_prefix(x)
    ps = [make_pattern(P, k, r, c) for k, r, c in shapes]
    return Decomposition(x.shape[0], ps, precision(x, ps), labels=tuple(str(v) for v in range(x.shape[0])))


def fill(n, shapes, missing=()):
    x = np.zeros((n, n), dtype=np.int8)
    for _, (i, i2), (j, j2) in shapes:
        x[i : i2 + 1, j : j2 + 1] = 1
        x[j : j2 + 1, i : i2 + 1] = 1
    for u, v in missing:
        x[u, v] = x[v, u] = 0
    np.fill_diagonal(x, 0)
    return x


# -- glyph geometry --


def test_pure_clique_radius():
    g = build_glyph(0, Pattern(C, (0, 3), (0, 3), 12, 12, 12))
    assert g.shape == "annulus"
    assert g.outer == pytest.approx(1.9544, abs=1e-4) and g.inner == 0


def test_noisy_clique_hole():
    g = build_glyph(0, Pattern(C, (0, 3), (0, 3), 4, 12, 8))
    assert g.inner == pytest.approx(1.1284, abs=1e-4)
    assert g.colored_area == pytest.approx(8)


def test_biclique_diamond():
    g = build_glyph(0, Pattern(B, (0, 2), (5, 8), 17, 12, 12))
    assert g.shape == "diamond"
    assert g.outer == pytest.approx(3.4641, abs=1e-4) and g.inner == 0
    assert g.radius == pytest.approx(g.outer / math.sqrt(2))


def test_hole_grows_with_missing_edges():
    inners = [build_glyph(0, Pattern(C, (0, 4), (0, 4), 0, 20, 20 - 2 * k)).inner for k in range(5)]
    assert all(a < b for a, b in zip(inners, inners[1:]))


def test_start_is_submatrix_centroid():
    g = build_glyph(0, Pattern(B, (0, 1), (5, 8), 0, 8, 8))
    assert g.start == (7.0, 1.0)  # x along columns, y along rows


def test_clique_boundary_equal_arcs():
    g = build_glyph(0, Pattern(C, (2, 5), (2, 5), 12, 12, 12))
    segs = boundary_map(g)
    assert [s.vertex for s in segs] == [2, 3, 4, 5]
    for s in segs:
        assert segment_angle(g, s.t0, s.t1) == pytest.approx(math.pi / 2)


def test_star_boundary_sides():
    g = build_glyph(0, Pattern(S, (0, 0), (2, 8), 6, 7, 7))
    segs = boundary_map(g)
    rows = [s for s in segs if s.vertex == 0]
    cols = [s for s in segs if s.vertex != 0]
    assert len(rows) == 1 and (rows[0].t0, rows[0].t1) == (0.0, 0.5)
    assert len(cols) == 7
    assert cols[0].t0 == 0.5 and cols[-1].t1 == pytest.approx(1.0)


def test_rotation_is_rigid():
    g = build_glyph(0, Pattern(B, (0, 1), (4, 6), 7, 6, 6))
    delta = 0.7
    cx, cy = g.center
    for t in np.linspace(0, 1, 9):
        x0, y0 = boundary_point(g, t)
        x1, y1 = boundary_point(g, t, rotation=delta)
        rx = cx + math.cos(delta) * (x0 - cx) - math.sin(delta) * (y0 - cy)
        ry = cy + math.sin(delta) * (x0 - cx) + math.cos(delta) * (y0 - cy)
        assert (x1, y1) == pytest.approx((rx, ry))


# -- links --


def test_link_on_shared_vertices():
    shapes = [(C, (2, 6), (2, 6)), (B, (4, 5), (9, 12))]
    d = decomposition(fill(14, shapes), shapes)
    links = build_links(d, initial_state(d).glyphs)
    assert len(links) == 1
    assert links[0].shared == (4, 5)


def test_no_links_without_shared_vertices():
    shapes = [(C, (0, 3), (0, 3)), (B, (5, 6), (9, 12))]
    d = decomposition(fill(14, shapes), shapes)
    assert initial_state(d).links == []


def test_no_biclique_biclique_links():
    shapes = [(B, (0, 1), (5, 7)), (B, (5, 6), (9, 10))]  # both touch vertices 5 and 6
    d = decomposition(fill(12, shapes), shapes)
    assert initial_state(d).links == []


# -- forces --


def test_rotational_force_parallel_is_zero():
    g = build_glyph(0, Pattern(C, (0, 3), (0, 3), 12, 12, 12))
    # span over the first quarter: the chord midpoint points up-left
    px, py = boundary_point(g, 0.125)
    target = (g.center[0] + 3 * (px - g.center[0]), g.center[1] + 3 * (py - g.center[1]))
    assert rotational_force(g, (0.0, 0.25), target, 0.8) == pytest.approx(0.0, abs=1e-12)


def test_rotational_force_half_circle():
    g = build_glyph(0, Pattern(C, (0, 3), (0, 3), 12, 12, 12))
    cx, cy = g.center
    # beta = pi; m points along -x; m* along -y is a quarter turn
    f = rotational_force(g, (0.0, 0.5), (cx, cy - 5), 0.8)
    assert abs(f) == pytest.approx(0.2 * math.pi)
    assert rotational_force(g, (0.0, 0.5), (cx, cy + 5), 0.8) == pytest.approx(-f)


def test_rotational_force_degenerate_target():
    g = build_glyph(0, Pattern(C, (0, 3), (0, 3), 12, 12, 12))
    assert rotational_force(g, (0.0, 0.25), g.center, 0.8) == 0.0


def test_attraction_is_unit_length():
    a = attraction_force((0, 0), (100, 0), 1.0)
    b = attraction_force((0, 0), (1, 0), 1.0)
    assert np.allclose(a, b) and np.allclose(a, [1, 0])
    assert np.linalg.norm(attraction_force((1, 1), (4, 5), 1.0)) == pytest.approx(1)
    assert np.allclose(attraction_force((0, 0), (0, 0), 1.0), 0)


def test_repulsion_magnitudes():
    assert np.linalg.norm(repulsion_force((5, 0), (0, 0), 1, 1, 1.0, 3.0)) == pytest.approx(1.0)
    assert np.linalg.norm(repulsion_force((10, 0), (0, 0), 1, 1, 1.0, 3.0)) == pytest.approx(0.125)
    f = repulsion_force((3, 4), (1, 1), 1.5, 0.7, 1.0, 3.0)
    assert np.allclose(f, -repulsion_force((1, 1), (3, 4), 0.7, 1.5, 1.0, 3.0))


def test_repulsion_coincident_centres():
    f = repulsion_force((2, 2), (2, 2), 1, 1, 1.0, 3.0, 0, 1)
    g = repulsion_force((2, 2), (2, 2), 1, 1, 1.0, 3.0, 1, 0)
    assert np.linalg.norm(f) == pytest.approx(1.0)
    assert np.allclose(f, -g)


def test_gravity_at_start_is_zero():
    assert np.allclose(gravity_force((0.0, 0.0), 1.0), 0)


def test_gravity_on_linked_biclique():
    shapes = [(C, (0, 4), (0, 4)), (B, (3, 4), (7, 10))]
    d = decomposition(fill(12, shapes), shapes)
    st = initial_state(d)
    st.centers[1] += (1.0, 0.0)
    g = gravity_forces(st, ForceParams())
    assert np.linalg.norm(g[1]) == pytest.approx(0.2)
    assert np.allclose(g[1] / 0.2, [-1, 0])


def test_component_gravity_cancels():
    shapes = [(C, (0, 3), (0, 3)), (C, (8, 11), (8, 11)), (B, (2, 3), (9, 10))]
    d = decomposition(fill(12, shapes), shapes)
    st = initial_state(d)
    assert st.components[0] == st.components[1] == st.components[2] != -1
    st.centers[0] += (2.0, -1.0)
    st.centers[1] -= (2.0, -1.0)
    g = gravity_forces(st, ForceParams())
    assert np.allclose(g[0], 0) and np.allclose(g[1], 0)


def test_gravity_never_overshoots():
    # a lone glyph released near its start settles there instead of orbiting
    shapes = [(C, (0, 3), (0, 3))]
    d = decomposition(fill(6, shapes), shapes)
    st = initial_state(d)
    st.centers[0] += (0.3, 0.2)
    dist = []
    for _ in range(20):
        st = step(st, ForceParams())
        dist.append(float(np.linalg.norm(st.centers[0] - st.starts[0])))
    assert all(b <= a + 1e-12 for a, b in zip(dist, dist[1:]))
    assert dist[-1] < 1e-6


# -- simulation --


def test_single_glyph_fixed_point():
    shapes = [(C, (0, 3), (0, 3))]
    d = decomposition(fill(6, shapes), shapes)
    st = run(d)
    assert st.stop == "converged" and st.iterations == 1
    assert np.allclose(st.centers, st.starts)


def test_empty_decomposition():
    d = Decomposition(0, [], precision(np.zeros((0, 0)), []))
    st = run(d)
    assert st.iterations == 0 and st.stop == "empty"


def test_overlapping_glyphs_separate():
    shapes = [(C, (0, 3), (0, 3)), (C, (4, 7), (4, 7))]
    d = decomposition(fill(8, shapes), shapes)
    st = initial_state(d)
    st.centers[:] = (4.0, 4.0)
    seps = []
    for _ in range(200):
        st = step(st, ForceParams())
        seps.append(float(np.linalg.norm(st.centers[0] - st.centers[1])))
    # separation grows while the glyphs are inside each other's balance region
    r = st.radii
    grow = [s for s in seps if s < r[0] + r[1]]
    assert all(b > a for a, b in zip(grow, grow[1:]))
    assert seps[-1] > r[0] + r[1]


def test_larger_glyph_moves_less():
    small = build_glyph(0, Pattern(C, (0, 2), (0, 2), 2, 6, 6))
    big = build_glyph(1, Pattern(C, (3, 9), (3, 9), 60, 42, 42))
    assert big.radius > small.radius
    shapes = [(C, (0, 2), (0, 2)), (C, (3, 9), (3, 9))]
    d = decomposition(fill(10, shapes), shapes)
    st = initial_state(d)
    nxt = step(st, ForceParams())
    moved = np.linalg.norm(nxt.centers - st.centers, axis=1)
    # the pair repulsion is equal and opposite; gravity is zero at the start
    assert moved[1] < moved[0]


def test_repulsion_sums_to_zero():
    _, d = karate_decomposition()
    st = initial_state(d)
    p = ForceParams()
    total = np.zeros(2)
    C_ = st.centers
    R = st.radii
    for i in range(len(R)):
        for j in range(len(R)):
            if i != j:
                total += repulsion_force(C_[i], C_[j], R[i], R[j], p.c_r, p.mu, i, j)
    assert np.allclose(total, 0, atol=1e-9)


def test_forces_match_scalar_repulsion():
    _, d = karate_decomposition()
    st = initial_state(d)
    st.centers[0] += (0.5, -0.25)
    p = ForceParams()
    trans, _ = forces(st, p)
    manual = gravity_forces(st, p).copy()
    for l, poly in zip(st.links, st.polygons()):
        c = np.mean(poly, axis=0)
        for gi in (l.clique, l.other):
            manual[gi] += attraction_force(st.centers[gi], c, p.c_a)
    for i in range(len(st.glyphs)):
        for j in range(len(st.glyphs)):
            if i != j:
                manual[i] += repulsion_force(st.centers[i], st.centers[j], st.radii[i], st.radii[j], p.c_r, p.mu, i, j)
    assert np.allclose(trans, manual)


def test_karate_converges_without_overlap():
    _, d = karate_decomposition()
    st = run(d, ForceParams())
    assert st.stop == "converged" and st.iterations <= 5000
    R = st.radii
    for i in range(len(R)):
        for j in range(i + 1, len(R)):
            assert np.linalg.norm(st.centers[i] - st.centers[j]) >= R[i] + R[j] - 1e-6


def test_translation_equivariance():
    _, d = karate_decomposition()
    base = initial_state(d)
    shift = np.array([7.5, -3.25])
    moved = replace(
        base,
        glyphs=[replace(g, start=(g.start[0] + shift[0], g.start[1] + shift[1])) for g in base.glyphs],
        centers=base.centers + shift,
    )
    a = run(d, ForceParams(), base)
    b = run(d, ForceParams(), moved)
    assert a.iterations == b.iterations
    assert np.allclose(a.centers + shift, b.centers, atol=1e-9)
    assert np.allclose(a.rotations, b.rotations, atol=1e-9)


def test_layout_deterministic():
    _, d = karate_decomposition()
    a, b = run(d), run(d)
    assert a.centers.tobytes() == b.centers.tobytes()
    assert a.rotations.tobytes() == b.rotations.tobytes()


@pytest.mark.parametrize("name,res,d", corpus(), ids=[c[0] for c in corpus()])
def test_corpus_converges(name, res, d):
    st = run(d, ForceParams())
    assert st.stop == "converged"
    assert st.last_displacement < 1e-3


def test_force_params_validation():
    with pytest.raises(ValueError):
        ForceParams(c_o=0)
    with pytest.raises(ValueError):
        ForceParams(max_iters=-1)

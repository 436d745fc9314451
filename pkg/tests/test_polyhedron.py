"""Halfspace intersection, mesh accessors, and the edge/volume functionals."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from melzak import (
    HalfSpace,
    box,
    cube,
    edge_length,
    from_halfspaces,
    melzak_ratio,
    optimal_prism,
    random_convex,
    regular_tetrahedron,
    validate,
    volume,
)
from melzak.errors import EmptyInterior, UnboundedIntersection
from melzak.shapes import PRISM_EDGE_LENGTH


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------

def test_cube_counts_and_euler():
    C = cube()
    assert (C.n_vertices, C.n_edges, C.n_faces) == (8, 12, 6)
    assert C.n_vertices - C.n_edges + C.n_faces == 2
    assert C.convex


def test_cube_vertices_exact():
    C = cube()
    want = {(sx, sy, sz) for sx in (-0.5, 0.5) for sy in (-0.5, 0.5)
            for sz in (-0.5, 0.5)}
    got = {tuple(v) for v in np.round(C.vertices, 15)}
    assert got == want


def test_halfspace_normalizes_input():
    h = HalfSpace(np.array([0.0, 0.0, 2.0]), 3.0)
    assert np.allclose(h.normal, [0, 0, 1])
    assert h.offset == pytest.approx(1.5)


def test_redundant_plane_dropped():
    hs = list(cube().halfspaces) + [HalfSpace(np.array([0.0, 0.0, 1.0]), 2.0)]
    C2 = from_halfspaces(hs)
    assert C2.n_faces == 6


def test_too_few_planes_unbounded():
    with pytest.raises(UnboundedIntersection):
        from_halfspaces([HalfSpace(np.array([0.0, 0.0, 1.0]), 1.0),
                         HalfSpace(np.array([0.0, 0.0, -1.0]), 0.0),
                         HalfSpace(np.array([1.0, 0.0, 0.0]), 1.0)])


def test_open_top_unbounded():
    with pytest.raises(UnboundedIntersection):
        from_halfspaces([HalfSpace(np.array([0.0, 0.0, -1.0]), 0.0),
                         HalfSpace(np.array([1.0, 0.0, 0.0]), 1.0),
                         HalfSpace(np.array([-1.0, 0.0, 0.0]), 1.0),
                         HalfSpace(np.array([0.0, 1.0, 0.0]), 1.0),
                         HalfSpace(np.array([0.0, -1.0, 0.0]), 1.0)])


def test_infeasible_empty_interior():
    with pytest.raises(EmptyInterior):
        from_halfspaces([HalfSpace(np.array([0.0, 0.0, 1.0]), -1.0),
                         HalfSpace(np.array([0.0, 0.0, -1.0]), -1.0),
                         HalfSpace(np.array([1.0, 0.0, 0.0]), 1.0),
                         HalfSpace(np.array([-1.0, 0.0, 0.0]), 1.0),
                         HalfSpace(np.array([0.0, 1.0, 0.0]), 1.0),
                         HalfSpace(np.array([0.0, -1.0, 0.0]), 1.0)])


def test_near_coaxial_plane_triples_do_not_poison_the_scale():
    # A prism whose side normals are tilted out of plane by ~1e-10 makes the
    # side triple solvable but garbage (a point ~1e9 away).  The vertex merge
    # radius must come from the surviving feasible points, not that garbage,
    # or every real vertex collapses into one.
    eps = 1.0e-10
    hs = []
    for k in range(3):
        a = 2 * math.pi * k / 3
        n = np.array([math.cos(a), math.sin(a), eps])
        hs.append(HalfSpace(n / np.linalg.norm(n), 0.5))
    hs.append(HalfSpace(np.array([0.0, 0.0, 1.0]), 0.6))
    hs.append(HalfSpace(np.array([0.0, 0.0, -1.0]), 0.6))
    P = from_halfspaces(hs)
    assert (P.n_vertices, P.n_faces) == (6, 5)
    assert volume(P) == pytest.approx(3 * math.sqrt(3) * 0.25 * 1.2, rel=1e-6)


# ---------------------------------------------------------------------------
# accessors
# ---------------------------------------------------------------------------

def test_edge_index_and_edge_faces():
    C = cube()
    for e, (i, j) in enumerate(C.edges):
        assert C.edge_index(i, j) == e
        assert C.edge_index(j, i) == e
        fa, fb = C.edge_faces(e)
        assert i in C.faces[fa] and j in C.faces[fa]
        assert i in C.faces[fb] and j in C.faces[fb]


def test_vertex_accessors():
    C = cube()
    assert all(C.vertex_degree(v) == 3 for v in range(8))
    assert C.vertex_faces(0) == sorted(C.vertex_faces(0))
    assert len(C.vertex_faces(0)) == 3


def test_face_geometry():
    C = cube()
    for f in range(6):
        assert C.face_area(f) == pytest.approx(1.0)
        n = C.face_normal(f)
        assert np.linalg.norm(n) == pytest.approx(1.0)
        assert C.face_centroid(f) @ n == pytest.approx(0.5)
    assert C.diameter() == pytest.approx(math.sqrt(3))


def test_signature_is_scale_invariant():
    C = cube()
    assert C.combinatorial_signature() == C.scaled(7.3).combinatorial_signature()


def test_validate_reference_shapes():
    for P in (cube(), regular_tetrahedron(), optimal_prism(), box(0.5, 1.0, 2.0)):
        rep = validate(P)
        assert rep.euler_ok and rep.coplanar_ok and rep.convex_ok
        assert rep.manifold_ok and rep.orientation_ok
        assert rep.max_coplanarity_error < 1e-9


# ---------------------------------------------------------------------------
# functionals
# ---------------------------------------------------------------------------

def test_cube_functionals():
    C = cube()
    assert edge_length(C) == pytest.approx(12.0, abs=1e-12)
    assert volume(C) == pytest.approx(1.0, abs=1e-12)
    assert melzak_ratio(C) == pytest.approx(1728.0, abs=1e-9)


def test_tetrahedron_functionals():
    T = regular_tetrahedron()
    assert melzak_ratio(T) == pytest.approx(1296 * math.sqrt(2), rel=1e-12)


def test_prism_functionals():
    P = optimal_prism()
    assert edge_length(P) == pytest.approx(PRISM_EDGE_LENGTH, rel=1e-12)
    assert volume(P) == pytest.approx(1.0, rel=1e-12)
    assert melzak_ratio(P) == pytest.approx(4 * 3 ** 5.5, rel=1e-12)


def test_box_volume_and_edges():
    B = box(0.5, 1.0, 2.0)
    assert volume(B) == pytest.approx(1.0, abs=1e-12)
    assert edge_length(B) == pytest.approx(4 * (0.5 + 1.0 + 2.0), abs=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.floats(min_value=0.05, max_value=50.0,
                 allow_nan=False, allow_infinity=False))
def test_ratio_scale_invariance(s):
    C = cube()
    S = C.scaled(s)
    assert edge_length(S) == pytest.approx(s * 12.0, rel=1e-12)
    assert volume(S) == pytest.approx(s ** 3, rel=1e-12)
    assert melzak_ratio(S) == pytest.approx(1728.0, rel=1e-10)


@settings(max_examples=10, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_random_convex_is_valid(seed):
    P = random_convex(np.random.default_rng(seed))
    rep = validate(P)
    assert rep.euler_ok and rep.convex_ok and rep.manifold_ok
    assert volume(P) > 0

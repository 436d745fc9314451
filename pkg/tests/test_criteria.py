"""Local-minimality audits: each criterion, its witnesses, and the report."""

import json
import math

import numpy as np
import pytest

from conftest import hull_polyhedron, octahedron
from melzak import cube, ngon_pyramid, optimal_prism, regular_tetrahedron
from melzak.criteria import (
    audit,
    check_combinatorics,
    check_dihedral,
    check_triangle_deficit,
    check_vertex_curvature,
    check_vertex_degree,
)
from melzak.perturbations import Perturbation, apply


# ---------------------------------------------------------------------------
# candidates pass
# ---------------------------------------------------------------------------

def test_cube_is_candidate():
    rep = audit(cube(), mode="candidate")
    assert rep.is_candidate_minimizer
    assert rep.summary["triangle_count"] == 0
    assert rep.summary["max_vertex_degree"] == 3


def test_tetra_and_prism_are_candidates():
    assert audit(regular_tetrahedron(), mode="candidate").is_candidate_minimizer
    rep = audit(optimal_prism(), mode="candidate")
    assert rep.is_candidate_minimizer
    tri = next(v for v in rep.verdicts if v.criterion_id == "triangle_deficit")
    assert tri.applicable and tri.passed
    dih = next(v for v in rep.verdicts if v.criterion_id == "dihedral")
    assert any("doubles the argument" in n for n in dih.notes)


# ---------------------------------------------------------------------------
# vertex degree
# ---------------------------------------------------------------------------

def test_octahedron_fails_degree_with_verified_witnesses():
    O = octahedron()
    vd = check_vertex_degree(O)
    assert vd.applicable and not vd.passed
    assert len(vd.witnesses) == 6
    assert all(w.perturbation is not None and w.dM < -1e-10 for w in vd.witnesses)
    assert not audit(O, mode="candidate").is_candidate_minimizer


def test_pyramid_apex_flagged():
    PY = ngon_pyramid(4, 1.0, 0.8)
    vd = check_vertex_degree(PY)
    apex = next(v for v in range(PY.n_vertices) if PY.vertex_degree(v) == 4)
    assert not vd.passed
    assert any(w.element == f"vertex:{apex}" and w.dM < -1e-10
               for w in vd.witnesses)


# ---------------------------------------------------------------------------
# vertex curvature
# ---------------------------------------------------------------------------

def test_cube_curvature_passes():
    vc = check_vertex_curvature(cube())
    assert vc.applicable and vc.passed


def test_needle_apex_curvature_witness():
    NP = ngon_pyramid(12, 0.05, 1.0)
    vc = check_vertex_curvature(NP)
    wit = [w for w in vc.witnesses if w.measured == 12.0]
    assert len(wit) == 1 and not vc.passed
    assert wit[0].threshold < 1.0
    assert wit[0].perturbation is not None and wit[0].dM < -1e-6
    assert not audit(NP, mode="any").summary["is_candidate_minimizer"]


def test_pancake_curvature_silent_but_degree_fires():
    # the curvature bound is necessary, not sufficient: a flat 12-gon pyramid
    # sails past it while the degree criterion still rejects the apex
    FP = ngon_pyramid(12, 1.0, 0.05)
    assert check_vertex_curvature(FP).passed
    assert not check_vertex_degree(FP).passed


# ---------------------------------------------------------------------------
# triangle deficit
# ---------------------------------------------------------------------------

def test_truncated_cube_triangle_witness():
    TC = apply(cube(), Perturbation("vertex_truncate", 0), 0.05)
    td = check_triangle_deficit(TC)
    assert not td.passed and len(td.witnesses) == 1
    w = td.witnesses[0]
    assert w.measured == pytest.approx(math.pi / 2, abs=1e-9)
    assert w.perturbation is not None
    assert w.perturbation.kind == "face_hinge"
    assert w.dM < -1e-10
    assert not td.notes


def test_tetra_triangles_pass():
    td = check_triangle_deficit(regular_tetrahedron())
    assert td.applicable and td.passed


# ---------------------------------------------------------------------------
# combinatorics
# ---------------------------------------------------------------------------

def test_cube_combinatorics():
    assert check_combinatorics(cube()).passed


def test_icosahedron_combinatorics():
    phi = (1 + math.sqrt(5)) / 2
    pts = []
    for s1 in (-1, 1):
        for s2 in (-1, 1):
            pts += [(0, s1, s2 * phi), (s1, s2 * phi, 0), (s2 * phi, 0, s1)]
    ICO = hull_polyhedron(np.array(pts, dtype=float))
    assert (ICO.n_vertices, ICO.n_faces) == (12, 20)
    cb = check_combinatorics(ICO, mode="candidate")
    assert not cb.passed
    assert any(w.measured == 20.0 and w.threshold == 14.0 for w in cb.witnesses)
    assert check_combinatorics(ICO, mode="any").passed


# ---------------------------------------------------------------------------
# dihedral
# ---------------------------------------------------------------------------

def test_cube_dihedral_threshold():
    dd = check_dihedral(cube(), B=12.0)
    assert dd.passed
    assert 2 * math.atan(27 / (4 * 12 ** 3)) == pytest.approx(0.0078124, abs=1e-6)


def test_sliver_dihedral_witness():
    pts = np.array([
        [0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 0],
        [0, 0, 0.0005], [1, 0, 0.0005], [0, 0.001, 0.0005], [1, 0.001, 0.0005],
    ])
    W = hull_polyhedron(pts)
    dd = check_dihedral(W, B=12.0)
    assert not dd.passed and len(dd.witnesses) >= 1


def test_fine_truncation_near_face_pairs_pass():
    TC2 = apply(cube(), Perturbation("vertex_truncate", 0), 1e-4)
    dd = check_dihedral(TC2, B=12.0, d=0.01)
    assert dd.passed


# ---------------------------------------------------------------------------
# report serialization
# ---------------------------------------------------------------------------

def test_report_json_shape_and_determinism():
    rep = audit(optimal_prism(), mode="candidate")
    js = rep.to_json()
    payload = json.loads(js)
    assert list(payload) == ["criteria", "summary", "notes"]
    ids = [c["id"] for c in payload["criteria"]]
    assert ids == sorted(ids)
    assert all(set(w) >= {"element", "measured", "threshold"}
               for c in payload["criteria"] for w in c["witnesses"])
    assert audit(optimal_prism(), mode="candidate").to_json() == js

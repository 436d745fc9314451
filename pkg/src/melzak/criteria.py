"""Necessary local-minimality criteria for the edge-length ratio.

Each checker is a pure function returning a verdict with violation
witnesses. A witness that carries an improving perturbation has its ratio
derivative re-verified to be strictly negative before the audit includes
it; thresholds come from the criterion statements, the perturbation module
supplies the certificates.

The audit degrades gracefully on non-convex input: checkers that need
convexity or a particular exposure class mark elements as non-applicable
instead of failing.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT_TOLERANCES
from .errors import GeometryError, InvalidPolyhedron, NotConvex
from .gauss import (
    EXPOSED,
    NEGATIVELY_EXPOSED,
    angle_deficit,
    complement_gauss_image,
    dihedral_angle,
    exposure,
    gauss_image,
    spherical_area,
    spherical_incircle,
)
from .perturbations import (
    IN,
    OUT,
    Perturbation,
    derivatives,
    face_hinge_derivatives,
    face_translate_derivatives,
    vertex_truncate_derivatives,
)
from .polyhedron import Polyhedron, _unit, edge_length, validate, volume
from .shapes import PRISM_EDGE_LENGTH

WITNESS_MARGIN = DEFAULT_TOLERANCES.witness_margin


@dataclass(frozen=True)
class Witness:
    element: str
    measured: float
    threshold: float
    perturbation: Perturbation | None = None
    dM: float | None = None

    def to_dict(self) -> dict:
        out = {"element": self.element, "measured": _sig(self.measured),
               "threshold": _sig(self.threshold)}
        if self.perturbation is not None:
            out["perturbation"] = self.perturbation.label()
            out["dM"] = _sig(self.dM)
        return out


@dataclass(frozen=True)
class CriterionVerdict:
    criterion_id: str
    applicable: bool
    passed: bool
    witnesses: tuple = ()
    notes: tuple = ()

    def to_dict(self) -> dict:
        return {"id": self.criterion_id, "applicable": self.applicable,
                "passed": self.passed,
                "witnesses": [w.to_dict() for w in self.witnesses]}


@dataclass(frozen=True)
class CriteriaReport:
    verdicts: tuple
    summary: dict
    notes: tuple = ()

    def to_dict(self) -> dict:
        return {"criteria": [v.to_dict() for v in self.verdicts],
                "summary": dict(self.summary),
                "notes": list(self.notes)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @property
    def is_candidate_minimizer(self) -> bool:
        return bool(self.summary["is_candidate_minimizer"])


def _sig(x) -> float:
    """Round to 12 significant digits for stable serialized output."""
    if x is None:
        return None
    return float(f"{float(x):.12g}")


def _best_improvement(P: Polyhedron, candidates) -> tuple:
    """(perturbation, dM) with the most negative verified dM, else (None, None)."""
    best = None
    for pert in candidates:
        try:
            dM = derivatives(P, pert).dM
        except GeometryError:
            continue
        if best is None or dM < best[1]:
            best = (pert, dM)
    if best is None or best[1] >= -WITNESS_MARGIN:
        return None, None
    return best


def _admissible_face_moves(P: Polyhedron, f: int, target: int) -> list:
    """Translate/hinge perturbations of face ``f`` that move ``target``.

    Admissibility follows the exposure rules: a full translate needs every
    face vertex in one exposure class; a hinge needs every off-hinge vertex
    in one class. The target vertex must be among the movers.
    """
    cyc = P.faces[f]
    status = {v: exposure(P, v) for v in cyc}
    cls = status[target]
    if cls not in (EXPOSED, NEGATIVELY_EXPOSED):
        return []
    moves = []
    if all(s == cls for s in status.values()):
        moves += [Perturbation("face_translate", f, d) for d in (OUT, IN)]
    m = len(cyc)
    for t in range(m):
        i, j = cyc[t], cyc[(t + 1) % m]
        if target in (i, j):
            continue
        if all(status[v] == cls for v in cyc if v not in (i, j)):
            e = P.edge_index(i, j)
            moves += [Perturbation("face_hinge", f, d, e) for d in (OUT, IN)]
    return moves


def check_vertex_degree(P: Polyhedron) -> CriterionVerdict:
    """Vertices of degree above 3 admit an improving face slide or hinge."""
    witnesses = []
    applicable = False
    for f in range(P.n_faces):
        for v in P.faces[f]:
            if _admissible_face_moves(P, f, v):
                applicable = True
                break
        if applicable:
            break
    for v in range(P.n_vertices):
        deg = P.vertex_degree(v)
        if deg <= 3:
            continue
        candidates = []
        for f in P.vertex_faces(v):
            candidates += _admissible_face_moves(P, f, v)
        pert, dM = _best_improvement(P, candidates)
        if pert is not None:
            witnesses.append(Witness(f"vertex:{v}", float(deg), 3.0, pert, dM))
    return CriterionVerdict("vertex_degree", applicable, not witnesses, tuple(witnesses))


def _deficit_threshold(alpha: float) -> float:
    u = 1.0 - alpha / (2.0 * math.pi)
    den = math.sqrt(max(0.0, 1.0 - u * u))
    if den == 0.0:
        return math.inf
    return (2.0 * math.pi - alpha) / den


def check_vertex_curvature(P: Polyhedron) -> CriterionVerdict:
    """High-degree vertices inside a fat spherical-image incircle get cut.

    The enforced threshold is 2*pi/tan(radius of the image incircle); the
    deficit-based variant is evaluated alongside and any disagreement is
    reported as a note instead of affecting the verdict.
    """
    witnesses = []
    notes = []
    applicable = False
    for v in range(P.n_vertices):
        expo = exposure(P, v)
        if expo == EXPOSED:
            image = gauss_image(P, v)
        elif expo == NEGATIVELY_EXPOSED:
            image = complement_gauss_image(P, v)
        else:
            continue
        try:
            inc = spherical_incircle(image)
        except GeometryError as exc:
            notes.append(f"vertex {v}: incircle unavailable ({exc})")
            continue
        applicable = True
        thr = 2.0 * math.pi / math.tan(inc.radius)
        deg = P.vertex_degree(v)
        alpha = spherical_area(image)
        thr_deficit = _deficit_threshold(alpha)
        if (deg > thr) != (deg > thr_deficit):
            notes.append(
                f"vertex {v}: incircle threshold {thr:.6g} and deficit threshold "
                f"{thr_deficit:.6g} disagree at degree {deg}")
        if deg > thr:
            pert, dM = _best_improvement(P, [Perturbation("vertex_truncate", v)])
            witnesses.append(Witness(f"vertex:{v}", float(deg), thr, pert, dM))
    return CriterionVerdict("vertex_curvature", applicable, not witnesses,
                            tuple(witnesses), tuple(notes))


def _prolongations(P: Polyhedron, f: int) -> dict:
    """Unit direction continuing each vertex's third edge past the face."""
    out = {}
    cyc = P.faces[f]
    for v in cyc:
        nbrs = [u for u in _vertex_neighbors(P, v) if u not in cyc]
        if len(nbrs) != 1:
            return {}
        out[v] = -_unit(P.vertices[nbrs[0]] - P.vertices[v])
    return out


def _vertex_neighbors(P: Polyhedron, v: int) -> list:
    out = []
    for i, j in P.edges:
        if i == v:
            out.append(j)
        elif j == v:
            out.append(i)
    return out


def check_triangle_deficit(P: Polyhedron) -> CriterionVerdict:
    """Triangular faces with too little total angle deficit admit a hinge.

    Exposed triangles violate at total deficit <= pi/2, negatively exposed
    ones at total deficit >= pi. Only simple (degree-3) corners qualify;
    higher degrees are the degree criterion's business.
    """
    witnesses = []
    notes = []
    applicable = False
    for f in range(P.n_faces):
        cyc = P.faces[f]
        if len(cyc) != 3 or any(P.vertex_degree(v) != 3 for v in cyc):
            continue
        status = {exposure(P, v) for v in cyc}
        if status == {EXPOSED}:
            cls = EXPOSED
        elif status == {NEGATIVELY_EXPOSED}:
            cls = NEGATIVELY_EXPOSED
        else:
            continue
        applicable = True
        total = sum(angle_deficit(P, v) for v in cyc)
        prolong = _prolongations(P, f)

        if prolong:
            gamma_sum = 0.0
            for a in cyc:
                for b in cyc:
                    if a != b:
                        u = _unit(P.vertices[b] - P.vertices[a])
                        gamma_sum += math.acos(float(np.clip(prolong[a] @ u, -1, 1)))
            if abs((gamma_sum - math.pi) - total) > 1e-9:
                notes.append(
                    f"face {f}: pairwise prolongation angles minus pi give "
                    f"{gamma_sum - math.pi:.12g}, vertex deficits give {total:.12g}")

        if cls == EXPOSED:
            violated = total <= math.pi / 2.0
            threshold = math.pi / 2.0
        else:
            violated = total >= math.pi
            threshold = math.pi
        if not violated:
            continue

        candidates = []
        preferred = []
        for t in range(3):
            h = cyc[t]
            others = [v for v in cyc if v != h]
            e = P.edge_index(others[0], others[1])
            perts = [Perturbation("face_hinge", f, d, e) for d in (OUT, IN)]
            candidates += perts
            if prolong and cls == EXPOSED:
                cos_sum = sum(float(prolong[h] @ _unit(P.vertices[o] - P.vertices[h]))
                              for o in others)
                if cos_sum >= 1.0:
                    preferred.append(Perturbation("face_hinge", f, OUT, e))
        pert, dM = _best_improvement(P, preferred or candidates)
        if pert is None and preferred:
            pert, dM = _best_improvement(P, candidates)
        witnesses.append(Witness(f"face:{f}", float(total), threshold, pert, dM))
    return CriterionVerdict("triangle_deficit", applicable, not witnesses,
                            tuple(witnesses), tuple(notes))


def check_combinatorics(P: Polyhedron, mode: str = "any") -> CriterionVerdict:
    """Face-degree sum inequality, plus the triangle-count cap in candidate mode."""
    chi = P.n_vertices - P.n_edges + P.n_faces
    lhs = float(sum(len(c) - 6 for c in P.faces))
    rhs = float(-6 * chi)
    witnesses = []
    if lhs > rhs:
        witnesses.append(Witness("polyhedron", lhs, rhs))
    if mode == "candidate":
        tri = float(sum(1 for c in P.faces if len(c) == 3))
        if tri > 14:
            witnesses.append(Witness("polyhedron", tri, 14.0))
    return CriterionVerdict("combinatorics", True, not witnesses, tuple(witnesses))


def _plane_wedge_angle(n1, n2) -> float:
    """Interior angle of the wedge cut out by two oriented halfspaces."""
    return math.acos(float(np.clip(-(n1 @ n2), -1.0, 1.0)))


def _segment_distance_2d(p1, p2, q1, q2) -> float:
    """Minimum distance between segments [p1,p2] and [q1,q2] in the plane."""
    def point_seg(p, a, b):
        ab = b - a
        t = float(np.clip((p - a) @ ab / max(ab @ ab, 1e-300), 0.0, 1.0))
        return float(np.linalg.norm(p - (a + t * ab)))

    return min(point_seg(p1, q1, q2), point_seg(p2, q1, q2),
               point_seg(q1, p1, p2), point_seg(q2, p1, p2))


def check_dihedral(P: Polyhedron, B: float | None = None,
                   d: float | None = None) -> CriterionVerdict:
    """Lower bounds on dihedral angles for edge-length bound ``B``.

    Adjacent faces must meet at 2*arctan(27/(4 B^3)) or more. Faces that
    come within ``d`` of each other along a shared face must satisfy the
    same bound damped by (1/2 - d B^2/4); that check is skipped when the
    damping factor is nonpositive. ``d`` defaults to 1/B^2.
    """
    if not P.convex:
        raise NotConvex("dihedral bounds are stated for convex polyhedra")
    if B is None:
        B = edge_length(P) * volume(P) ** (-1.0 / 3.0)
    if B <= 0:
        raise NotConvex("edge-length bound must be positive")
    if d is None:
        d = 1.0 / (B * B)
    base = 27.0 / (4.0 * B ** 3)
    thr_adj = 2.0 * math.atan(base)
    witnesses = []
    notes = []
    if abs(B - PRISM_EDGE_LENGTH) < 1e-6:
        alt = 2.0 * math.atan(2.0 * base)
        notes.append(
            f"adjacent-face bound at this B: formula gives {thr_adj:.6g}, the "
            f"companion numeric instantiation {alt:.6g} doubles the argument; "
            "both reported")

    for e in range(P.n_edges):
        delta = dihedral_angle(P, e)
        if delta < thr_adj:
            witnesses.append(Witness(f"edge:{e}", float(delta), thr_adj))

    damp = 0.5 - d * B * B / 4.0
    if damp > 0:
        thr_near = 2.0 * math.atan(base * damp)
        adjacency = {frozenset(fs) for fs in
                     (P.edge_faces(e) for e in range(P.n_edges))}
        for s in range(P.n_faces):
            cyc = P.faces[s]
            m = len(cyc)
            basis = _face_basis(P, s)
            rim = []
            for t in range(m):
                i, j = cyc[t], cyc[(t + 1) % m]
                fpair = [f for f in P.edge_faces(P.edge_index(i, j)) if f != s]
                rim.append((fpair[0], P.vertices[i] @ basis.T, P.vertices[j] @ basis.T))
            for a in range(m):
                for b in range(a + 1, m):
                    f1, p1, p2 = rim[a]
                    f2, q1, q2 = rim[b]
                    if f1 == f2 or frozenset((f1, f2)) in adjacency:
                        continue
                    if _segment_distance_2d(p1, p2, q1, q2) > d:
                        continue
                    ang = _plane_wedge_angle(P.face_normal(f1), P.face_normal(f2))
                    if ang < thr_near:
                        witnesses.append(Witness(f"faces:{min(f1, f2)},{max(f1, f2)}",
                                                 float(ang), thr_near))
    return CriterionVerdict("dihedral", True, not witnesses, tuple(witnesses),
                            tuple(notes))


def _face_basis(P: Polyhedron, f: int) -> np.ndarray:
    n = P.face_normal(f)
    a = np.array([1.0, 0.0, 0.0]) if abs(n[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    u = _unit(np.cross(n, a))
    return np.vstack([u, np.cross(n, u)])


_CHECKERS = ("combinatorics", "dihedral", "triangle_deficit",
             "vertex_curvature", "vertex_degree")


def audit(P: Polyhedron, mode: str = "any", B: float | None = None,
          d: float | None = None) -> CriteriaReport:
    """Run every criterion and assemble the deterministic report.

    mode "candidate" additionally enforces results that hold only along a
    minimizing sequence, such as the triangle-count cap.
    """
    if mode not in ("any", "candidate"):
        raise InvalidPolyhedron(f"unknown audit mode {mode!r}")
    rep = validate(P)
    if not rep.ok:
        raise InvalidPolyhedron("; ".join(rep.messages) or "validation failed")

    verdicts = [
        check_combinatorics(P, mode),
        check_triangle_deficit(P),
        check_vertex_curvature(P),
        check_vertex_degree(P),
    ]
    try:
        verdicts.append(check_dihedral(P, B, d))
    except NotConvex as exc:
        verdicts.append(CriterionVerdict("dihedral", False, True, (),
                                         (f"skipped: {exc}",)))
    verdicts = [_reverify(P, v) for v in verdicts]
    verdicts.sort(key=lambda v: v.criterion_id)

    summary = {
        "is_candidate_minimizer": all(v.passed for v in verdicts if v.applicable),
        "triangle_count": sum(1 for c in P.faces if len(c) == 3),
        "max_vertex_degree": max(P.vertex_degree(v) for v in range(P.n_vertices)),
    }
    notes = tuple(f"{v.criterion_id}: {n}" for v in verdicts for n in v.notes)
    return CriteriaReport(tuple(verdicts), summary, notes)


def _reverify(P: Polyhedron, verdict: CriterionVerdict) -> CriterionVerdict:
    """Drop perturbation attachments whose improvement does not re-verify."""
    ws = []
    for w in verdict.witnesses:
        if w.perturbation is None:
            ws.append(w)
            continue
        try:
            dM = derivatives(P, w.perturbation).dM
        except GeometryError:
            dM = 0.0
        if dM < -WITNESS_MARGIN:
            ws.append(Witness(w.element, w.measured, w.threshold, w.perturbation, dM))
        else:
            ws.append(Witness(w.element, w.measured, w.threshold))
    ws.sort(key=lambda w: w.element)
    return CriterionVerdict(verdict.criterion_id, verdict.applicable, verdict.passed,
                            tuple(ws), verdict.notes)

"""Spherical images of polyhedron vertices and related unit-sphere geometry.

The spherical image of a vertex collects the outward normals of its incident
faces in rotational order. Its sides are geodesic arcs whose lengths are pi
minus the interior dihedral angles of the corresponding edges, its area
equals the angle deficit, and its inscribed circle drives the vertex-cutting
perturbation.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOLERANCES
from .errors import (
    BadParameter,
    DanglingVertex,
    DegeneratePolygon,
    NonConvexPolygon,
)
from .polyhedron import Polyhedron, _unit

EXPOSED = "exposed"
NEGATIVELY_EXPOSED = "negatively_exposed"
NEITHER = "neither"


@dataclass(frozen=True)
class SphericalPolygon:
    """Unit-sphere polygon given by its vertices in rotational order."""

    points: np.ndarray
    convex: bool

    def __post_init__(self):
        pts = np.array(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 3 or len(pts) < 2:
            raise BadParameter("spherical polygon needs >= 2 points in R^3")
        norms = np.linalg.norm(pts, axis=1)
        if np.abs(norms - 1.0).max() > 1e-9:
            raise BadParameter("spherical polygon points must be unit vectors")
        pts /= norms[:, None]
        pts.flags.writeable = False
        object.__setattr__(self, "points", pts)

    @property
    def n_sides(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class Incircle:
    center: np.ndarray
    radius: float
    tangent_sides: tuple


def ordered_faces_at_vertex(P: Polyhedron, v: int) -> list:
    """Incident face indices in a consistent rotational order around ``v``."""
    incident = P.vertex_faces(v)
    if len(incident) < 3:
        raise DanglingVertex(f"vertex {v} has {len(incident)} incident faces")
    pair_of = {}
    for f in incident:
        cyc = P.faces[f]
        k = cyc.index(v)
        nxt = cyc[(k + 1) % len(cyc)]
        prv = cyc[(k - 1) % len(cyc)]
        pair_of[f] = (prv, nxt)
    # walk: from face f cross the edge (v, next_f(v)) into its other face
    edge_to_faces = {}
    for f in incident:
        for u in pair_of[f]:
            edge_to_faces.setdefault(frozenset((v, u)), []).append(f)
    start = min(incident)
    order = [start]
    while len(order) < len(incident):
        f = order[-1]
        nxt_vertex = pair_of[f][1]
        fs = edge_to_faces[frozenset((v, nxt_vertex))]
        g = fs[0] if fs[1] == f else fs[1]
        if g in order:
            raise DanglingVertex(f"face fan around vertex {v} does not close")
        order.append(g)
    return order


def ordered_edges_at_vertex(P: Polyhedron, v: int) -> list:
    """Outgoing neighbor vertices of ``v``, rotationally ordered.

    Neighbor k lies on the edge shared by ordered faces k and k+1, so this
    order matches the sides of the spherical image.
    """
    faces = ordered_faces_at_vertex(P, v)
    out = []
    for f in faces:
        cyc = P.faces[f]
        k = cyc.index(v)
        out.append(cyc[(k + 1) % len(cyc)])
    return out


def gauss_image(P: Polyhedron, v: int) -> SphericalPolygon:
    """Spherical image of a vertex: incident outward normals in fan order."""
    faces = ordered_faces_at_vertex(P, v)
    pts = np.array([P.face_normal(f) for f in faces])
    return SphericalPolygon(pts, exposure(P, v) == EXPOSED)


def complement_gauss_image(P: Polyhedron, v: int) -> SphericalPolygon:
    """Spherical image of the vertex seen from the complement solid."""
    faces = ordered_faces_at_vertex(P, v)
    pts = np.array([-P.face_normal(f) for f in reversed(faces)])
    return SphericalPolygon(pts, exposure(P, v) == NEGATIVELY_EXPOSED)


def angle_deficit(P: Polyhedron, v: int) -> float:
    """2*pi minus the sum of incident face angles at ``v``."""
    total = 0.0
    for f in P.vertex_faces(v):
        cyc = P.faces[f]
        k = cyc.index(v)
        p = P.vertices[v]
        a = P.vertices[cyc[(k - 1) % len(cyc)]] - p
        b = P.vertices[cyc[(k + 1) % len(cyc)]] - p
        n = P.face_normal(f)
        # signed interior angle; handles reflex polygon corners
        ang = np.arctan2(np.cross(b, a) @ n, a @ b)
        if ang < 0:
            ang += 2.0 * np.pi
        total += ang
    return 2.0 * np.pi - total


def _oriented(points: np.ndarray) -> np.ndarray:
    """Reorient so consecutive cross products point with the polygon mean."""
    c = points.mean(axis=0)
    score = 0.0
    for i in range(len(points)):
        score += np.cross(points[i], points[(i + 1) % len(points)]) @ c
    return points if score >= 0 else points[::-1]


def _check_convex(points: np.ndarray, tol: float) -> None:
    n = len(points)
    for i in range(n):
        pole = np.cross(points[i], points[(i + 1) % n])
        norm = np.linalg.norm(pole)
        if norm <= tol:
            raise DegeneratePolygon("consecutive points are parallel or antipodal")
        pole /= norm
        if (points @ pole < -tol).any():
            raise NonConvexPolygon("polygon crosses one of its own geodesics")


def spherical_area(poly: SphericalPolygon) -> float:
    """Interior-angle excess area of a convex spherical polygon."""
    pts = _oriented(poly.points)
    if len(pts) < 3:
        raise DegeneratePolygon("area needs at least 3 points")
    _check_convex(pts, 1e-12)
    n = len(pts)
    total = 0.0
    for i in range(n):
        p = pts[i]
        a = pts[(i - 1) % n] - (pts[(i - 1) % n] @ p) * p
        b = pts[(i + 1) % n] - (pts[(i + 1) % n] @ p) * p
        na, nb = np.linalg.norm(a), np.linalg.norm(b)
        if na <= 1e-14 or nb <= 1e-14:
            raise DegeneratePolygon("repeated point in polygon")
        total += np.arccos(np.clip((a @ b) / (na * nb), -1.0, 1.0))
    return total - (n - 2) * np.pi


def side_poles(poly: SphericalPolygon) -> np.ndarray:
    """Inward-oriented unit poles of the polygon's geodesic sides."""
    pts = _oriented(poly.points)
    n = len(pts)
    poles = np.zeros((n, 3))
    for i in range(n):
        pole = np.cross(pts[i], pts[(i + 1) % n])
        norm = np.linalg.norm(pole)
        if norm <= 1e-13:
            raise DegeneratePolygon("degenerate side")
        poles[i] = pole / norm
    return poles


def point_side_distance(p: np.ndarray, pole: np.ndarray) -> float:
    """Spherical distance from unit point ``p`` to the great circle of ``pole``."""
    return float(np.arcsin(np.clip(p @ pole, -1.0, 1.0)))


def spherical_incircle(poly: SphericalPolygon, tol: float = DEFAULT_TOLERANCES.tangency) -> Incircle:
    """Largest inscribed circle of a convex spherical polygon.

    Solves max over unit c of min_i distance(c, side_i) exactly by
    enumerating the stationary candidates: normalized pole-pair bisectors
    (two active sides) and equal-clearance points of pole triples, then
    keeping the feasible maximizer. Radius is clamped to (0, pi/2).
    """
    pts = _oriented(poly.points)
    if len(pts) < 2:
        raise DegeneratePolygon("incircle needs at least 2 sides")
    _check_convex(pts, 1e-12)
    poles = side_poles(SphericalPolygon(pts, poly.convex))
    n = len(poles)

    candidates = []
    for i, j in itertools.combinations(range(n), 2):
        s = poles[i] + poles[j]
        norm = np.linalg.norm(s)
        if norm > 1e-12:
            candidates.append(s / norm)
    for i, j, k in itertools.combinations(range(n), 3):
        d = np.cross(poles[i] - poles[j], poles[j] - poles[k])
        norm = np.linalg.norm(d)
        if norm > 1e-12:
            candidates.append(d / norm)
            candidates.append(-d / norm)
    if not candidates:
        raise DegeneratePolygon("no incircle candidates")

    best_c, best_r = None, -np.inf
    for c in candidates:
        r = float(np.min(np.arcsin(np.clip(poles @ c, -1.0, 1.0))))
        if r > best_r:
            best_r, best_c = r, c
    if best_r <= tol:
        raise DegeneratePolygon("polygon is flat: incircle radius is zero")
    if best_r >= np.pi / 2:
        raise DegeneratePolygon("incircle radius reached pi/2")
    dists = np.arcsin(np.clip(poles @ best_c, -1.0, 1.0))
    tangent = tuple(int(i) for i in np.nonzero(dists <= best_r + tol)[0])
    return Incircle(best_c, best_r, tangent)


def incircle_area_bounds(radius: float) -> tuple:
    """(strict lower, inclusive upper) area bounds for incircle radius."""
    if not 0.0 < radius < np.pi / 2:
        raise BadParameter("incircle radius must lie in (0, pi/2)")
    return 2.0 * np.pi * (1.0 - np.cos(radius)), 4.0 * radius


def dihedral_angle(P: Polyhedron, e: int) -> float:
    """Interior dihedral angle along edge ``e`` in (0, 2*pi)."""
    i, j = P.edges[e]
    f1 = f2 = None
    for f, cyc in enumerate(P.faces):
        k = len(cyc)
        for t in range(k):
            a, b = cyc[t], cyc[(t + 1) % k]
            if (a, b) == (i, j):
                f1 = f
            elif (a, b) == (j, i):
                f2 = f
    if f1 is None or f2 is None:
        raise BadParameter(f"edge {e} is not consistently oriented in two faces")
    m1, m2 = P.face_normal(f1), P.face_normal(f2)
    edir = _unit(P.vertices[j] - P.vertices[i])
    turn = np.arctan2(np.cross(m1, m2) @ edir, m1 @ m2)
    return float(np.pi - turn)


def exposure(P: Polyhedron, v: int, margin: float = DEFAULT_TOLERANCES.exposure) -> str:
    """Classify a vertex by the dihedral angles of its incident edges."""
    incident = [e for e, (i, j) in enumerate(P.edges) if v in (i, j)]
    if len(incident) < 3:
        raise DanglingVertex(f"vertex {v} has {len(incident)} incident edges")
    angles = np.array([dihedral_angle(P, e) for e in incident])
    if (angles < np.pi - margin).all():
        return EXPOSED
    if (angles > np.pi + margin).all():
        return NEGATIVELY_EXPOSED
    return NEITHER

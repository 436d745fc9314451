"""Polyhedra as synchronized halfspace and vertex/edge/face incidence data.

The halfspace view drives construction and perturbation; the incidence view
drives the edge-length, volume and ratio functionals. ``from_halfspaces`` is
the one constructor that keeps the two views consistent, so modified
halfspace sets are always rebuilt through it.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import (
    BadParameter,
    DegenerateInput,
    EmptyInterior,
    InconsistentOrientation,
    NonManifold,
    UnboundedIntersection,
    ZeroVolume,
)

logger = logging.getLogger(__name__)


def _unit(v: np.ndarray) -> np.ndarray:
    n = np.linalg.norm(v)
    if n == 0.0:
        raise BadParameter("zero vector cannot be normalized")
    return v / n


@dataclass(frozen=True)
class HalfSpace:
    """Closed halfspace {x : <x, normal> <= offset} with unit outward normal."""

    normal: np.ndarray
    offset: float

    def __post_init__(self):
        n = np.array(self.normal, dtype=float).reshape(3)
        norm = np.linalg.norm(n)
        if norm <= 1e-12:
            raise BadParameter("halfspace normal must be nonzero")
        o = float(self.offset)
        if abs(norm - 1.0) > DEFAULT_TOLERANCES.unit_norm:
            # rescale both so the defining plane is unchanged
            n = n / norm
            o = o / norm
        n.flags.writeable = False
        object.__setattr__(self, "normal", n)
        object.__setattr__(self, "offset", o)

    def signed(self, points: np.ndarray) -> np.ndarray:
        """Signed distances <x, n> - offset; negative means strictly inside."""
        return np.asarray(points, dtype=float) @ self.normal - self.offset

    def translated(self, delta: float) -> "HalfSpace":
        """Same normal, plane moved by ``delta`` along the outward normal."""
        return HalfSpace(self.normal, self.offset + delta)

    def rotated_about_line(self, point: np.ndarray, axis: np.ndarray, angle: float) -> "HalfSpace":
        """Rotate the defining plane about the line (point, axis) by ``angle``."""
        w = _unit(np.asarray(axis, dtype=float))
        c, s = np.cos(angle), np.sin(angle)
        n = self.normal
        n_rot = n * c + np.cross(w, n) * s + w * (w @ n) * (1.0 - c)
        return HalfSpace(n_rot, float(np.asarray(point, dtype=float) @ n_rot))


@dataclass(frozen=True)
class Polyhedron:
    """Immutable polyhedron; arrays are read-only once constructed.

    ``faces[i]`` is the cyclic vertex index tuple of the face supported by
    ``halfspaces[i]``, ordered counterclockwise as seen from outside.
    """

    vertices: np.ndarray
    faces: tuple
    halfspaces: tuple
    convex: bool
    edges: tuple = field(default=())

    def __post_init__(self):
        v = np.array(self.vertices, dtype=float)
        v.flags.writeable = False
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "faces", tuple(tuple(int(i) for i in f) for f in self.faces))
        object.__setattr__(self, "halfspaces", tuple(self.halfspaces))
        if not self.edges:
            object.__setattr__(self, "edges", _edges_from_faces(self.faces))

    # -- counts ---------------------------------------------------------
    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def n_faces(self) -> int:
        return len(self.faces)

    # -- local geometry -------------------------------------------------
    def face_points(self, f: int) -> np.ndarray:
        return self.vertices[list(self.faces[f])]

    def face_normal(self, f: int) -> np.ndarray:
        return self.halfspaces[f].normal

    def face_centroid(self, f: int) -> np.ndarray:
        return self.face_points(f).mean(axis=0)

    def face_area(self, f: int) -> float:
        pts = self.face_points(f)
        rel = pts - pts[0]
        cross = np.cross(rel[:-1], np.roll(rel, -1, axis=0)[:-1]).sum(axis=0)
        return 0.5 * float(cross @ self.face_normal(f))

    def vertex_degree(self, v: int) -> int:
        return sum(1 for (i, j) in self.edges if v in (i, j))

    def vertex_faces(self, v: int) -> list:
        return [f for f, cyc in enumerate(self.faces) if v in cyc]

    def edge_index(self, i: int, j: int) -> int:
        key = (min(i, j), max(i, j))
        return self.edges.index(key)

    def edge_faces(self, e: int) -> tuple:
        i, j = self.edges[e]
        out = []
        for f, cyc in enumerate(self.faces):
            k = len(cyc)
            for t in range(k):
                a, b = cyc[t], cyc[(t + 1) % k]
                if {a, b} == {i, j}:
                    out.append(f)
                    break
        if len(out) != 2:
            raise NonManifold(f"edge {e} shared by {len(out)} faces")
        return tuple(out)

    def diameter(self) -> float:
        v = self.vertices
        d2 = ((v[:, None, :] - v[None, :, :]) ** 2).sum(axis=2)
        return float(np.sqrt(d2.max()))

    def combinatorial_signature(self) -> tuple:
        fdeg = tuple(sorted(len(f) for f in self.faces))
        vdeg = tuple(sorted(self.vertex_degree(v) for v in range(self.n_vertices)))
        return (self.n_vertices, self.n_edges, self.n_faces, fdeg, vdeg)

    def scaled(self, factor: float) -> "Polyhedron":
        if factor <= 0:
            raise BadParameter("scale factor must be positive")
        hs = tuple(HalfSpace(h.normal, h.offset * factor) for h in self.halfspaces)
        return Polyhedron(self.vertices * factor, self.faces, hs, self.convex, self.edges)


@dataclass(frozen=True)
class ValidationReport:
    euler_ok: bool
    coplanar_ok: bool
    convex_ok: bool
    manifold_ok: bool
    orientation_ok: bool
    max_coplanarity_error: float
    messages: tuple

    @property
    def ok(self) -> bool:
        return (self.euler_ok and self.coplanar_ok and self.convex_ok
                and self.manifold_ok and self.orientation_ok)


def _edges_from_faces(faces) -> tuple:
    seen = {}
    for f, cyc in enumerate(faces):
        k = len(cyc)
        for t in range(k):
            a, b = cyc[t], cyc[(t + 1) % k]
            key = (min(a, b), max(a, b))
            seen.setdefault(key, []).append(f)
    bad = {e: fs for e, fs in seen.items() if len(fs) != 2}
    if bad:
        e, fs = next(iter(bad.items()))
        raise NonManifold(f"edge {e} lies in {len(fs)} faces, expected 2")
    return tuple(sorted(seen))


def _plane_basis(n: np.ndarray) -> tuple:
    """Right-handed (t1, t2, n) orthonormal frame for a unit normal."""
    k = int(np.argmin(np.abs(n)))
    e = np.zeros(3)
    e[k] = 1.0
    t1 = _unit(np.cross(n, e))
    t2 = np.cross(n, t1)
    return t1, t2


def _sort_cycle(points: np.ndarray, idx: np.ndarray, normal: np.ndarray) -> tuple:
    """Order vertex indices counterclockwise about ``normal``."""
    c = points.mean(axis=0)
    t1, t2 = _plane_basis(normal)
    rel = points - c
    ang = np.arctan2(rel @ t2, rel @ t1)
    order = np.argsort(ang, kind="stable")
    return tuple(int(idx[k]) for k in order)


def from_halfspaces(halfspaces, tol: Tolerances = DEFAULT_TOLERANCES) -> Polyhedron:
    """Intersect halfspaces into a bounded convex polyhedron.

    Vertex candidates come from all non-degenerate plane triples, filtered by
    feasibility and deduplicated at ``tol.dedup`` times the candidate spread.
    Redundant halfspaces (fewer than three incident vertices) are dropped.

    Raises UnboundedIntersection, EmptyInterior or DegenerateInput; the
    error-path classification re-checks feasibility and boundedness with LPs.
    """
    hs = list(halfspaces)
    if len(hs) < 4:
        raise UnboundedIntersection("fewer than four halfspaces cannot bound a volume")
    N = np.array([h.normal for h in hs])
    b = np.array([h.offset for h in hs])
    m = len(hs)

    triples = np.array(list(itertools.combinations(range(m), 3)))
    A = N[triples]                                    # (T, 3, 3)
    dets = np.linalg.det(A)
    good = np.abs(dets) > tol.plane_triple
    if not good.any():
        _classify_failure(N, b, "no three independent supporting planes")
    A = A[good]
    rhs = b[triples[good]]
    pts = np.linalg.solve(A, rhs[..., None])[..., 0]  # (T, 3)

    # two-pass scale estimate: ill-conditioned triples solve to garbage
    # points far away, and letting those set the scale would blow up the
    # feasibility slack and the vertex merge radius
    scale = max(float(np.abs(pts).max()), 1e-9)
    for _ in range(2):
        feasible = (pts @ N.T - b <= tol.containment * scale).all(axis=1)
        pts = pts[feasible]
        if len(pts) == 0:
            _classify_failure(N, b, "no feasible plane-triple intersection points")
        scale = max(float(np.abs(pts).max()), 1e-9)

    verts = _dedup(pts, tol.dedup * scale)
    if len(verts) < 4:
        _classify_failure(N, b, "fewer than four distinct vertices")
    # deterministic vertex order
    key = np.round(verts / (tol.dedup * scale)).astype(np.int64)
    order = np.lexsort((key[:, 2], key[:, 1], key[:, 0]))
    verts = verts[order]

    on_plane = np.abs(verts @ N.T - b) <= tol.coplanarity * scale
    faces = []
    kept = []
    for f in range(m):
        idx = np.nonzero(on_plane[:, f])[0]
        if len(idx) < 3:
            logger.debug("dropping redundant halfspace %d (%d incident vertices)", f, len(idx))
            continue
        cyc = _sort_cycle(verts[idx], idx, N[f])
        faces.append(cyc)
        kept.append(f)
    if len(faces) < 4:
        _classify_failure(N, b, "fewer than four supporting faces")

    kept_hs = tuple(hs[f] for f in kept)
    try:
        edges = _edges_from_faces(faces)
    except NonManifold:
        _classify_failure(N, b, "vertex/face incidence is not edge-manifold")

    poly = Polyhedron(verts, tuple(faces), kept_hs, True, edges)
    if poly.n_vertices - poly.n_edges + poly.n_faces != 2:
        _classify_failure(N, b, "Euler characteristic is not 2")
    for f in range(poly.n_faces):
        if poly.face_area(f) <= 0:
            _classify_failure(N, b, f"face {f} has nonpositive oriented area")
    if volume(poly) <= 0:
        raise InconsistentOrientation("assembled boundary has nonpositive volume")
    return poly


def _dedup(pts: np.ndarray, radius: float) -> np.ndarray:
    """Merge points closer than ``radius`` (greedy union by first champion)."""
    out = []
    used = np.zeros(len(pts), dtype=bool)
    for i in range(len(pts)):
        if used[i]:
            continue
        d = np.linalg.norm(pts - pts[i], axis=1)
        group = (d <= radius) & ~used
        used |= group
        out.append(pts[group].mean(axis=0))
    return np.array(out)


def _classify_failure(N: np.ndarray, b: np.ndarray, detail: str):
    """Slow error path: decide between unbounded / empty / degenerate via LPs."""
    from scipy.optimize import linprog

    m = len(N)
    # Chebyshev center: max r s.t. N x + r <= b
    res = linprog(c=[0.0, 0.0, 0.0, -1.0],
                  A_ub=np.hstack([N, np.ones((m, 1))]), b_ub=b,
                  bounds=[(None, None)] * 4, method="highs")
    if res.status == 3:
        raise UnboundedIntersection(detail)
    if res.status == 2 or (res.status == 0 and res.x[3] <= 1e-12):
        raise EmptyInterior(detail)
    for k in range(3):
        for sign in (1.0, -1.0):
            c = np.zeros(3)
            c[k] = -sign
            r = linprog(c=c, A_ub=N, b_ub=b, bounds=[(None, None)] * 3, method="highs")
            if r.status == 3:
                raise UnboundedIntersection(detail)
    raise DegenerateInput(detail)


# -- functionals ---------------------------------------------------------

def edge_length(P: Polyhedron) -> float:
    """Total edge length: sum of |p_i - p_j| over the edge set."""
    idx = np.array(P.edges)
    if len(idx) == 0:
        return 0.0
    d = P.vertices[idx[:, 0]] - P.vertices[idx[:, 1]]
    return float(np.linalg.norm(d, axis=1).sum())


def volume(P: Polyhedron) -> float:
    """Enclosed volume via signed tetrahedra over centroid fans."""
    total = 0.0
    V = P.vertices
    for f, cyc in enumerate(P.faces):
        pts = V[list(cyc)]
        c = pts.mean(axis=0)
        a = pts
        bb = np.roll(pts, -1, axis=0)
        total += np.einsum("ij,ij->i", np.cross(a, bb), np.broadcast_to(c, a.shape)).sum()
    return float(total) / 6.0


def melzak_ratio(P: Polyhedron) -> float:
    """Scale-invariant ratio edge_length(P)**3 / volume(P)."""
    v = volume(P)
    if v <= 0.0:
        raise ZeroVolume(f"volume {v} is not positive")
    return edge_length(P) ** 3 / v


def validate(P: Polyhedron, tol: Tolerances = DEFAULT_TOLERANCES) -> ValidationReport:
    """Non-throwing structural report: Euler, planarity, convexity, manifold."""
    msgs = []
    euler_ok = (P.n_vertices - P.n_edges + P.n_faces == 2)
    if not euler_ok:
        msgs.append(f"euler: V-E+F = {P.n_vertices - P.n_edges + P.n_faces}")

    scale = max(P.diameter(), 1e-12)
    max_cop = 0.0
    for f, cyc in enumerate(P.faces):
        h = P.halfspaces[f]
        err = float(np.abs(h.signed(P.vertices[list(cyc)])).max())
        max_cop = max(max_cop, err)
    coplanar_ok = max_cop <= tol.coplanarity * scale
    if not coplanar_ok:
        msgs.append(f"coplanarity: max error {max_cop:.3e}")

    N = np.array([h.normal for h in P.halfspaces])
    b = np.array([h.offset for h in P.halfspaces])
    worst = float((P.vertices @ N.T - b).max())
    convex_ok = worst <= tol.convexity * scale
    if P.convex and not convex_ok:
        msgs.append(f"convexity: vertex violates a halfspace by {worst:.3e}")
    if not P.convex:
        convex_ok = True  # declared non-convex: containment is not required

    try:
        _edges_from_faces(P.faces)
        manifold_ok = True
    except NonManifold as exc:
        manifold_ok = False
        msgs.append(str(exc))

    orientation_ok = True
    try:
        if volume(P) <= 0:
            orientation_ok = False
            msgs.append("orientation: nonpositive enclosed volume")
    except Exception as exc:  # pragma: no cover - defensive
        orientation_ok = False
        msgs.append(f"orientation: {exc}")

    return ValidationReport(euler_ok, coplanar_ok, convex_ok, manifold_ok,
                            orientation_ok, max_cop, tuple(msgs))

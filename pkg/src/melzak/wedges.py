"""Quadrilateral-face wedge analysis and the flat-pyramid conditions.

A protruding wedge is what the four neighboring halfspaces of a
quadrilateral face carve out above that face's plane. This module builds
wedges, classifies the good ones (acute base dihedrals over a rectangular
base), evaluates the hinge condition R along a base edge, and studies the
degenerate height-zero limit where the wedge flattens onto a planar
quadrilateral with an interior apex.

The planar residual scan searches for quadrilaterals satisfying the
alternating chain F(1) = -F(2) = F(3) = -F(4) with some F(i) nonzero; any
such find would be a counterexample to the closing conjecture that the
chain forces all F(i) to vanish.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    BadParameter,
    CoincidentPoints,
    DegenerateEdge,
    DegenerateInput,
    GeometryError,
    NotConvex,
    UnboundedIntersection,
    UnboundedWedge,
)
from .gauss import angle_deficit, dihedral_angle
from .polyhedron import HalfSpace, Polyhedron, _unit, from_halfspaces


@dataclass(frozen=True)
class Wedge:
    """Solid carved above a quadrilateral base by its four side planes.

    base vertices are ordered as in the host face cycle (counterclockwise
    seen from the apex side). apex holds one point for a pyramid tip, two
    for a ridge. lateral[i] is the apex point joined to base[i] by a wedge
    edge.
    """

    base: np.ndarray
    apex: np.ndarray
    lateral: np.ndarray
    height: float
    normalized: bool = False
    poly: Polyhedron | None = None
    base_face: int = -1

    def __post_init__(self):
        base = np.asarray(self.base, dtype=float)
        if base.shape != (4, 3):
            raise BadParameter("wedge base must be four 3-vectors")
        n = self.base_normal()
        spread = np.ptp((base - base[0]) @ n)
        if spread > 1e-9 * max(1.0, float(np.abs(base).max())):
            raise BadParameter("wedge base is not planar")

    @property
    def is_pyramid(self) -> bool:
        return len(self.apex) == 1

    def base_normal(self) -> np.ndarray:
        """Unit normal of the base plane pointing toward the apex side."""
        b = np.asarray(self.base, dtype=float)
        n = _unit(np.cross(b[1] - b[0], b[2] - b[0]))
        if len(self.apex) and (np.asarray(self.apex[0]) - b[0]) @ n < 0:
            n = -n
        return n

    def base_edge_lengths(self) -> np.ndarray:
        b = np.asarray(self.base, dtype=float)
        return np.linalg.norm(np.roll(b, -1, axis=0) - b, axis=1)

    def base_angles(self) -> np.ndarray:
        """Interior angles of the base quadrilateral."""
        b = np.asarray(self.base, dtype=float)
        out = []
        for i in range(4):
            u = _unit(b[(i + 1) % 4] - b[i])
            w = _unit(b[(i - 1) % 4] - b[i])
            out.append(math.acos(float(np.clip(u @ w, -1.0, 1.0))))
        return np.array(out)

    def base_dihedrals(self) -> np.ndarray:
        """Dihedral angles along the four base edges."""
        if self.poly is None or self.height < 1e-12:
            return np.zeros(4)
        out = []
        for i in range(4):
            a = _vertex_index(self.poly, self.base[i])
            b = _vertex_index(self.poly, self.base[(i + 1) % 4])
            out.append(dihedral_angle(self.poly, self.poly.edge_index(a, b)))
        return np.array(out)

    def scaled(self, factor: float, normalized: bool | None = None) -> "Wedge":
        return Wedge(self.base * factor, self.apex * factor, self.lateral * factor,
                     self.height * factor,
                     self.normalized if normalized is None else normalized,
                     None if self.poly is None else self.poly.scaled(factor),
                     self.base_face)


def _vertex_index(P: Polyhedron, x) -> int:
    d = np.linalg.norm(P.vertices - np.asarray(x), axis=1)
    i = int(np.argmin(d))
    if d[i] > 1e-7 * max(1.0, P.diameter()):
        raise DegenerateInput("point is not a vertex of the wedge")
    return i


def normalize_wedge(W: Wedge) -> Wedge:
    """Scale so the longest base edge has length one."""
    longest = float(W.base_edge_lengths().max())
    if longest <= 0:
        raise DegenerateInput("wedge base has no extent")
    return W.scaled(1.0 / longest, normalized=True)


def protruding_wedge(P: Polyhedron, face: int) -> Wedge:
    """Wedge the four neighboring halfspaces carve above a quad face."""
    if not P.convex:
        raise NotConvex("protruding wedges are defined on convex hosts")
    cyc = P.faces[face]
    if len(cyc) != 4:
        raise BadParameter(f"face {face} has {len(cyc)} vertices, need 4")
    side_hs = []
    for t in range(4):
        e = P.edge_index(cyc[t], cyc[(t + 1) % 4])
        nbr = [f for f in P.edge_faces(e) if f != face]
        side_hs.append(P.halfspaces[nbr[0]])
    if len({id(h) for h in side_hs}) != 4:
        raise UnboundedWedge("face does not have four distinct neighbors")
    hf = P.halfspaces[face]
    flipped = HalfSpace(-hf.normal, -hf.offset)
    try:
        poly = from_halfspaces(tuple(side_hs) + (flipped,))
    except UnboundedIntersection:
        raise UnboundedWedge("adjacent planes do not close above the face")
    except GeometryError as exc:
        raise UnboundedWedge(f"wedge assembly failed: {exc}")

    base_pts = P.vertices[list(cyc)]
    n_up = np.asarray(hf.normal, dtype=float)
    heights = poly.vertices @ n_up - hf.offset
    scale = max(1.0, P.diameter())
    on_base = np.abs(heights) <= 1e-8 * scale
    apex_idx = [i for i in range(poly.n_vertices) if not on_base[i]]
    if not 1 <= len(apex_idx) <= 2:
        raise UnboundedWedge(f"wedge top has {len(apex_idx)} vertices, expected 1 or 2")
    if int(on_base.sum()) != 4:
        raise UnboundedWedge("wedge base does not match the host face")
    for x in base_pts:
        _vertex_index(poly, x)

    apex = poly.vertices[apex_idx]
    lateral = np.empty((4, 3))
    for k, x in enumerate(base_pts):
        v = _vertex_index(poly, x)
        partners = [j for i, j in poly.edges if i == v and not on_base[j]]
        partners += [i for i, j in poly.edges if j == v and not on_base[i]]
        if len(partners) != 1:
            raise UnboundedWedge("base vertex is not joined to exactly one top vertex")
        lateral[k] = poly.vertices[partners[0]]
    base_face = next(f for f in range(poly.n_faces)
                     if np.allclose(poly.face_normal(f), -n_up, atol=1e-9))
    return Wedge(base_pts, apex, lateral, float(heights.max()), False, poly, base_face)


def rectangle_deviation(W: Wedge) -> float:
    """Largest deviation of a base angle from a right angle, in radians."""
    return float(np.abs(W.base_angles() - math.pi / 2).max())


def is_good_wedge(W: Wedge) -> bool:
    """Acute dihedrals along every base edge of a rectangular base.

    The rectangle gate is strict (1e-6 angular tolerance); callers wanting
    the relaxed notion report rectangle_deviation alongside.
    """
    if rectangle_deviation(W) > 1e-6:
        return False
    return bool((W.base_dihedrals() < math.pi / 2 - 1e-9).all())


def wedge_top_curvature(W: Wedge) -> float:
    """Smallest angle deficit among the wedge's top vertices.

    For a pyramid tip (single top vertex) this is the apex deficit; callers
    can distinguish that case through W.is_pyramid.
    """
    if W.poly is None:
        raise DegenerateInput("synthetic flat wedge has no top vertex")
    return min(angle_deficit(W.poly, _vertex_index(W.poly, x)) for x in W.apex)


def wedge_R(W: Wedge, base_edge: int) -> float:
    """Hinge condition along base edge (base[i], base[i+1]).

    Rotating the base plane about the opposite edge at unit rate moves the
    two designated vertices along their lateral wedge edges; R sums their
    first-order edge-length contributions. Nonpositive R signals an
    improving perturbation of the host.
    """
    if base_edge not in (0, 1, 2, 3):
        raise BadParameter("base edge index must be 0..3")
    i1, i2 = base_edge, (base_edge + 1) % 4
    j1, j2 = (base_edge + 2) % 4, (base_edge + 3) % 4
    b = np.asarray(W.base, dtype=float)
    hinge_a, hinge_b = b[j1], b[j2]
    axis = hinge_b - hinge_a
    if np.linalg.norm(axis) < 1e-12:
        raise DegenerateEdge("opposite edge has zero length")
    axis = _unit(axis)
    up = W.base_normal()

    total = 0.0
    for i, other in ((i1, i2), (i2, i1)):
        H = b[i]
        d = np.asarray(W.lateral[i], dtype=float) - H
        dn = np.linalg.norm(d)
        if dn < 1e-12:
            raise DegenerateEdge("lateral wedge edge has zero length")
        d = d / dn
        rel = H - hinge_a
        rho = float(np.linalg.norm(rel - (rel @ axis) * axis))
        denom = float(d @ up)
        if abs(denom) < 1e-12:
            raise DegenerateEdge("lateral edge is parallel to the base plane")
        v = d * (rho / denom)
        # base edges at H run to the designated partner and to the
        # hinge-side neighbor
        u1 = _unit(b[other] - H)
        u2 = _unit(b[j2 if i == i1 else j1] - H)
        total += float(np.linalg.norm(v) - v @ (u1 + u2))
    return total


@dataclass(frozen=True)
class PyramidQuad:
    """Planar quadrilateral with the degenerate apex at the origin."""

    p: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.p, dtype=float)
        if p.shape != (4, 2):
            raise BadParameter("need four 2-vectors")
        if (np.linalg.norm(p, axis=1) < 1e-12).any():
            raise CoincidentPoints("a base vertex coincides with the apex")
        if (np.linalg.norm(np.roll(p, -1, axis=0) - p, axis=1) < 1e-12).any():
            raise CoincidentPoints("two consecutive base vertices coincide")
        if _self_intersects(p):
            raise BadParameter("quadrilateral is self-intersecting")
        object.__setattr__(self, "p", p)


def _self_intersects(p: np.ndarray) -> bool:
    def ccw(a, b, c):
        return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])

    def seg_cross(a, b, c, d):
        d1, d2 = ccw(a, b, c), ccw(a, b, d)
        d3, d4 = ccw(c, d, a), ccw(c, d, b)
        return ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0))

    return (seg_cross(p[0], p[1], p[2], p[3]) or
            seg_cross(p[1], p[2], p[3], p[0]))


def pyramid_F(q: PyramidQuad) -> tuple:
    """Per-vertex slide-to-apex values F(1..4) of the flat pyramid."""
    p = q.p
    out = []
    for i in range(4):
        pi = p[i]
        nrm = float(np.linalg.norm(pi))
        total = 1.0
        for j in (i + 1, i - 1):
            diff = pi - p[j % 4]
            dn = float(np.linalg.norm(diff))
            if dn < 1e-12:
                raise CoincidentPoints("repeated base vertex")
            total -= float(diff @ pi) / (nrm * dn)
        out.append(nrm * total)
    return tuple(out)


def _gauge(p: np.ndarray) -> np.ndarray:
    """Longest edge scaled to 1 and p1 rotated onto the positive x-axis."""
    edges = np.linalg.norm(np.roll(p, -1, axis=0) - p, axis=1)
    q = p / edges.max()
    c, s = q[0] / np.linalg.norm(q[0])
    rot = np.array([[c, s], [-s, c]])
    return q @ rot.T


def _residual(p: np.ndarray) -> tuple:
    try:
        F = pyramid_F(PyramidQuad(_gauge(p)))
    except GeometryError:
        return math.inf, (math.inf,) * 4
    r = math.sqrt((F[0] + F[1]) ** 2 + (F[1] + F[2]) ** 2 + (F[2] + F[3]) ** 2)
    return r, F


@dataclass(frozen=True)
class ScanSolution:
    """Gauged quadrilateral whose chain residual dropped below tolerance.

    two_adjacent_acute reports the acute-pair exclusion check; a True here
    is evidence against the descent having stayed meaningful, not a claim
    about the source material. origin_inside records whether the apex
    (the origin) lies inside the quadrilateral; only such quads arise as
    height-zero limits of wedges whose top projects onto the base.
    """

    p: np.ndarray
    residual: float
    maxF: float
    two_adjacent_acute: bool
    origin_inside: bool

    def to_dict(self) -> dict:
        return {"p": [float(f"{x:.12g}") for x in self.p.ravel()],
                "residual": float(f"{self.residual:.12g}"),
                "maxF": float(f"{self.maxF:.12g}"),
                "two_adjacent_acute": self.two_adjacent_acute,
                "origin_inside": self.origin_inside}


@dataclass(frozen=True)
class ScanReport:
    samples: int
    seed: int
    solutions: tuple

    def to_dict(self) -> dict:
        return {"samples": self.samples, "seed": self.seed,
                "solutions": [s.to_dict() for s in self.solutions]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def counterexamples(self, tol: float = 1e-10) -> tuple:
        return tuple(s for s in self.solutions
                     if s.residual < tol and s.maxF > 100.0 * tol)


def _two_adjacent_acute(p: np.ndarray) -> bool:
    angles = []
    for i in range(4):
        u = _unit(p[(i + 1) % 4] - p[i])
        w = _unit(p[(i - 1) % 4] - p[i])
        angles.append(math.acos(float(np.clip(u @ w, -1.0, 1.0))))
    return any(angles[i] < math.pi / 2 and angles[(i + 1) % 4] < math.pi / 2
               for i in range(4))


def _origin_inside(p: np.ndarray) -> bool:
    total = 0.0
    for i in range(4):
        a, b = p[i], p[(i + 1) % 4]
        total += math.atan2(a[0] * b[1] - a[1] * b[0], float(a @ b))
    return abs(total) > math.pi


def _fast_residual(x: list) -> float:
    """Chain residual of the scale-gauged quad, plain floats for speed.

    The chain values are homogeneous of degree one and rotation invariant,
    so gauging here only rescales by the longest edge; the rotation part
    of the gauge is applied once at report time.
    """
    px = (x[0], x[2], x[4], x[6])
    py = (x[1], x[3], x[5], x[7])
    longest = 0.0
    for i in range(4):
        j = (i + 1) % 4
        dx, dy = px[j] - px[i], py[j] - py[i]
        e2 = dx * dx + dy * dy
        if e2 > longest:
            longest = e2
    longest = math.sqrt(longest)
    if longest < 1e-12:
        return math.inf
    inv = 1.0 / longest
    px = tuple(v * inv for v in px)
    py = tuple(v * inv for v in py)

    def ccw(ax, ay, bx, by, cx, cy):
        return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)

    def crosses(a, b, c, d):
        d1 = ccw(px[a], py[a], px[b], py[b], px[c], py[c])
        d2 = ccw(px[a], py[a], px[b], py[b], px[d], py[d])
        d3 = ccw(px[c], py[c], px[d], py[d], px[a], py[a])
        d4 = ccw(px[c], py[c], px[d], py[d], px[b], py[b])
        return ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0))

    if crosses(0, 1, 2, 3) or crosses(1, 2, 3, 0):
        return math.inf
    F = [0.0] * 4
    for i in range(4):
        nrm = math.hypot(px[i], py[i])
        if nrm < 1e-12:
            return math.inf
        total = nrm
        for j in ((i + 1) % 4, (i - 1) % 4):
            dx, dy = px[i] - px[j], py[i] - py[j]
            dn = math.hypot(dx, dy)
            if dn < 1e-12:
                return math.inf
            total -= (dx * px[i] + dy * py[i]) / dn
        F[i] = total
    return math.sqrt((F[0] + F[1]) ** 2 + (F[1] + F[2]) ** 2
                     + (F[2] + F[3]) ** 2)


def cleancond_scan(samples: int, seed: int, tol: float = 1e-10,
                   iterations: int = 100) -> ScanReport:
    """Pattern-search for quadrilaterals satisfying the alternating chain.

    Starts from star-shaped random quads around the origin, descends the
    residual of (F1+F2, F2+F3, F3+F4), and reports every solution below
    tol with its max|F(i)| plus two annotation flags: the acute-pair
    exclusion check and whether the origin stayed inside the quad (the
    descent itself is unconstrained, so solutions can wander outside the
    star-shaped start region). A counterexample to the closing conjecture
    would show residual < tol with max|F| well above tol.
    """
    if samples < 1:
        raise BadParameter("need at least one sample")
    rng = np.random.default_rng(seed)
    sols = []
    for _ in range(samples):
        ang = np.sort(rng.uniform(0.0, 2.0 * math.pi, size=4))
        if np.min(np.diff(ang, append=ang[0] + 2 * math.pi)) < 0.2:
            ang = np.linspace(0, 2 * math.pi, 5)[:4] + rng.uniform(0, 2 * math.pi)
        rad = rng.uniform(0.3, 1.5, size=4)
        p = np.stack([rad * np.cos(ang), rad * np.sin(ang)], axis=1)
        x = list(_gauge(p).ravel())
        best = _fast_residual(x)
        step = 0.1
        for _ in range(iterations):
            improved = False
            for k in range(8):
                for sign in (1.0, -1.0):
                    trial = x.copy()
                    trial[k] += sign * step
                    r = _fast_residual(trial)
                    if r < best:
                        best, x, improved = r, trial, True
            if not improved:
                step *= 0.5
                if step < 1e-13:
                    break
        if best < tol:
            g = _gauge(np.asarray(x).reshape(4, 2))
            r, F = _residual(g)
            sols.append(ScanSolution(g, r, float(max(abs(f) for f in F)),
                                     _two_adjacent_acute(g), _origin_inside(g)))
    sols.sort(key=lambda s: (s.residual, s.maxF))
    return ScanReport(samples, seed, tuple(sols))

"""One-sided shape derivatives of edge length, volume and their ratio.

Three perturbation kinds modify a single halfspace (or append one) and
rebuild the polyhedron:

* face translation along the outward normal, either direction;
* face hinge rotation about one of the face's own edges;
* vertex cut by a plane normal to the spherical-image incircle center.

Derivatives are evaluated analytically from vertex velocities obtained by
linearizing the plane intersections, never by finite differences; the
finite-difference routine exists as an independent cross-check.

Vertex bookkeeping: when the local motion pushes the supporting plane
outward past an exposed vertex of degree k > 3, the vertex keeps a single
degree-3 correspondent and sheds a new lateral edge; when the plane cuts
inward, the vertex splits into k - 2 correspondents joined by new ring
edges. Negatively exposed vertices behave like exposed vertices of the
complement, which swaps the two cases.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT_TOLERANCES
from .errors import (
    BadParameter,
    CombinatorialCollapse,
    DegenerateInput,
    GeometryError,
    NotExposed,
    NotExposedFace,
    NotSemiExposed,
)
from .gauss import (
    EXPOSED,
    NEGATIVELY_EXPOSED,
    complement_gauss_image,
    exposure,
    gauss_image,
    ordered_edges_at_vertex,
    ordered_faces_at_vertex,
    spherical_incircle,
)
from .polyhedron import HalfSpace, Polyhedron, _unit, edge_length, from_halfspaces, melzak_ratio, volume

OUT = "out"
IN = "in"


@dataclass(frozen=True)
class Perturbation:
    """Description of a one-parameter family of halfspace modifications."""

    kind: str                    # face_translate | face_hinge | vertex_truncate
    target: int                  # face index, or vertex index for cuts
    direction: str = OUT         # out | in (ignored by vertex_truncate)
    edge: int | None = None      # hinge edge index into P.edges

    def __post_init__(self):
        if self.kind not in ("face_translate", "face_hinge", "vertex_truncate"):
            raise BadParameter(f"unknown perturbation kind {self.kind!r}")
        if self.direction not in (OUT, IN):
            raise BadParameter(f"direction must be 'out' or 'in', got {self.direction!r}")
        if self.kind == "face_hinge" and self.edge is None:
            raise BadParameter("face_hinge needs an edge index")

    def label(self) -> str:
        if self.kind == "face_translate":
            return f"translate:f={self.target}:{self.direction}"
        if self.kind == "face_hinge":
            return f"hinge:f={self.target}:e={self.edge}:{self.direction}"
        return f"truncate:v={self.target}"


@dataclass(frozen=True)
class VertexVelocity:
    """First-order motion of (a correspondent of) a face vertex."""

    vertex: int
    v: np.ndarray
    u1: np.ndarray
    u2: np.ndarray


@dataclass(frozen=True)
class DerivativeReport:
    perturbation: Perturbation
    E0: float
    V0: float
    M0: float
    dE: float
    dV: float
    dM: float
    per_vertex_dE: dict
    velocities: tuple = field(default=())
    fd_step: float | None = None
    fd_dE: float | None = None
    fd_dV: float | None = None
    fd_dM: float | None = None

    def to_dict(self) -> dict:
        out = {
            "perturbation": self.perturbation.label(),
            "E0": self.E0, "V0": self.V0, "M0": self.M0,
            "dE": self.dE, "dV": self.dV, "dM": self.dM,
            "per_vertex_dE": {str(k): v for k, v in sorted(self.per_vertex_dE.items())},
        }
        if self.fd_step is not None:
            out.update(fd_step=self.fd_step, fd_dE=self.fd_dE,
                       fd_dV=self.fd_dV, fd_dM=self.fd_dM)
        return out


def _ratio_derivative(E: float, V: float, dE: float, dV: float) -> float:
    return (3.0 * E * E / V) * dE - (E ** 3 / V ** 2) * dV


def _line_velocity(n_a, n_b, n_move, ndot, odot, point) -> np.ndarray:
    """Velocity of the intersection of two static planes and a moving one."""
    d = np.cross(n_a, n_b)
    denom = d @ n_move
    if abs(denom) <= 1e-13:
        raise DegenerateInput("vertex slides along a direction parallel to the moving plane")
    rate = odot - point @ ndot
    return d * (rate / denom)


def _local_fan(P: Polyhedron, f: int, v: int) -> tuple:
    """Side faces and neighbor vertices of ``v`` arranged from one edge of
    face ``f`` to the other: ([S_1..S_{k-1}], [nbr_0..nbr_{k-1}]).

    nbr_0 and nbr_{k-1} are the face's own edge neighbors (u1, u2 ends);
    nbr_1..nbr_{k-2} are the lateral edge neighbors, ordered so that the
    lateral edge n lies on the planes of S_n and S_{n+1}.
    """
    faces = ordered_faces_at_vertex(P, v)
    nbrs = ordered_edges_at_vertex(P, v)
    k = faces.index(f)
    faces = faces[k:] + faces[:k]
    nbrs = nbrs[k:] + nbrs[:k]
    return faces[1:], nbrs


def _face_vertex_rate(P: Polyhedron, f: int, v: int, ndot, odot, outward_local: bool,
                      expo: str) -> tuple:
    """(dE contribution, velocities) for one moving vertex of face ``f``."""
    sides, nbrs = _local_fan(P, f, v)
    k = len(sides) + 1
    n_move = P.face_normal(f)
    H = P.vertices[v]
    u1 = _unit(P.vertices[nbrs[0]] - H)
    u2 = _unit(P.vertices[nbrs[-1]] - H)

    single = (k == 3) or (expo == EXPOSED and outward_local) or \
             (expo == NEGATIVELY_EXPOSED and not outward_local)
    if single:
        va = _line_velocity(P.face_normal(sides[0]), P.face_normal(sides[-1]),
                            n_move, ndot, odot, H)
        d = -(va @ (u1 + u2))
        if k == 3:
            w = _unit(P.vertices[nbrs[1]] - H)
            d -= va @ w
        else:
            d += np.linalg.norm(va)  # new lateral edge sprouts from the old vertex
        return d, (VertexVelocity(v, va, u1, u2),)

    vs = []
    for n in range(k - 2):
        vs.append(_line_velocity(P.face_normal(sides[n]), P.face_normal(sides[n + 1]),
                                 n_move, ndot, odot, H))
    d = -(vs[0] @ u1) - (vs[-1] @ u2)
    for n in range(k - 3):
        d += np.linalg.norm(vs[n] - vs[n + 1])
    for n in range(k - 2):
        w = _unit(P.vertices[nbrs[n + 1]] - H)
        d -= vs[n] @ w
    vels = tuple(VertexVelocity(v, va, u1, u2) for va in vs)
    return d, vels


def _uniform_face_exposure(P: Polyhedron, f: int, moving: list) -> str:
    expos = {exposure(P, v) for v in moving}
    if expos == {EXPOSED}:
        return EXPOSED
    if expos == {NEGATIVELY_EXPOSED}:
        return NEGATIVELY_EXPOSED
    raise NotExposedFace(
        f"face {f}: moving vertices are not uniformly exposed or negatively exposed")


def face_translate_derivatives(P: Polyhedron, face: int,
                               direction: str = OUT) -> DerivativeReport:
    """One-sided derivatives for translating a face plane along its normal."""
    if direction not in (OUT, IN):
        raise BadParameter("direction must be 'out' or 'in'")
    cyc = P.faces[face]
    _uniform_face_exposure(P, face, list(cyc))
    odot = 1.0 if direction == OUT else -1.0
    ndot = np.zeros(3)
    outward_local = direction == OUT

    per_vertex = {}
    vels = []
    for v in cyc:
        d, vv = _face_vertex_rate(P, face, v, ndot, odot, outward_local, exposure(P, v))
        per_vertex[v] = float(d)
        vels.extend(vv)
    dE = float(sum(per_vertex.values()))
    dV = float(P.face_area(face) * odot)
    E0, V0 = edge_length(P), volume(P)
    return DerivativeReport(
        Perturbation("face_translate", face, direction), E0, V0, E0 ** 3 / V0,
        dE, dV, _ratio_derivative(E0, V0, dE, dV), per_vertex, tuple(vels))


def face_hinge_derivatives(P: Polyhedron, face: int, hinge_edge: int,
                           direction: str = OUT) -> DerivativeReport:
    """One-sided derivatives for rotating a face plane about one of its edges."""
    if direction not in (OUT, IN):
        raise BadParameter("direction must be 'out' or 'in'")
    i, j = P.edges[hinge_edge]
    cyc = P.faces[face]
    if i not in cyc or j not in cyc:
        raise BadParameter(f"edge {hinge_edge} is not an edge of face {face}")
    moving = [v for v in cyc if v not in (i, j)]
    if not moving:
        raise BadParameter(f"face {face} has no vertices off the hinge edge")
    try:
        _uniform_face_exposure(P, face, moving)
    except NotExposedFace as exc:
        raise NotSemiExposed(str(exc))

    a = P.vertices[i]
    w = _unit(P.vertices[j] - a)
    n = P.face_normal(face)
    ndot = np.cross(w, n)
    c = P.face_centroid(face)
    # plane speed along n at a point y is <a - y, ndot>; out means positive
    # speed over the face interior, probed at the centroid
    sigma = 1.0 if float((a - c) @ ndot) > 0 else -1.0
    if direction == IN:
        sigma = -sigma
    ndot = sigma * ndot
    odot = float(a @ ndot)
    outward_local = direction == OUT

    per_vertex = {}
    vels = []
    for v in moving:
        d, vv = _face_vertex_rate(P, face, v, ndot, odot, outward_local, exposure(P, v))
        per_vertex[v] = float(d)
        vels.extend(vv)
    dE = float(sum(per_vertex.values()))

    # exact first moment of the face about the hinge line
    pts = P.vertices[list(cyc)]
    centroid = pts.mean(axis=0)
    dV = 0.0
    for t in range(len(pts)):
        p, q = pts[t], pts[(t + 1) % len(pts)]
        tri_area = 0.5 * float(np.cross(q - centroid, p - centroid) @ -n)
        tri_c = (centroid + p + q) / 3.0
        dV += tri_area * (odot - tri_c @ ndot)
    E0, V0 = edge_length(P), volume(P)
    return DerivativeReport(
        Perturbation("face_hinge", face, direction, hinge_edge), E0, V0, E0 ** 3 / V0,
        dE, float(dV), _ratio_derivative(E0, V0, dE, float(dV)), per_vertex, tuple(vels))


def vertex_truncate_derivatives(P: Polyhedron, vertex: int) -> DerivativeReport:
    """One-sided derivatives for cutting a vertex with its incircle plane.

    Volume changes at second order only, so dV = 0. Works for exposed
    vertices and, through the complement image, negatively exposed ones.
    """
    expo = exposure(P, vertex)
    if expo == EXPOSED:
        inc = spherical_incircle(gauss_image(P, vertex))
    elif expo == NEGATIVELY_EXPOSED:
        inc = spherical_incircle(complement_gauss_image(P, vertex))
    else:
        raise NotExposed(f"vertex {vertex} is neither exposed nor negatively exposed")
    c = inc.center
    H = P.vertices[vertex]
    nbrs = ordered_edges_at_vertex(P, vertex)
    ws = []
    vs = []
    for u in nbrs:
        w = _unit(P.vertices[u] - H)
        s = abs(w @ c)
        if s <= 1e-12:
            raise DegenerateInput("cut plane is parallel to an incident edge")
        ws.append(w)
        vs.append(w / s)
    k = len(vs)
    dE = 0.0
    for n in range(k):
        dE += np.linalg.norm(vs[n] - vs[(n + 1) % k])
        dE -= np.linalg.norm(vs[n])
    E0, V0 = edge_length(P), volume(P)
    vels = tuple(VertexVelocity(vertex, va, w, w) for va, w in zip(vs, ws))
    return DerivativeReport(
        Perturbation("vertex_truncate", vertex), E0, V0, E0 ** 3 / V0,
        float(dE), 0.0, _ratio_derivative(E0, V0, float(dE), 0.0),
        {vertex: float(dE)}, vels)


def derivatives(P: Polyhedron, pert: Perturbation) -> DerivativeReport:
    """Dispatch to the analytic derivative evaluator for ``pert``."""
    if pert.kind == "face_translate":
        return face_translate_derivatives(P, pert.target, pert.direction)
    if pert.kind == "face_hinge":
        return face_hinge_derivatives(P, pert.target, pert.edge, pert.direction)
    return vertex_truncate_derivatives(P, pert.target)


def _expected_counts(P: Polyhedron, pert: Perturbation) -> tuple:
    """(V, E, F) the perturbed polyhedron must have below its collapse scale."""
    if pert.kind == "vertex_truncate":
        deg = P.vertex_degree(pert.target)
        return P.n_vertices + deg - 1, P.n_edges + deg, P.n_faces + 1
    cyc = P.faces[pert.target]
    if pert.kind == "face_translate":
        moving = list(cyc)
    else:
        i, j = P.edges[pert.edge]
        moving = [v for v in cyc if v not in (i, j)]
    outward = pert.direction == OUT
    dv = 0
    for v in moving:
        k = P.vertex_degree(v)
        if k == 3:
            continue
        expo = exposure(P, v)
        single = (expo == EXPOSED and outward) or (expo == NEGATIVELY_EXPOSED and not outward)
        dv += 1 if single else k - 3
    return P.n_vertices + dv, P.n_edges + dv, P.n_faces


def perturbed_halfspaces(P: Polyhedron, pert: Perturbation, t: float) -> tuple:
    """Halfspace set of the perturbed polyhedron at parameter ``t``."""
    if t < 0:
        raise BadParameter("perturbation parameter must be nonnegative")
    hs = list(P.halfspaces)
    if pert.kind == "face_translate":
        delta = t if pert.direction == OUT else -t
        hs[pert.target] = hs[pert.target].translated(delta)
        return tuple(hs)
    if pert.kind == "face_hinge":
        i, j = P.edges[pert.edge]
        a = P.vertices[i]
        w = _unit(P.vertices[j] - a)
        n = P.face_normal(pert.target)
        ndot = np.cross(w, n)
        c = P.face_centroid(pert.target)
        sigma = 1.0 if float((a - c) @ ndot) > 0 else -1.0
        if pert.direction == IN:
            sigma = -sigma
        hs[pert.target] = hs[pert.target].rotated_about_line(a, w, sigma * t)
        return tuple(hs)
    # vertex cut
    v = pert.target
    if exposure(P, v) != EXPOSED:
        raise NotExposed(f"vertex {v} must be exposed to realize a cut")
    inc = spherical_incircle(gauss_image(P, v))
    offset = float(P.vertices[v] @ inc.center) - t
    hs.append(HalfSpace(inc.center, offset))
    return tuple(hs)


def apply(P: Polyhedron, pert: Perturbation, t: float) -> Polyhedron:
    """Realize the perturbation at parameter ``t`` by a full rebuild.

    Raises CombinatorialCollapse when the rebuilt polyhedron does not have
    the vertex/edge/face counts the first-order picture predicts, which is
    how crossing ``t_max`` manifests.
    """
    if not P.convex:
        raise BadParameter("apply() requires a convex polyhedron")
    try:
        Q = from_halfspaces(perturbed_halfspaces(P, pert, t))
    except GeometryError as exc:
        raise CombinatorialCollapse(f"rebuild failed at t={t}: {exc}")
    if t == 0.0:
        return Q
    expected = _expected_counts(P, pert)
    got = (Q.n_vertices, Q.n_edges, Q.n_faces)
    if got != expected:
        raise CombinatorialCollapse(
            f"counts {got} at t={t}, expected {expected}: crossed a combinatorial boundary")
    # counts alone can coincide across a collapse, so compare the full
    # signature against a build just past zero where the first-order
    # structure is guaranteed to be the realized one
    t_ref = 1e-6 * P.diameter()
    if t > t_ref:
        try:
            Q_ref = from_halfspaces(perturbed_halfspaces(P, pert, t_ref))
        except GeometryError as exc:
            raise CombinatorialCollapse(f"reference rebuild failed: {exc}")
        if Q.combinatorial_signature() != Q_ref.combinatorial_signature():
            raise CombinatorialCollapse(
                f"combinatorics at t={t} differ from the emerging structure")
    return Q


def finite_difference_check(P: Polyhedron, pert: Perturbation,
                            h_sequence=None) -> dict:
    """One-sided difference quotients of E, V, M at the given steps.

    Default steps are {1e-3, 1e-4, 1e-5} times the diameter. Entries map
    h -> (dE, dV, dM) estimates.
    """
    if h_sequence is None:
        diam = P.diameter()
        h_sequence = [s * diam for s in (1e-3, 1e-4, 1e-5)]
    E0, V0 = edge_length(P), volume(P)
    M0 = E0 ** 3 / V0
    out = {}
    for h in h_sequence:
        Q = apply(P, pert, h)
        out[h] = ((edge_length(Q) - E0) / h, (volume(Q) - V0) / h,
                  (melzak_ratio(Q) - M0) / h)
    return out


def with_fd(report: DerivativeReport, P: Polyhedron, h: float | None = None) -> DerivativeReport:
    """Attach a finite-difference cross-check at one step to a report."""
    if h is None:
        h = 1e-5 * P.diameter()
    fd = finite_difference_check(P, report.perturbation, [h])[h]
    return DerivativeReport(report.perturbation, report.E0, report.V0, report.M0,
                            report.dE, report.dV, report.dM, report.per_vertex_dE,
                            report.velocities, h, float(fd[0]), float(fd[1]), float(fd[2]))

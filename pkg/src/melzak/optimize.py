"""Fixed-combinatorics ratio descent and the small-face-count driver.

The local optimizer parameterizes a convex polyhedron by its supporting
planes (two spherical angles plus an offset per face, offsets rescaled by
the start diameter so all coordinates are comparable), descends the log
of the edge-cube-over-volume ratio with finite-difference gradients and a
backtracking line search, and treats any change of combinatorial type as
a hard step boundary.

The sequence driver enumerates the shipped catalog of combinatorial types
with up to eight faces, optimizes each, and carries the best ratio
forward so the per-face-count table is monotone.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .errors import (
    BadParameter,
    GeometryError,
    InvalidStart,
    NumericalBreakdown,
    UnsupportedFaceCount,
)
from .perturbations import (
    IN,
    OUT,
    face_hinge_derivatives,
    face_translate_derivatives,
    vertex_truncate_derivatives,
)
from .polyhedron import (
    HalfSpace,
    Polyhedron,
    from_halfspaces,
    melzak_ratio,
    validate,
)
from .shapes import ngon_pyramid

__all__ = [
    "OptimizeOptions",
    "OptimizeResult",
    "TypeRun",
    "SequenceStep",
    "CatalogType",
    "local_optimize",
    "minimizing_sequence",
    "criticality_report",
    "CriticalityReport",
    "load_catalog",
    "catalog_self_check",
]

EXPECTED_SIMPLE_COUNTS = {4: 1, 5: 1, 6: 2, 7: 5, 8: 14}


@dataclass(frozen=True)
class OptimizeOptions:
    # the default grad_tol clears the central-difference noise floor,
    # about sqrt(3 n_faces) * eps * |log ratio| / fd_step, by ~30x
    max_iters: int = 300
    grad_tol: float = 1e-7
    step_init: float = 0.1
    fd_step: float = 1e-6
    restarts: int = 3
    seed: int = 0

    def __post_init__(self):
        for name in ("max_iters", "grad_tol", "step_init", "fd_step", "restarts"):
            if getattr(self, name) <= 0:
                raise BadParameter(f"{name} must be positive")


@dataclass(frozen=True)
class OptimizeResult:
    polyhedron: Polyhedron
    ratio: float
    iterations: int
    converged: bool
    combinatorics_changed: bool
    trace: tuple


@dataclass(frozen=True)
class _PlaneObjective:
    """Ratio evaluator with the start polyhedron's combinatorics frozen.

    Vertex positions come from batched 3x3 solves against each vertex's
    first three incident planes, so the map stays smooth across the walls
    where the true intersection would change type; wall crossings are
    caught separately by rebuilding at accepted steps.

    Offsets are measured from the anchor polyhedron's vertex centroid, not
    the world origin. The plane solves lose roughly offset/diameter digits,
    so a body that sits (or descends to sit) far off-center relative to its
    size would otherwise poison both the ratio and the rebuild check.
    """

    faces: tuple
    edge_idx: np.ndarray
    vertex_planes: np.ndarray
    scale: float
    origin: np.ndarray

    @classmethod
    def for_polyhedron(cls, P: Polyhedron) -> "_PlaneObjective":
        incident = [[] for _ in range(P.n_vertices)]
        for f, cyc in enumerate(P.faces):
            for v in cyc:
                incident[v].append(f)
        planes = np.array([sorted(fs)[:3] for fs in incident], dtype=int)
        return cls(P.faces, np.array(P.edges, dtype=int), planes, P.diameter(),
                   P.vertices.mean(axis=0))

    def pack(self, P: Polyhedron) -> np.ndarray:
        z = np.empty(3 * P.n_faces)
        for f, h in enumerate(P.halfspaces):
            n = h.normal
            z[3 * f] = math.acos(float(np.clip(n[2], -1.0, 1.0)))
            z[3 * f + 1] = math.atan2(float(n[1]), float(n[0]))
            z[3 * f + 2] = (h.offset - float(n @ self.origin)) / self.scale
        return z

    def planes(self, z: np.ndarray) -> tuple:
        phi, lam, off = z[0::3], z[1::3], z[2::3]
        sp = np.sin(phi)
        normals = np.stack([sp * np.cos(lam), sp * np.sin(lam), np.cos(phi)], axis=1)
        return normals, off * self.scale

    def positions(self, z: np.ndarray) -> np.ndarray | None:
        normals, offsets = self.planes(z)
        A = normals[self.vertex_planes]
        b = offsets[self.vertex_planes]
        try:
            return np.linalg.solve(A, b[..., None])[..., 0]
        except np.linalg.LinAlgError:
            return None

    def ratio(self, z: np.ndarray) -> float:
        pts = self.positions(z)
        if pts is None or not np.isfinite(pts).all():
            return math.inf
        d = pts[self.edge_idx[:, 0]] - pts[self.edge_idx[:, 1]]
        e = float(np.sqrt((d * d).sum(axis=1)).sum())
        normals, offsets = self.planes(z)
        vol = 0.0
        for f, cyc in enumerate(self.faces):
            p = pts[list(cyc)]
            cr = np.cross(p, np.roll(p, -1, axis=0)).sum(axis=0)
            vol += float(offsets[f]) * 0.5 * float(cr @ normals[f])
        vol /= 3.0
        if vol <= 0 or not math.isfinite(e):
            return math.inf
        return e ** 3 / vol

    def rebuild(self, z: np.ndarray) -> Polyhedron | None:
        normals, offsets = self.planes(z)
        try:
            Q = from_halfspaces([HalfSpace(n, o) for n, o in zip(normals, offsets)])
        except GeometryError:
            return None
        # translate back to the world frame; a plain shift of vertices and
        # plane offsets keeps the well-conditioned centered reconstruction
        shifted = tuple(HalfSpace(h.normal, h.offset + float(h.normal @ self.origin))
                        for h in Q.halfspaces)
        return Polyhedron(Q.vertices + self.origin, Q.faces, shifted, Q.convex, Q.edges)


def _log_ratio(obj: _PlaneObjective, z: np.ndarray) -> float:
    m = obj.ratio(z)
    return math.log(m) if math.isfinite(m) and m > 0 else math.inf


def _fd_gradient(obj: _PlaneObjective, z: np.ndarray, h: float) -> np.ndarray:
    g = np.empty(len(z))
    for j in range(len(z)):
        zp, zm = z.copy(), z.copy()
        zp[j] += h
        zm[j] -= h
        fp, fm = _log_ratio(obj, zp), _log_ratio(obj, zm)
        if not (math.isfinite(fp) and math.isfinite(fm)):
            raise NumericalBreakdown("ratio became non-finite near the iterate")
        g[j] = (fp - fm) / (2.0 * h)
    return g


def local_optimize(P0: Polyhedron, opts: OptimizeOptions = OptimizeOptions()) -> OptimizeResult:
    """Monotone ratio descent over supporting-plane parameters.

    Steps that would change the combinatorial type are rejected and the
    step size halved; if the line search then stalls against such a step,
    or stalls while the iterate carries a feature too small for the
    finite-difference gradient to resolve (an edge shorter than a few
    gradient steps), the result carries combinatorics_changed=True. A
    stall with no boundary cause re-anchors the parameterization at the
    current iterate and retries before stopping. The gradient tolerance
    applies to the gradient of log(ratio), making the stop test scale
    invariant.
    """
    if not P0.convex or not validate(P0).ok:
        raise InvalidStart("optimization needs a valid convex start")
    obj = _PlaneObjective.for_polyhedron(P0)
    sig0 = P0.combinatorial_signature()
    z = obj.pack(P0)
    f = _log_ratio(obj, z)
    if not math.isfinite(f):
        raise NumericalBreakdown("ratio is non-finite at the start")

    current = P0
    trace = [(0, math.exp(f))]
    converged = False
    boundary_stall = False
    iters = 0
    alpha = opts.step_init
    prev_z = prev_g = None
    fresh_anchor = True
    while iters < opts.max_iters:
        g = _fd_gradient(obj, z, opts.fd_step)
        gnorm = float(np.linalg.norm(g))
        if gnorm < opts.grad_tol:
            converged = True
            break
        if prev_g is not None:
            dz, dg = z - prev_z, g - prev_g
            denom = float(dg @ dg)
            if denom > 0:
                alpha = abs(float(dz @ dg)) / denom
        alpha = float(np.clip(alpha, 1e-12, 10.0))
        prev_z, prev_g = z, g

        accepted = None
        hit_boundary = False
        a = alpha
        while a * gnorm > 1e-14:
            zt = z - a * g
            ft = _log_ratio(obj, zt)
            if ft < f - 1e-4 * a * gnorm * gnorm:
                rebuilt = obj.rebuild(zt)
                if (rebuilt is not None
                        and rebuilt.combinatorial_signature() == sig0
                        and abs(melzak_ratio(rebuilt) - math.exp(ft))
                        <= 1e-9 * math.exp(ft)):
                    accepted = (zt, ft, rebuilt)
                    break
                hit_boundary = True
            a *= 0.5
        if accepted is None:
            shortest = min(float(np.linalg.norm(current.vertices[i] - current.vertices[j]))
                           for i, j in current.edges)
            blind = 50.0 * opts.fd_step * current.diameter()
            if hit_boundary or shortest < blind:
                boundary_stall = True
                break
            if fresh_anchor:
                break
            # the anchor frame (centroid and scale of the body the step
            # parameters were packed against) has gone stale; recut it at
            # the current iterate and retry before giving up
            obj = _PlaneObjective.for_polyhedron(current)
            z = obj.pack(current)
            f = _log_ratio(obj, z)
            if not math.isfinite(f):
                break
            alpha = opts.step_init
            prev_z = prev_g = None
            fresh_anchor = True
            continue
        z, f, current = accepted
        fresh_anchor = False
        alpha = a
        iters += 1
        trace.append((iters, math.exp(f)))

    return OptimizeResult(current, melzak_ratio(current), iters, converged,
                          boundary_stall, tuple(trace))


# -- combinatorial catalog -------------------------------------------------

@dataclass(frozen=True)
class CatalogType:
    name: str
    faces: int
    simple: bool
    face_degrees: tuple
    signature: tuple
    halfspaces: tuple
    pyramid_base: int = 0

    def build(self) -> Polyhedron:
        return from_halfspaces([HalfSpace(np.array(row[:3]), row[3])
                                for row in self.halfspaces])


def _as_signature(sig) -> tuple:
    return (int(sig[0]), int(sig[1]), int(sig[2]),
            tuple(int(x) for x in sig[3]), tuple(int(x) for x in sig[4]))


def load_catalog() -> tuple:
    """Combinatorial types with four to eight faces shipped with the package."""
    with resources.files("melzak").joinpath("data/polytope_types.json").open() as fh:
        raw = json.load(fh)
    out = []
    for entry in raw["types"]:
        out.append(CatalogType(
            name=entry["name"],
            faces=int(entry["faces"]),
            simple=bool(entry["simple"]),
            face_degrees=tuple(int(d) for d in entry["face_degrees"]),
            signature=_as_signature(entry["signature"]),
            halfspaces=tuple(tuple(float(x) for x in row) for row in entry["halfspaces"]),
            pyramid_base=int(entry.get("pyramid_base", 0)),
        ))
    return tuple(out)


def _incidence_graph(P: Polyhedron):
    import networkx as nx

    G = nx.Graph()
    for v in range(P.n_vertices):
        G.add_node(("v", v), kind="v", deg=P.vertex_degree(v))
    for f, cyc in enumerate(P.faces):
        G.add_node(("f", f), kind="f", deg=len(cyc))
        for v in cyc:
            G.add_edge(("f", f), ("v", v))
    return G


def _isomorphic(P: Polyhedron, Q: Polyhedron) -> bool:
    import networkx as nx

    if P.combinatorial_signature() != Q.combinatorial_signature():
        return False
    match = nx.algorithms.isomorphism.categorical_node_match(["kind", "deg"], [None, 0])
    return nx.is_isomorphic(_incidence_graph(P), _incidence_graph(Q), node_match=match)


def catalog_self_check() -> list:
    """Rebuild every catalog entry and cross-check the enumeration.

    Returns a list of issue strings; an empty list means the shipped data
    matches its own metadata, every polyhedron closes up with Euler
    characteristic two, the simplicity flags are right, and the per-count
    simple types are pairwise non-isomorphic with the expected totals.
    """
    issues = []
    catalog = load_catalog()
    built = []
    for t in catalog:
        try:
            P = t.build()
        except GeometryError as exc:
            issues.append(f"{t.name}: does not rebuild ({exc})")
            continue
        built.append((t, P))
        if P.n_faces != t.faces:
            issues.append(f"{t.name}: rebuilt with {P.n_faces} faces, expected {t.faces}")
        if P.n_vertices - P.n_edges + P.n_faces != 2:
            issues.append(f"{t.name}: Euler characteristic is off")
        simple = all(P.vertex_degree(v) == 3 for v in range(P.n_vertices))
        if simple != t.simple:
            issues.append(f"{t.name}: simplicity flag mismatch")
        if _as_signature(P.combinatorial_signature()) != t.signature:
            issues.append(f"{t.name}: stored signature mismatch")
        if tuple(sorted(len(c) for c in P.faces)) != tuple(sorted(t.face_degrees)):
            issues.append(f"{t.name}: face degree mismatch")
        if t.pyramid_base and sorted(len(c) for c in P.faces) != \
                [3] * t.pyramid_base + [t.pyramid_base]:
            issues.append(f"{t.name}: not a {t.pyramid_base}-gon pyramid")
    for k, want in EXPECTED_SIMPLE_COUNTS.items():
        got = sum(1 for t, _ in built if t.simple and t.faces == k)
        if got != want:
            issues.append(f"{k} faces: {got} simple types, enumeration says {want}")
    for (ta, Pa), (tb, Pb) in itertools.combinations(built, 2):
        if ta.faces == tb.faces and _isomorphic(Pa, Pb):
            issues.append(f"{ta.name} and {tb.name} are isomorphic")
    return issues


# -- sequence driver -------------------------------------------------------

@dataclass(frozen=True)
class TypeRun:
    name: str
    faces: int
    simple: bool
    method: str
    result: OptimizeResult


@dataclass(frozen=True)
class SequenceStep:
    faces: int
    best: OptimizeResult
    best_name: str
    carried: bool
    tie: bool
    per_type: tuple = field(default=())


def _vertex_key(P: Polyhedron) -> tuple:
    rows = np.round(P.vertices, 9)
    order = np.lexsort((rows[:, 2], rows[:, 1], rows[:, 0]))
    return tuple(rows[order].ravel())


def _restart_key(res: OptimizeResult) -> tuple:
    return (round(res.ratio, 9), _vertex_key(res.polyhedron))


def _jittered_start(t: CatalogType, rng: np.random.Generator) -> Polyhedron:
    reference = t.build()
    sig = reference.combinatorial_signature()
    amp = 0.12
    for _ in range(6):
        hs = []
        for h in reference.halfspaces:
            n = h.normal + rng.normal(scale=amp, size=3)
            hs.append(HalfSpace(n / np.linalg.norm(n),
                                h.offset * (1.0 + rng.uniform(-amp, amp))))
        try:
            P = from_halfspaces(hs)
        except GeometryError:
            amp *= 0.5
            continue
        if P.combinatorial_signature() == sig:
            return P
        amp *= 0.5
    return reference


def _optimal_pyramid(n: int, opts: OptimizeOptions) -> OptimizeResult:
    """Best regular n-gon pyramid, one height parameter by scale symmetry."""
    from scipy.optimize import minimize_scalar

    def m_of(h: float) -> float:
        return melzak_ratio(ngon_pyramid(n, 1.0, h))

    res = minimize_scalar(m_of, bounds=(0.05, 10.0), method="bounded",
                          options={"xatol": 1e-12})
    P = ngon_pyramid(n, 1.0, float(res.x))
    ratio = melzak_ratio(P)
    return OptimizeResult(P, ratio, int(res.nfev), bool(res.success), False,
                          ((0, ratio),))


def _optimize_type(t: CatalogType, opts: OptimizeOptions,
                   rng: np.random.Generator) -> TypeRun:
    if t.pyramid_base:
        return TypeRun(t.name, t.faces, t.simple, "parametric",
                       _optimal_pyramid(t.pyramid_base, opts))
    starts = [t.build()]
    starts += [_jittered_start(t, rng) for _ in range(opts.restarts - 1)]
    best = None
    for P in starts:
        res = local_optimize(P, opts)
        if best is None or _restart_key(res) < _restart_key(best):
            best = res
    return TypeRun(t.name, t.faces, t.simple, "descent", best)


def minimizing_sequence(max_faces: int,
                        opts: OptimizeOptions = OptimizeOptions()) -> tuple:
    """Best ratio per face count from four up to max_faces, carried forward.

    Every catalog type with k faces is optimized (pyramid types through
    their one-parameter family, the rest by plane descent with restarts);
    step k records the best over face counts up to k. Ties against the
    carried value within 1e-9 relative keep the smaller face count and
    set the tie flag.
    """
    if not 4 <= max_faces <= 8:
        raise UnsupportedFaceCount("face counts outside 4..8 are not cataloged")
    catalog = load_catalog()
    rng = np.random.default_rng(opts.seed)
    steps = []
    carry = None
    carry_name = ""
    for k in range(4, max_faces + 1):
        runs = tuple(_optimize_type(t, opts, rng)
                     for t in catalog if t.faces == k)
        best_run = min(runs, key=lambda r: _restart_key(r.result))
        tie = False
        carried = False
        if carry is None or best_run.result.ratio < carry.ratio * (1.0 - 1e-9):
            carry, carry_name = best_run.result, best_run.name
        else:
            carried = True
            tie = abs(best_run.result.ratio - carry.ratio) <= 1e-9 * carry.ratio
        steps.append(SequenceStep(k, carry, carry_name, carried, tie, runs))
    return tuple(steps)


# -- first-order criticality ----------------------------------------------

@dataclass(frozen=True)
class CriticalityReport:
    entries: dict
    minimum: float
    is_critical: bool

    def to_dict(self) -> dict:
        return {"entries": {k: float(f"{v:.12g}") for k, v in self.entries.items()},
                "minimum": float(f"{self.minimum:.12g}"),
                "is_critical": self.is_critical}


def criticality_report(P: Polyhedron, tol: float = 1e-8) -> CriticalityReport:
    """First-order ratio change of every elementary perturbation.

    Covers both directions of every face translation, both directions of
    every hinge of a face about one of its boundary edges, and every
    vertex truncation. A critical candidate has minimum dM >= -tol.
    """
    entries = {}
    for f in range(P.n_faces):
        for dirn in (OUT, IN):
            entries[f"translate:f={f}:{dirn}"] = face_translate_derivatives(P, f, dirn).dM
    for f, cyc in enumerate(P.faces):
        k = len(cyc)
        for t in range(k):
            e = P.edge_index(cyc[t], cyc[(t + 1) % k])
            for dirn in (OUT, IN):
                try:
                    rep = face_hinge_derivatives(P, f, e, dirn)
                except GeometryError:
                    continue
                entries[f"hinge:f={f}:e={e}:{dirn}"] = rep.dM
    for v in range(P.n_vertices):
        try:
            entries[f"truncate:v={v}"] = vertex_truncate_derivatives(P, v).dM
        except GeometryError:
            continue
    minimum = min(entries.values())
    return CriticalityReport(entries, minimum, minimum >= -tol)

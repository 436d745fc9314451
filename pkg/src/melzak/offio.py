"""Minimal OFF mesh reader/writer.

Parsing accepts blank lines and ``#`` comments, reports errors with line
numbers, and derives supporting halfspaces from the face cycles. Emission
prints 12 significant digits, so emit/parse round-trips preserve coordinates
to that precision.
"""
from __future__ import annotations

import numpy as np

from .errors import NonManifold, ParseError
from .polyhedron import HalfSpace, Polyhedron, _edges_from_faces


def _lines_with_numbers(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def parse_off(text: str) -> Polyhedron:
    """Parse OFF text into a Polyhedron; convexity is detected, not assumed."""
    it = _lines_with_numbers(text)
    try:
        lineno, header = next(it)
    except StopIteration:
        raise ParseError("line 1: empty input")
    if header != "OFF":
        raise ParseError(f"line {lineno}: expected 'OFF' header, got {header!r}")

    try:
        lineno, counts = next(it)
    except StopIteration:
        raise ParseError("unexpected end of input: missing counts line")
    parts = counts.split()
    if len(parts) != 3:
        raise ParseError(f"line {lineno}: counts line needs 3 integers")
    try:
        nv, nf, _ne = (int(p) for p in parts)
    except ValueError:
        raise ParseError(f"line {lineno}: counts line needs 3 integers")
    if nv < 4 or nf < 4:
        raise ParseError(f"line {lineno}: need at least 4 vertices and 4 faces")

    verts = np.zeros((nv, 3))
    for k in range(nv):
        try:
            lineno, line = next(it)
        except StopIteration:
            raise ParseError(f"unexpected end of input: vertex {k} missing")
        parts = line.split()
        if len(parts) != 3:
            raise ParseError(f"line {lineno}: vertex needs 3 coordinates")
        try:
            verts[k] = [float(p) for p in parts]
        except ValueError:
            raise ParseError(f"line {lineno}: bad float in vertex")

    faces = []
    for k in range(nf):
        try:
            lineno, line = next(it)
        except StopIteration:
            raise ParseError(f"unexpected end of input: face {k} missing")
        parts = line.split()
        try:
            vals = [int(p) for p in parts]
        except ValueError:
            raise ParseError(f"line {lineno}: bad integer in face")
        if not vals or vals[0] != len(vals) - 1:
            raise ParseError(f"line {lineno}: face count prefix mismatch")
        cyc = vals[1:]
        if len(cyc) < 3:
            raise ParseError(f"line {lineno}: face needs at least 3 vertices")
        if any(i < 0 or i >= nv for i in cyc):
            raise ParseError(f"line {lineno}: vertex index out of range")
        if len(set(cyc)) != len(cyc):
            raise ParseError(f"line {lineno}: repeated vertex in face")
        faces.append(tuple(cyc))

    edges = _edges_from_faces(faces)  # raises NonManifold with the bad edge

    halfspaces = []
    for cyc in faces:
        pts = verts[list(cyc)]
        # Newell normal: robust to slight non-planarity
        nrm = np.zeros(3)
        for t in range(len(pts)):
            a, b = pts[t], pts[(t + 1) % len(pts)]
            nrm += np.cross(a, b)
        norm = np.linalg.norm(nrm)
        if norm <= 1e-14:
            raise ParseError("degenerate face with zero area")
        nrm /= norm
        halfspaces.append(HalfSpace(nrm, float(nrm @ pts.mean(axis=0))))

    scale = max(float(np.abs(verts).max()), 1e-12)
    N = np.array([h.normal for h in halfspaces])
    b = np.array([h.offset for h in halfspaces])
    convex = bool((verts @ N.T - b <= 1e-9 * scale).all())
    return Polyhedron(verts, tuple(faces), tuple(halfspaces), convex, edges)


def emit_off(P: Polyhedron) -> str:
    """Serialize to OFF with 12-significant-digit coordinates."""
    out = ["OFF", f"{P.n_vertices} {P.n_faces} {P.n_edges}"]
    for v in P.vertices:
        out.append(" ".join(f"{x:.12g}" for x in v))
    for cyc in P.faces:
        out.append(" ".join(str(x) for x in (len(cyc), *cyc)))
    return "\n".join(out) + "\n"


def read_off(path) -> Polyhedron:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_off(fh.read())


def write_off(path, P: Polyhedron) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(emit_off(P))

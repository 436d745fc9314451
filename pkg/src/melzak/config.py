"""Centralized numerical tolerances.

Length-like tolerances are relative: they are multiplied by the polyhedron
diameter (or another named scale) at the point of use. Angular and unit-norm
tolerances are absolute.
"""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    unit_norm: float = 1e-12        # |normal| - 1 accepted drift
    plane_triple: float = 1e-10     # determinant cutoff for 3-plane solves
    containment: float = 1e-9       # x scale: halfspace feasibility slack
    dedup: float = 1e-9             # x scale: vertex merge radius
    coplanarity: float = 1e-9       # x scale: vertex-on-face-plane slack
    convexity: float = 1e-9         # x scale: convexity containment slack
    exposure: float = 1e-9          # rad: dihedral margin around pi
    tangency: float = 1e-9          # rad: incircle side-tangency slack
    witness_margin: float = 1e-10   # improving perturbations need dM below -this

    def scaled(self, scale: float) -> "Tolerances":
        """Absolute copies of the relative entries for a given length scale."""
        return Tolerances(
            unit_norm=self.unit_norm,
            plane_triple=self.plane_triple,
            containment=self.containment * scale,
            dedup=self.dedup * scale,
            coplanarity=self.coplanarity * scale,
            convexity=self.convexity * scale,
            exposure=self.exposure,
            tangency=self.tangency,
            witness_margin=self.witness_margin,
        )


DEFAULT_TOLERANCES = Tolerances()

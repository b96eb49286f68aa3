"""Numerical checks of the charge/flux commutator identities.

Signed surface/loop crossings, point-charge flux through triangulated surfaces,
the excised flux-gradient line integral and the resulting commutator
normalisations.
"""
from .commutator import (
    CommutatorReport,
    UncertaintyCheck,
    delta_kernel_integral,
    evaluate_commutators,
    transverse_integral,
    uncertainty_bound,
)
from .crossings import Crossing, segment_triangle_intersection, signed_crossings
from .flux import FluxSample, flux_jump_experiment, point_flux, solid_angle_triangle
from .geom import OrientedLoop, TriSurface, boundary_of, deform_interior, hopf_scene
from .linkoracle import gauss_linking

__version__ = "0.1.0"

__all__ = [
    "CommutatorReport",
    "Crossing",
    "FluxSample",
    "OrientedLoop",
    "TriSurface",
    "UncertaintyCheck",
    "boundary_of",
    "deform_interior",
    "delta_kernel_integral",
    "evaluate_commutators",
    "flux_jump_experiment",
    "gauss_linking",
    "hopf_scene",
    "point_flux",
    "segment_triangle_intersection",
    "signed_crossings",
    "solid_angle_triangle",
    "transverse_integral",
    "uncertainty_bound",
]

"""Flux of a point charge through a triangulated surface.

In Gaussian units a unit charge emits total flux ``4 pi``, and its flux through an
oriented surface equals the signed solid angle the surface subtends.  Each
triangle contributes a closed-form solid angle, so the flux carries no
quadrature error.  The sign is chosen so that a charge on the side opposite the
normal (field along the normal) gives positive flux.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .crossings import Crossing
from .errors import PointOnSurface
from .extrapolation import richardson
from .geom import TOL_GEOM, TriSurface, point_segment_distance


@dataclass(frozen=True)
class FluxSample:
    y: np.ndarray
    phi: float


def solid_angles(y, corners) -> np.ndarray:
    """Signed solid angles of triangles ``corners`` (shape ``(m, 3, 3)``) seen from ``y``.

    Van Oosterom & Strackee:
    ``tan(omega / 2) = [a b c] / (|a||b||c| + (a.b)|c| + (b.c)|a| + (c.a)|b|)``.
    No on-surface check.
    """
    r = np.asarray(corners, float) - np.asarray(y, float)
    a, b, c = r[:, 0], r[:, 1], r[:, 2]
    la, lb, lc = (np.linalg.norm(v, axis=1) for v in (a, b, c))
    det = np.einsum("ij,ij->i", a, np.cross(b, c))
    den = (la * lb * lc
           + np.einsum("ij,ij->i", a, b) * lc
           + np.einsum("ij,ij->i", b, c) * la
           + np.einsum("ij,ij->i", c, a) * lb)
    return 2.0 * np.arctan2(det, den)


def distance_to_triangles(y, corners) -> np.ndarray:
    """Euclidean distance from ``y`` to each closed triangle."""
    y = np.asarray(y, float)
    corners = np.asarray(corners, float)
    p0, p1, p2 = corners[:, 0], corners[:, 1], corners[:, 2]
    n = np.cross(p1 - p0, p2 - p0)
    nhat = n / np.linalg.norm(n, axis=1)[:, None]
    d = np.einsum("ij,ij->i", y - p0, nhat)
    x = y - d[:, None] * nhat
    inside = np.ones(len(corners), dtype=bool)
    for u, v in ((p0, p1), (p1, p2), (p2, p0)):
        inside &= np.einsum("ij,ij->i", np.cross(v - u, x - u), nhat) >= 0
    edge = np.min([point_segment_distance(y, u, v) for u, v in ((p0, p1), (p1, p2), (p2, p0))], axis=0)
    return np.where(inside, np.abs(d), edge)


def _check_off_surface(y, corners, tol=TOL_GEOM):
    corners = np.asarray(corners, float)
    nhat = np.cross(corners[:, 1] - corners[:, 0], corners[:, 2] - corners[:, 0])
    nhat /= np.linalg.norm(nhat, axis=1)[:, None]
    plane = np.abs(np.einsum("ij,ij->i", np.asarray(y, float) - corners[:, 0], nhat))
    near = np.flatnonzero(plane <= tol)
    if len(near) and np.any(distance_to_triangles(y, corners[near]) <= tol):
        raise PointOnSurface(f"probe {np.asarray(y).tolist()} lies on the surface")


def solid_angle_triangle(y, tri) -> float:
    """Signed solid angle of one oriented triangle seen from ``y``."""
    corners = np.asarray(tri, float)[None]
    _check_off_surface(y, corners)
    return float(solid_angles(y, corners)[0])


def total_solid_angle(y, vertices, triangles) -> float:
    """Summed signed solid angle of an arbitrary (possibly closed) triangle mesh."""
    corners = np.asarray(vertices, float)[np.asarray(triangles)]
    _check_off_surface(y, corners)
    return float(np.sum(solid_angles(y, corners)))


def point_flux(surface: TriSurface, y, q: float = 1.0) -> FluxSample:
    """Flux through ``surface`` of a point charge ``q`` located at ``y``."""
    y = np.asarray(y, float)
    corners = surface.corners
    _check_off_surface(y, corners)
    return FluxSample(y, float(q * np.sum(solid_angles(y, corners))))


@dataclass(frozen=True)
class FluxJumpRow:
    h: float
    phi_below: float
    phi_above: float

    @property
    def jump(self) -> float:
        return self.phi_above - self.phi_below


def flux_jump_table(surface: TriSurface, crossing: Crossing, q: float, h_sequence) -> list[FluxJumpRow]:
    """Flux with the charge a distance ``h`` below and above the surface at ``crossing``.

    "Below" is against the local triangle normal; the charge moving from below
    to above crosses the surface along the normal.
    """
    nhat = surface.unit_normals[crossing.triangle_index]
    p = np.asarray(crossing.point, float)
    rows = []
    for h in h_sequence:
        h = float(h)
        if h <= TOL_GEOM:
            raise ValueError("every h must exceed the geometric tolerance")
        below = point_flux(surface, p - h * nhat, q).phi
        above = point_flux(surface, p + h * nhat, q).phi
        rows.append(FluxJumpRow(h, below, above))
    return rows


def flux_jump_experiment(surface: TriSurface, crossing: Crossing, q: float, h_sequence):
    """Flux change as a charge ``q`` steps through the surface along its normal.

    Returns ``(jump_estimates, extrapolated)``; the jumps tend to ``-4 pi q``.
    """
    rows = flux_jump_table(surface, crossing, q, h_sequence)
    jumps = [r.jump for r in rows]
    return jumps, richardson([r.h for r in rows], jumps).value

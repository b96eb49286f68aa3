"""Signed crossings of an oriented loop with an oriented triangle surface.

The delta-function kernel integrated over a surface and around a loop localises
on the points where the loop pierces the surface; each piercing contributes the
sign of the angle between the loop tangent and the surface normal.  Triangles
and segments are flat, so the local picture is exact: every crossing is found
by a segment/triangle test and weighted by ``sign((b - a) . n)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateGeometry, DegenerateIncidence
from .geom import TOL_GEOM, OrientedLoop, TriSurface, segment_segment_distance

NONE, CROSSING, DEGENERATE = 0, 1, 2


@dataclass(frozen=True)
class Crossing:
    point: np.ndarray
    triangle_index: int
    loop_arc_parameter: float
    sign: int
    segment_index: int = -1
    segment_fraction: float = float("nan")


def _edge_distances(x, p0, p1, p2, nhat):
    """Signed in-plane distances of ``x`` to the three edge lines, positive inside."""
    out = []
    for u, v in ((p0, p1), (p1, p2), (p2, p0)):
        e = v - u
        num = np.einsum("ij,ij->i", np.cross(e, x - u), nhat)
        out.append(num / np.linalg.norm(e, axis=1))
    return np.stack(out, axis=1)


def _coplanar_touches(a, b, p0, p1, p2, nhat, tol):
    """For in-plane segments: does the segment come within ``tol`` of the triangle?"""
    ea = _edge_distances(a, p0, p1, p2, nhat).min(axis=1)
    eb = _edge_distances(b, p0, p1, p2, nhat).min(axis=1)
    touch = (ea >= -tol) | (eb >= -tol)
    for u, v in ((p0, p1), (p1, p2), (p2, p0)):
        touch |= segment_segment_distance(a, b, u, v) <= tol
    return touch


def classify(a, b, p0, p1, p2, tol: float = TOL_GEOM):
    """Classify segment/triangle pairs (arrays of shape ``(m, 3)``).

    Returns ``(status, s, point, sign)``.  ``status`` is ``NONE``, ``CROSSING`` or
    ``DEGENERATE``; the other outputs are meaningful only for crossings.
    """
    a, b, p0, p1, p2 = (np.atleast_2d(np.asarray(v, float)) for v in (a, b, p0, p1, p2))
    n = np.cross(p1 - p0, p2 - p0)
    nhat = n / np.linalg.norm(n, axis=1)[:, None]
    da = np.einsum("ij,ij->i", a - p0, nhat)
    db = np.einsum("ij,ij->i", b - p0, nhat)
    near_a = np.abs(da) <= tol
    near_b = np.abs(db) <= tol
    straddle = ((da > tol) & (db < -tol)) | ((da < -tol) & (db > tol))
    single = near_a ^ near_b
    coplanar = near_a & near_b

    with np.errstate(divide="ignore", invalid="ignore"):
        s = np.where(straddle, da / (da - db), np.where(near_a, 0.0, 1.0))
    point = a + s[:, None] * (b - a)
    emin = _edge_distances(point, p0, p1, p2, nhat).min(axis=1)

    status = np.full(len(a), NONE, dtype=np.int8)
    status[straddle & (emin > tol)] = CROSSING
    status[straddle & (np.abs(emin) <= tol)] = DEGENERATE
    # an endpoint resting on the closed triangle
    status[single & (emin >= -tol)] = DEGENERATE
    if np.any(coplanar):
        idx = np.flatnonzero(coplanar)
        hit = _coplanar_touches(a[idx], b[idx], p0[idx], p1[idx], p2[idx], nhat[idx], tol)
        status[idx[hit]] = DEGENERATE
    sign = np.sign(np.einsum("ij,ij->i", b - a, nhat)).astype(int)
    return status, s, point, sign


def segment_triangle_intersection(a, b, tri, tol: float = TOL_GEOM):
    """Transversal crossing of the open segment ``[a, b]`` with the open triangle ``tri``.

    Returns ``(point, s, sign)`` with ``point = a + s (b - a)``, or ``None``.
    Raises ``DegenerateIncidence`` for in-plane, edge, vertex or endpoint contact.
    """
    a, b = np.asarray(a, float), np.asarray(b, float)
    p0, p1, p2 = (np.asarray(p, float) for p in tri)
    if np.linalg.norm(b - a) <= tol:
        raise DegenerateGeometry("zero-length segment")
    if 0.5 * np.linalg.norm(np.cross(p1 - p0, p2 - p0)) <= tol**2:
        raise DegenerateGeometry("zero-area triangle")
    status, s, point, sign = classify(a, b, p0, p1, p2, tol)
    if status[0] == DEGENERATE:
        raise DegenerateIncidence("segment touches the triangle non-transversally")
    if status[0] == NONE:
        return None
    return point[0], float(s[0]), int(sign[0])


def _candidate_pairs(surface: TriSurface, loop: OrientedLoop, tol: float):
    """Segment/triangle pairs whose endpoints are not strictly on one side of the plane."""
    a, b = loop.segments
    corners = surface.corners
    nhat = surface.unit_normals
    offset = np.einsum("ij,ij->i", corners[:, 0], nhat)
    da = a @ nhat.T - offset[None, :]
    db = b @ nhat.T - offset[None, :]
    guard = 2.0 * tol
    same_side = ((da > guard) & (db > guard)) | ((da < -guard) & (db < -guard))
    return np.nonzero(~same_side)


def signed_crossings(surface: TriSurface, loop: OrientedLoop, tol: float = TOL_GEOM):
    """All transversal crossings of ``loop`` through ``surface`` and their signed total.

    Returns ``(crossings, total)`` with crossings sorted by ``loop_arc_parameter``.
    """
    seg, tri = _candidate_pairs(surface, loop, tol)
    a, b = loop.segments
    corners = surface.corners
    status, s, point, sign = classify(
        a[seg], b[seg], corners[tri, 0], corners[tri, 1], corners[tri, 2], tol
    )
    bad = np.flatnonzero(status == DEGENERATE)
    if len(bad):
        k = bad[0]
        raise DegenerateIncidence(
            f"loop segment {int(seg[k])} meets triangle {int(tri[k])} non-transversally"
            f" ({len(bad)} degenerate pair(s)); perturb the loop"
        )
    hits = np.flatnonzero(status == CROSSING)
    cum = loop.cumulative_length
    lengths = loop.segment_lengths
    total_length = cum[-1]
    found = []
    for k in hits:
        i = int(seg[k])
        param = (cum[i] + s[k] * lengths[i]) / total_length
        found.append(Crossing(
            point=point[k].copy(),
            triangle_index=int(tri[k]),
            loop_arc_parameter=float(param % 1.0),
            sign=int(sign[k]),
            segment_index=i,
            segment_fraction=float(s[k]),
        ))
    found.sort(key=lambda c: (c.loop_arc_parameter, c.triangle_index))
    return found, int(sum(c.sign for c in found))

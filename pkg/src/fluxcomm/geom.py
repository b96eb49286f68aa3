"""Oriented polygonal loops, oriented triangulated surfaces and test scenes.

Conventions
-----------
* A triangle ``(i, j, k)`` has normal ``(v_j - v_i) x (v_k - v_i)`` (right-hand rule).
* The boundary of a surface carries the induced (Stokes) orientation: it runs in
  the same direction as the boundary edge of the triangle it belongs to.
* A loop piercing a triangle along its normal counts as a ``+1`` crossing.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import (
    DeformationFailed,
    DegenerateGeometry,
    GeometryError,
    InconsistentOrientation,
    MultipleBoundaryComponents,
    NoBoundary,
)

TOL_GEOM = 1e-9


def as_points(points, name: str = "points") -> np.ndarray:
    """Return ``points`` as a read-only ``(n, 3)`` float array, rejecting NaN/Inf."""
    arr = np.array(points, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 3:
        raise DegenerateGeometry(f"{name} must have shape (n, 3), got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DegenerateGeometry(f"{name} contains non-finite coordinates")
    arr.setflags(write=False)
    return arr


def point_segment_distance(x, a, b) -> np.ndarray:
    """Distance from points ``x`` to segments ``[a, b]`` (all broadcast over leading axes)."""
    x, a, b = np.asarray(x, float), np.asarray(a, float), np.asarray(b, float)
    ab = b - a
    t = np.einsum("...i,...i->...", x - a, ab) / np.einsum("...i,...i->...", ab, ab)
    t = np.clip(t, 0.0, 1.0)
    closest = a + t[..., None] * ab
    return np.linalg.norm(x - closest, axis=-1)


def segment_segment_distance(p0, p1, q0, q1) -> np.ndarray:
    """Minimum distance between segments ``[p0, p1]`` and ``[q0, q1]``, broadcast.

    Segments are assumed to have positive length.
    """
    p0, p1, q0, q1 = (np.asarray(v, float) for v in (p0, p1, q0, q1))
    d1 = p1 - p0
    d2 = q1 - q0
    r = p0 - q0
    a = np.einsum("...i,...i->...", d1, d1)
    e = np.einsum("...i,...i->...", d2, d2)
    f = np.einsum("...i,...i->...", d2, r)
    c = np.einsum("...i,...i->...", d1, r)
    b = np.einsum("...i,...i->...", d1, d2)
    a, e, f, c, b = np.broadcast_arrays(a, e, f, c, b)
    denom = a * e - b * b
    with np.errstate(divide="ignore", invalid="ignore"):
        s = np.where(denom > 1e-300 * a * e, np.clip((b * f - c * e) / denom, 0.0, 1.0), 0.0)
        t = (b * s + f) / e
        # clamp t and recompute s where needed
        s = np.where(t < 0.0, np.clip(-c / a, 0.0, 1.0), s)
        s = np.where(t > 1.0, np.clip((b - c) / a, 0.0, 1.0), s)
    t = np.clip(t, 0.0, 1.0)
    c1 = p0 + s[..., None] * d1
    c2 = q0 + t[..., None] * d2
    return np.linalg.norm(c1 - c2, axis=-1)


@dataclass(frozen=True, eq=False)
class OrientedLoop:
    """Closed oriented polyline; the last vertex connects back to the first."""

    vertices: np.ndarray

    def __post_init__(self):
        verts = as_points(self.vertices, "loop vertices")
        if len(verts) < 3:
            raise DegenerateGeometry("a loop needs at least 3 vertices")
        object.__setattr__(self, "vertices", verts)
        lengths = np.linalg.norm(np.roll(verts, -1, axis=0) - verts, axis=1)
        if np.any(lengths <= TOL_GEOM):
            raise DegenerateGeometry("loop has coincident consecutive vertices")
        lengths.setflags(write=False)
        object.__setattr__(self, "_lengths", lengths)
        self._check_simple()

    def _check_simple(self) -> None:
        n = len(self.vertices)
        if n < 4:
            return
        a, b = self.segments
        i, j = np.triu_indices(n, k=2)
        keep = ~((i == 0) & (j == n - 1))
        i, j = i[keep], j[keep]
        if len(i) == 0:
            return
        d = segment_segment_distance(a[i], b[i], a[j], b[j])
        if np.any(d <= TOL_GEOM):
            k = int(np.argmin(d))
            raise DegenerateGeometry(
                f"loop is not simple: segments {i[k]} and {j[k]} are {d[k]:.3g} apart"
            )

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def segments(self) -> tuple[np.ndarray, np.ndarray]:
        """``(starts, ends)`` arrays of shape ``(n, 3)``."""
        return self.vertices, np.roll(self.vertices, -1, axis=0)

    @property
    def segment_lengths(self) -> np.ndarray:
        return self._lengths

    @property
    def length(self) -> float:
        return float(np.sum(self._lengths))

    @property
    def cumulative_length(self) -> np.ndarray:
        """Arclength at each vertex, with the closing total appended (``n + 1`` entries)."""
        return np.concatenate([[0.0], np.cumsum(self._lengths)])

    def point_at(self, arclength: float) -> np.ndarray:
        """Point at absolute ``arclength`` (taken modulo the loop length)."""
        cum = self.cumulative_length
        s = float(arclength) % cum[-1]
        k = int(np.searchsorted(cum, s, side="right")) - 1
        k = min(max(k, 0), len(self) - 1)
        a, b = self.vertices[k], self.vertices[(k + 1) % len(self)]
        return a + (s - cum[k]) / self._lengths[k] * (b - a)

    def reversed(self) -> OrientedLoop:
        return OrientedLoop(self.vertices[::-1])

    def translated(self, offset) -> OrientedLoop:
        return OrientedLoop(self.vertices + np.asarray(offset, float))

    def transformed(self, rotation, offset=(0.0, 0.0, 0.0)) -> OrientedLoop:
        """Apply ``x -> R (x - c) + c + offset`` with ``c`` the vertex centroid."""
        c = self.vertices.mean(axis=0)
        rot = np.asarray(rotation, float)
        return OrientedLoop((self.vertices - c) @ rot.T + c + np.asarray(offset, float))

    def distance_to_points(self, points) -> np.ndarray:
        """Distance from each point to the nearest point of the loop."""
        pts = np.atleast_2d(np.asarray(points, float))
        a, b = self.segments
        d = point_segment_distance(pts[:, None, :], a[None], b[None])
        return d.min(axis=1)

    def distance_to_loop(self, other: OrientedLoop) -> float:
        a0, a1 = self.segments
        b0, b1 = other.segments
        d = segment_segment_distance(a0[:, None], a1[:, None], b0[None], b1[None])
        return float(d.min())


def _boundary_cycle(triangles: np.ndarray) -> np.ndarray:
    """Vertex indices of the single boundary cycle, in induced orientation."""
    directed = np.concatenate(
        [triangles[:, [0, 1]], triangles[:, [1, 2]], triangles[:, [2, 0]]]
    )
    undirected = np.sort(directed, axis=1)
    keys, inverse, counts = np.unique(
        undirected, axis=0, return_inverse=True, return_counts=True
    )
    inverse = inverse.ravel()
    if np.any(counts > 2):
        raise InconsistentOrientation("an edge is shared by more than two triangles")
    interior = counts[inverse] == 2
    # a consistently oriented interior edge appears once in each direction
    uniq_directed = np.unique(directed[interior], axis=0)
    if len(uniq_directed) != len(directed[interior]):
        raise InconsistentOrientation(
            "adjacent triangles traverse a shared edge in the same direction"
        )
    boundary = directed[~interior]
    if len(boundary) == 0:
        raise NoBoundary("surface is closed")
    successor: dict[int, int] = {}
    for u, v in boundary:
        if int(u) in successor:
            raise MultipleBoundaryComponents(f"boundary vertex {int(u)} has two outgoing edges")
        successor[int(u)] = int(v)
    start = min(successor)
    cycle = [start]
    nxt = successor[start]
    while nxt != start:
        if nxt not in successor or len(cycle) > len(successor):
            raise MultipleBoundaryComponents("boundary edges do not close up")
        cycle.append(nxt)
        nxt = successor[nxt]
    if len(cycle) != len(successor):
        raise MultipleBoundaryComponents(
            f"boundary has {len(successor)} edges but the first loop only {len(cycle)}"
        )
    return np.array(cycle)


@dataclass(frozen=True, eq=False)
class TriSurface:
    """Consistently oriented triangle mesh with exactly one boundary loop."""

    vertices: np.ndarray
    triangles: np.ndarray

    def __post_init__(self):
        verts = as_points(self.vertices, "surface vertices")
        tris = np.array(self.triangles, dtype=np.int64)
        if tris.ndim != 2 or tris.shape[1] != 3 or len(tris) == 0:
            raise DegenerateGeometry(f"triangles must have shape (m, 3), got {tris.shape}")
        if tris.min() < 0 or tris.max() >= len(verts):
            raise DegenerateGeometry("triangle index out of range")
        if np.any((tris[:, 0] == tris[:, 1]) | (tris[:, 1] == tris[:, 2]) | (tris[:, 0] == tris[:, 2])):
            raise DegenerateGeometry("triangle with repeated vertex index")
        tris.setflags(write=False)
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "triangles", tris)
        normals = np.cross(verts[tris[:, 1]] - verts[tris[:, 0]], verts[tris[:, 2]] - verts[tris[:, 0]])
        areas = 0.5 * np.linalg.norm(normals, axis=1)
        if np.any(areas <= TOL_GEOM**2):
            raise DegenerateGeometry(f"degenerate triangle {int(np.argmin(areas))}")
        normals.setflags(write=False)
        areas.setflags(write=False)
        object.__setattr__(self, "_normals", normals)
        object.__setattr__(self, "_areas", areas)
        cycle = _boundary_cycle(tris)
        cycle.setflags(write=False)
        object.__setattr__(self, "boundary_indices", cycle)
        object.__setattr__(self, "boundary", OrientedLoop(verts[cycle]))

    @property
    def corners(self) -> np.ndarray:
        """Triangle corner coordinates, shape ``(m, 3, 3)``."""
        return self.vertices[self.triangles]

    @property
    def areas(self) -> np.ndarray:
        return self._areas

    @property
    def unit_normals(self) -> np.ndarray:
        return self._normals / (2.0 * self._areas[:, None])

    @property
    def interior_mask(self) -> np.ndarray:
        mask = np.ones(len(self.vertices), dtype=bool)
        mask[self.boundary_indices] = False
        # vertices not referenced by any triangle are left alone as well
        used = np.zeros(len(self.vertices), dtype=bool)
        used[self.triangles.ravel()] = True
        return mask & used

    def flipped(self) -> TriSurface:
        """Same surface with every triangle (and hence the boundary) reversed."""
        return TriSurface(self.vertices, self.triangles[:, [0, 2, 1]])

    def with_vertices(self, vertices) -> TriSurface:
        return TriSurface(vertices, self.triangles)


def boundary_of(surface: TriSurface) -> OrientedLoop:
    """The boundary loop of ``surface`` with its induced orientation."""
    return surface.boundary


# ---------------------------------------------------------------------------
# constructors

def disk_surface(n_curve: int, n_radial: int, radius: float = 1.0, phase: float = 0.5) -> TriSurface:
    """Polar triangulation of the disk of ``radius`` in the ``z = 0`` plane, normal ``+z``.

    ``n_curve`` vertices per ring, ``n_radial`` rings, a fan around the centre.
    Ring vertex ``j`` sits at angle ``(j + phase) * 2 pi / n_curve``; the default
    half-step keeps the positive x-axis off every radial edge.
    """
    if n_curve < 3 or n_radial < 1:
        raise ValueError("need n_curve >= 3 and n_radial >= 1")
    theta = (np.arange(n_curve) + phase) * 2.0 * np.pi / n_curve
    verts = [np.zeros(3)]
    for k in range(1, n_radial + 1):
        r = radius * k / n_radial
        verts.extend(np.column_stack([r * np.cos(theta), r * np.sin(theta), np.zeros(n_curve)]))
    verts = np.array(verts)

    def ring(k, j):
        return 1 + (k - 1) * n_curve + (j % n_curve)

    tris = [(0, ring(1, j), ring(1, j + 1)) for j in range(n_curve)]
    for k in range(1, n_radial):
        for j in range(n_curve):
            a, b = ring(k, j), ring(k, j + 1)
            c, d = ring(k + 1, j), ring(k + 1, j + 1)
            tris.append((a, c, d))
            tris.append((a, d, b))
    return TriSurface(verts, tris)


def circle_loop_xz(n_curve: int, center=(1.0, 0.0, 0.0), radius: float = 1.0, phase: float = -0.5) -> OrientedLoop:
    """Circle in the plane ``y = center_y``, ``t -> center + r (-cos t, 0, sin t)``.

    At ``t = 0`` the curve passes ``center - (r, 0, 0)`` moving in ``+z``.  With
    the default ``phase`` that point is the midpoint of the chord closing
    segment 0, so it is never a vertex.
    """
    if n_curve < 3:
        raise ValueError("need n_curve >= 3")
    t = (np.arange(n_curve) + phase) * 2.0 * np.pi / n_curve
    c = np.asarray(center, float)
    pts = c + radius * np.column_stack([-np.cos(t), np.zeros_like(t), np.sin(t)])
    return OrientedLoop(pts)


def hopf_scene(n_curve: int = 64, n_radial: int = 8) -> tuple[TriSurface, OrientedLoop]:
    """Unit disk ``S`` (normal ``+z``) and a unit circle ``C2`` through its centre.

    ``C2`` lies in the xz-plane centred at ``(1, 0, 0)`` and crosses the disk once,
    upwards, so the signed crossing count is ``+1``.
    """
    if n_curve < 8 or n_radial < 2:
        raise ValueError("hopf_scene needs n_curve >= 8 and n_radial >= 2")
    return disk_surface(n_curve, n_radial), circle_loop_xz(n_curve)


def unlinked_scene(n_curve: int = 64, n_radial: int = 8) -> tuple[TriSurface, OrientedLoop]:
    """Same as :func:`hopf_scene` but with ``C2`` moved to centre ``(3, 0, 0)``."""
    surface, _ = hopf_scene(n_curve, n_radial)
    return surface, circle_loop_xz(n_curve, center=(3.0, 0.0, 0.0))


def bump_surface(surface: TriSurface, center_xy=(0.5, 0.0), width: float = 0.4, height: float = 1.5) -> TriSurface:
    """Lift interior vertices by the compact bump ``height * (1 - d^2 / width^2)^2``.

    ``d`` is the horizontal distance to ``center_xy``; boundary vertices never move.
    """
    v = np.array(surface.vertices)
    d2 = (v[:, 0] - center_xy[0]) ** 2 + (v[:, 1] - center_xy[1]) ** 2
    lift = np.where(d2 < width**2, height * (1.0 - d2 / width**2) ** 2, 0.0)
    lift[~surface.interior_mask] = 0.0
    v[:, 2] += lift
    return surface.with_vertices(v)


def dome_scene(n_curve: int = 128, n_radial: int = 32, height: float = 1.5, width: float = 0.4,
               center_xy=(0.5, 0.0)) -> tuple[TriSurface, OrientedLoop]:
    """Hopf disk with a bump tall enough that ``C2`` dives under it.

    Along ``C2`` the crossings are: the flat centre (``+1``), the near flank of the
    bump (``-1``), the far flank (``+1``).
    """
    disk, loop = hopf_scene(n_curve, n_radial)
    return bump_surface(disk, center_xy, width, height), loop


def linked_twice_scene(n_curve: int = 256, n_radial: int = 8) -> tuple[TriSurface, OrientedLoop]:
    """Hopf disk and a loop winding twice around the disk's boundary circle.

    The loop follows a tube around the unit circle: tube angle ``2t``, tube radius
    ``0.3 + 0.1 sin t``, azimuth ``0.5 cos t``.  It pierces the disk twice in the
    same direction.
    """
    disk = disk_surface(n_curve, n_radial)
    t = (np.arange(n_curve) + 0.5) * 2.0 * np.pi / n_curve
    rho = 0.3 + 0.1 * np.sin(t)
    phi = 0.5 * np.cos(t)
    r = 1.0 + rho * np.cos(2 * t)
    pts = np.column_stack([r * np.cos(phi), r * np.sin(phi), rho * np.sin(2 * t)])
    return disk, OrientedLoop(pts[::-1])


def octahedron() -> tuple[np.ndarray, np.ndarray]:
    """Closed unit octahedron with outward normals, as ``(vertices, triangles)``."""
    v = np.array([[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0], [0, 0, 1], [0, 0, -1]], float)
    t = np.array([
        [0, 2, 4], [2, 1, 4], [1, 3, 4], [3, 0, 4],
        [2, 0, 5], [1, 2, 5], [3, 1, 5], [0, 3, 5],
    ])
    return v, t


def icosphere(subdivisions: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """Closed unit icosphere with outward normals, as ``(vertices, triangles)``."""
    phi = (1 + 5**0.5) / 2
    v = [[-1, phi, 0], [1, phi, 0], [-1, -phi, 0], [1, -phi, 0],
         [0, -1, phi], [0, 1, phi], [0, -1, -phi], [0, 1, -phi],
         [phi, 0, -1], [phi, 0, 1], [-phi, 0, -1], [-phi, 0, 1]]
    faces = [[0, 11, 5], [0, 5, 1], [0, 1, 7], [0, 7, 10], [0, 10, 11],
             [1, 5, 9], [5, 11, 4], [11, 10, 2], [10, 7, 6], [7, 1, 8],
             [3, 9, 4], [3, 4, 2], [3, 2, 6], [3, 6, 8], [3, 8, 9],
             [4, 9, 5], [2, 4, 11], [6, 2, 10], [8, 6, 7], [9, 8, 1]]
    verts = [np.array(p, float) / np.linalg.norm(p) for p in v]
    for _ in range(subdivisions):
        cache: dict[tuple[int, int], int] = {}

        def midpoint(i, j):
            key = (min(i, j), max(i, j))
            if key not in cache:
                m = verts[i] + verts[j]
                verts.append(m / np.linalg.norm(m))
                cache[key] = len(verts) - 1
            return cache[key]

        new_faces = []
        for a, b, c in faces:
            ab, bc, ca = midpoint(a, b), midpoint(b, c), midpoint(c, a)
            new_faces += [[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]
        faces = new_faces
    return np.array(verts), np.array(faces)


# ---------------------------------------------------------------------------
# deformation

def _boundary_taper(surface: TriSurface, scale: float) -> np.ndarray:
    d = surface.boundary.distance_to_points(surface.vertices)
    return 1.0 - np.exp(-((d / scale) ** 2))


def deform_interior(
    surface: TriSurface,
    seed: int,
    amplitude: float,
    forbidden: Iterable[OrientedLoop] = (),
    max_retries: int = 50,
    n_bumps: int = 4,
) -> TriSurface:
    """Displace interior vertices by a smooth random field, keeping the boundary fixed.

    The field is a sum of ``n_bumps`` Gaussian bumps with random centres, widths and
    directions, tapered to zero at the boundary and scaled so its largest
    displacement equals ``amplitude``.  A draw is rejected if it brings a vertex
    within ``TOL_GEOM`` of a ``forbidden`` loop or produces a degenerate triangle.
    """
    if amplitude < 0:
        raise ValueError("amplitude must be >= 0")
    interior = surface.interior_mask
    if amplitude == 0 or not np.any(interior):
        return surface
    forbidden = list(forbidden)
    rng = np.random.default_rng(seed)
    verts = surface.vertices
    lo, hi = verts.min(axis=0), verts.max(axis=0)
    diam = float(np.linalg.norm(hi - lo))
    taper = _boundary_taper(surface, 0.25 * diam)
    pts = verts[interior]
    for _ in range(max_retries):
        centers = rng.uniform(lo, hi, size=(n_bumps, 3))
        widths = rng.uniform(0.25, 0.6, size=n_bumps) * diam
        dirs = rng.normal(size=(n_bumps, 3))
        r2 = np.sum((pts[:, None, :] - centers[None]) ** 2, axis=-1)
        field = np.exp(-r2 / (2 * widths**2)) @ dirs
        field *= taper[interior, None]
        peak = np.max(np.linalg.norm(field, axis=1))
        if peak == 0:
            continue
        new = np.array(verts)
        new[interior] = pts + field * (amplitude / peak)
        if any(np.any(loop.distance_to_points(new[interior]) <= TOL_GEOM) for loop in forbidden):
            continue
        try:
            return surface.with_vertices(new)
        except GeometryError:
            continue
    raise DeformationFailed(f"no admissible deformation after {max_retries} draws (seed {seed})")


def perturb_loop(loop: OrientedLoop, seed: int, scale: float = 1e-6) -> OrientedLoop:
    """Tiny seeded rigid motion of ``loop``: rotation by ~``scale`` rad plus a shift of ~``scale`` * size."""
    rng = np.random.default_rng(seed)
    axis = rng.normal(size=3)
    axis /= np.linalg.norm(axis)
    angle = scale * rng.uniform(0.5, 1.0)
    k = np.array([[0, -axis[2], axis[1]], [axis[2], 0, -axis[0]], [-axis[1], axis[0], 0]])
    rot = np.eye(3) + np.sin(angle) * k + (1 - np.cos(angle)) * (k @ k)
    size = float(np.ptp(loop.vertices, axis=0).max())
    shift = rng.normal(size=3)
    shift *= scale * size / np.linalg.norm(shift)
    return loop.transformed(rot, shift)


"""Exception hierarchy.

Every error raised on purpose by the package derives from ``FluxcommError`` so
callers (the CLI in particular) can map them onto exit codes.
"""


class FluxcommError(Exception):
    """Base class for all package errors."""


class GeometryError(FluxcommError, ValueError):
    """Invalid or unusable geometric input."""


class DegenerateGeometry(GeometryError):
    """Non-finite coordinates, zero-length segments, zero-area triangles, self-touching loops."""


class NoBoundary(GeometryError):
    """A triangulated surface has no boundary edges (it is closed)."""


class MultipleBoundaryComponents(GeometryError):
    """Boundary edges do not form exactly one closed loop."""


class InconsistentOrientation(GeometryError):
    """Two triangles traverse a shared edge in the same direction, or an edge is non-manifold."""


class DegenerateIncidence(GeometryError):
    """A loop touches a surface non-transversally (in-plane, on an edge or vertex, or at a segment endpoint)."""


class PointOnSurface(GeometryError):
    """A flux probe lies within tolerance of the surface."""


class LoopsTouch(GeometryError):
    """Two loops come within tolerance of each other."""


class DeformationFailed(FluxcommError):
    """No admissible random deformation was found within the retry budget."""


class EpsTooLarge(FluxcommError, ValueError):
    """Excision half-width too large for the spacing of the crossings."""


class NonpositiveInput(FluxcommError, ValueError):
    """An argument that must be strictly positive was not."""


class ConvergenceFailure(FluxcommError):
    """An extrapolation residual exceeded the requested tolerance."""


class SceneError(FluxcommError, ValueError):
    """A scene file could not be parsed or is missing a named object."""

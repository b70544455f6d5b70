"""Exception hierarchy shared by the whole package."""

from __future__ import annotations


class StereoRigError(Exception):
    """Base class for all stereorig errors."""


class LayoutFormatError(StereoRigError):
    """A layout or probe document could not be parsed.

    ``path`` points at the offending element, e.g. ``waypoints[3].d_zp``.
    """

    def __init__(self, path: str, message: str):
        self.path = path
        self.message = message
        super().__init__(f"{path or '<document>'}: {message}")


class SingularSystemError(StereoRigError):
    """The RBF kernel matrix is numerically rank deficient.

    Carries the nearest pair of centers, which is almost always the cause.
    """

    def __init__(self, message: str, nearest_pair: tuple[int, int] | None = None):
        self.nearest_pair = nearest_pair
        super().__init__(message)


class PathDomainError(StereoRigError):
    """Curve parameter outside [0, 1] or a path that cannot be built."""


class ProjectionError(StereoRigError):
    """Frustum geometry is degenerate (e.g. interaxial wider than the frustum)."""


class AsymmetricEyesError(StereoRigError):
    """The HMD profile's two eyes disagree on the default half-angle offset."""


class UnsatisfiableBandError(StereoRigError):
    """No zero-parallax distance can place the frustum angles inside the band."""


class DegenerateInterpolantError(StereoRigError):
    """An interpolant cannot be built or produced a geometrically unusable
    value (e.g. zero-parallax distance at or inside the near plane)."""


class InvalidLayoutError(StereoRigError):
    """A layout failed invariant validation and cannot be prepared.

    ``violations`` holds the full validation report.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        lines = "; ".join(str(v.message) for v in self.violations[:3])
        more = f" (+{len(self.violations) - 3} more)" if len(self.violations) > 3 else ""
        super().__init__(f"layout fails validation: {lines}{more}")

"""Asymmetric per-eye frusta and stereo projection matrices.

The renderer's two cameras share one symmetric horizontal field of view of
half-width ``A = d_zp * aspect * tan(fov/2)`` measured at the zero-parallax
distance.  Interaxial separation splits that width asymmetrically: each eye
sees a condensed side ``B = A - d_ia/2`` toward its own side and an expanded
side ``C = A + d_ia/2`` toward the other eye, and the two eyes' frusta are
swapped left-for-right so the cameras aim outward as the zero-parallax plane
approaches.  Objects at ``d_zp`` land on the same screen coordinates in both
eyes, which is what makes that plane the zero-parallax surface.

Vertical plane positions are left exactly as the HMD profile's default
per-eye tangents dictate; only the horizontal extents carry stereo state.

Everything here is pure float arithmetic with a deliberately fixed
expression order; the batch frame evaluator reproduces these formulas
term-for-term so its matrices are bit-identical to this module's.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ProjectionError
from .layout import EyeFrustumTangents, HmdProfile


@dataclass(frozen=True, slots=True)
class FrustumExtents:
    """Clip-plane positions at the near plane, in meters, signed."""

    l: float
    r: float
    b: float
    t: float
    n: float
    f: float

    def __post_init__(self):
        # Fast path: one branch for the common valid case (this runs twice
        # per evaluated frame).  The sum is finite iff every term is.
        if (self.l < self.r and self.b < self.t and 0.0 < self.n < self.f
                and math.isfinite(self.l + self.r + self.b + self.t + self.f)):
            return
        for name, value in (("l", self.l), ("r", self.r), ("b", self.b),
                            ("t", self.t), ("n", self.n), ("f", self.f)):
            if not math.isfinite(value):
                raise ProjectionError(f"frustum extent {name} must be finite, got {value!r}")
        if not self.l < self.r:
            raise ProjectionError(f"frustum needs l < r, got l={self.l!r} r={self.r!r}")
        if not self.b < self.t:
            raise ProjectionError(f"frustum needs b < t, got b={self.b!r} t={self.t!r}")
        if not 0.0 < self.n < self.f:
            raise ProjectionError(f"frustum needs 0 < n < f, got n={self.n!r} f={self.f!r}")


@dataclass(frozen=True)
class StereoProjectionPair:
    """Per-eye projection matrices plus the extents and inputs they encode."""

    left: np.ndarray
    right: np.ndarray
    extents_left: FrustumExtents
    extents_right: FrustumExtents
    d_ia: float
    d_zp: float

    def __post_init__(self):
        self.left.setflags(write=False)
        self.right.setflags(write=False)


def half_width_at_zp(profile: HmdProfile, d_zp: float) -> float:
    """Half the symmetric frustum width at the zero-parallax distance."""
    if not (math.isfinite(d_zp) and d_zp > 0.0):
        raise ProjectionError(f"zero-parallax distance must be positive, got {d_zp!r}")
    return d_zp * profile.horizontal_half_slope()


def side_widths(a: float, d_ia: float) -> tuple[float, float]:
    """Condensed and expanded horizontal widths for one eye.

    The condensed side loses half the interaxial separation and the
    expanded side gains it; their sum is always the full width 2A.
    Rejects d_ia >= 2A, where the condensed side would collapse.
    """
    if not a > 0.0:
        raise ProjectionError(f"half width must be positive, got {a!r}")
    if not (math.isfinite(d_ia) and d_ia >= 0.0):
        raise ProjectionError(f"interaxial separation must be nonnegative, got {d_ia!r}")
    if d_ia >= 2.0 * a:
        raise ProjectionError(
            f"interaxial separation {d_ia!r} must be below the frustum width {2.0 * a!r} "
            f"at the zero-parallax distance; the condensed side would vanish")
    b = a - 0.5 * d_ia
    c = a + 0.5 * d_ia
    return b, c


def _vertical_extents(tangents: EyeFrustumTangents, n: float) -> tuple[float, float]:
    return tangents.bottom * n, tangents.top * n


def swapped_extents(profile: HmdProfile, d_ia: float, d_zp: float) -> tuple[FrustumExtents, FrustumExtents]:
    """Per-eye frustum extents with the left/right horizontal swap applied.

    Each eye's expanded side faces the *other* eye: the left eye's left
    plane sits at the expanded width and its right plane at the condensed
    width (scaled back to the near plane), mirrored for the right eye.
    Vertical extents come from the profile defaults, untouched.
    """
    a = half_width_at_zp(profile, d_zp)
    b, c = side_widths(a, d_ia)
    n = profile.near
    cn = c * n / d_zp
    bn = b * n / d_zp
    lb, lt = _vertical_extents(profile.tangents_left, n)
    rb, rt = _vertical_extents(profile.tangents_right, n)
    left = FrustumExtents(l=-cn, r=bn, b=lb, t=lt, n=n, f=profile.far)
    right = FrustumExtents(l=-bn, r=cn, b=rb, t=rt, n=n, f=profile.far)
    return left, right


def assemble_projection(extents: FrustumExtents) -> np.ndarray:
    """4x4 off-axis perspective projection matrix for the given extents.

    Row-major, right-handed, OpenGL-style depth range: the third row
    encodes near/far, the bottom row is [0, 0, -1, 0], and the (0,2)/(1,2)
    entries carry the off-axis asymmetry.
    """
    l, r, b, t, n, f = extents.l, extents.r, extents.b, extents.t, extents.n, extents.f
    m = np.zeros((4, 4), dtype=np.float64)
    m[0, 0] = 2.0 * n / (r - l)
    m[0, 2] = (r + l) / (r - l)
    m[1, 1] = 2.0 * n / (t - b)
    m[1, 2] = (t + b) / (t - b)
    m[2, 2] = -(f + n) / (f - n)
    m[2, 3] = -2.0 * f * n / (f - n)
    m[3, 2] = -1.0
    return m


def build_projection_pair(profile: HmdProfile, d_ia: float, d_zp: float) -> StereoProjectionPair:
    """Both eyes' swapped-frustum projection matrices for one parameter pair.

    Does not clamp: callers are expected to pass an already comfort-limited
    ``d_zp``.
    """
    ext_left, ext_right = swapped_extents(profile, d_ia, d_zp)
    return StereoProjectionPair(
        left=assemble_projection(ext_left),
        right=assemble_projection(ext_right),
        extents_left=ext_left,
        extents_right=ext_right,
        d_ia=d_ia,
        d_zp=d_zp,
    )


def eye_offset(d_ia: float) -> float:
    """Lateral camera displacement magnitude for each eye (half the separation).

    The eye translation lives in the view transform, not the projection
    matrix; frame streams carry it alongside the matrices.
    """
    return 0.5 * d_ia

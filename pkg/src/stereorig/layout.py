"""Depth layout data model: waypoints, HMD profiles, validation, file I/O.

A depth layout is the authored artifact the rest of the engine consumes:
an ordered list of waypoints, each carrying a camera pose plus the two
stereoscopic parameters (interaxial separation ``d_ia`` and zero-parallax
distance ``d_zp``), together with the HMD profile it was authored for.

Layout files are versioned JSON; numbers are written with Python's
shortest round-trip float representation, so serialize/deserialize is an
exact identity on every field.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from typing import Iterable

from . import _jsonutil as ju
from .comfort import DEFAULT_BAND, ComfortBand
from .errors import LayoutFormatError

SCHEMA_VERSION = "1"

QUAT_NORM_TOL = 1e-9        # |norm - 1| allowed for waypoint orientations
GROUND_COINCIDENCE_TOL = 1e-6  # m; waypoints closer than this on the ground plane collide
MIN_WAYPOINTS = 2
DEFAULT_RBF_SHAPE = 2.0     # m; shape parameter of the interpolation basis

PATH_MODES = ("single-bezier", "piecewise-c1")


@dataclass(frozen=True, slots=True)
class EyeFrustumTangents:
    """Signed plane slopes (offset / near distance) of one eye's default frustum."""

    left: float
    right: float
    top: float
    bottom: float


@dataclass(frozen=True, slots=True)
class HmdProfile:
    """Static display geometry of a head-mounted display.

    ``vertical_fov`` is in radians; ``aspect`` is width over height;
    ``near``/``far`` are clip plane distances in meters.  The per-eye
    tangents describe the vendor's default (asymmetric) frusta and supply
    both the preserved vertical asymmetry and the horizontal baseline the
    comfort band is measured from.
    """

    vertical_fov: float
    aspect: float
    near: float
    far: float
    tangents_left: EyeFrustumTangents
    tangents_right: EyeFrustumTangents
    default_ipd: float

    def horizontal_half_slope(self) -> float:
        """Half-width of the symmetric frustum per unit viewing distance."""
        return self.aspect * math.tan(0.5 * self.vertical_fov)


@dataclass(frozen=True, slots=True)
class Waypoint:
    """One authored camera station: pose plus stereoscopic parameters."""

    position: tuple[float, float, float]       # meters, VE coordinates; y is up
    orientation: tuple[float, float, float, float]  # unit quaternion (w, x, y, z)
    d_ia: float                                # interaxial separation, m
    d_zp: float                                # zero-parallax distance, m

    def ground_point(self) -> tuple[float, float]:
        """Projection onto the horizontal ground plane, the interpolation domain."""
        return (self.position[0], self.position[2])


@dataclass(frozen=True, slots=True)
class DepthLayout:
    """An authored stereoscopic cinematography for one virtual environment."""

    name: str
    hmd_profile: HmdProfile
    waypoints: tuple[Waypoint, ...]
    comfort_band: ComfortBand = DEFAULT_BAND
    rbf_r0: float = DEFAULT_RBF_SHAPE
    path_mode: str = "single-bezier"


#: Illustrative consumer-HMD preset (not vendor-certified numbers): 110 deg
#: vertical FOV, outward-canted horizontal frusta, slight vertical asymmetry.
DEFAULT_HMD = HmdProfile(
    vertical_fov=1.9198621771937625,
    aspect=0.9,
    near=0.1,
    far=1000.0,
    tangents_left=EyeFrustumTangents(left=-1.39, right=1.24, top=1.47, bottom=-1.46),
    tangents_right=EyeFrustumTangents(left=-1.24, right=1.39, top=1.47, bottom=-1.46),
    default_ipd=0.063,
)


@dataclass(frozen=True, slots=True)
class Violation:
    """One invariant violation found by validate_layout."""

    waypoint: int | None  # index, or None for layout-level problems
    field: str
    message: str

    def to_dict(self) -> dict:
        return {"waypoint": self.waypoint, "field": self.field, "message": self.message}


def _check_finite(violations, waypoint, field, value, label):
    if not math.isfinite(value):
        violations.append(Violation(waypoint, field, f"{label} must be finite, got {value!r}"))
        return False
    return True


def validate_layout(layout: DepthLayout) -> list[Violation]:
    """Collect every invariant violation in the layout.

    Never raises for content problems; an empty list means the layout
    satisfies all engine invariants.  The report order is deterministic:
    layout-level checks first, then waypoints in order, then pairwise
    ground-plane coincidences.
    """
    v: list[Violation] = []
    profile = layout.hmd_profile

    if len(layout.waypoints) < MIN_WAYPOINTS:
        v.append(Violation(None, "waypoints",
                           f"a path needs at least {MIN_WAYPOINTS} waypoints, got {len(layout.waypoints)}"))

    if not (0.0 < profile.vertical_fov < math.pi):
        v.append(Violation(None, "hmd_profile.vertical_fov",
                           f"vertical FOV must lie in (0, pi), got {profile.vertical_fov!r}"))
    if not profile.aspect > 0.0:
        v.append(Violation(None, "hmd_profile.aspect",
                           f"aspect ratio must be positive, got {profile.aspect!r}"))
    if not (0.0 < profile.near < profile.far):
        v.append(Violation(None, "hmd_profile.near",
                           f"requires 0 < near < far, got near={profile.near!r} far={profile.far!r}"))
    for eye, tan in (("left", profile.tangents_left), ("right", profile.tangents_right)):
        if not tan.left < tan.right:
            v.append(Violation(None, f"hmd_profile.eye_tangents.{eye}",
                               f"left tangent must be below right tangent, got ({tan.left!r}, {tan.right!r})"))
        if not tan.bottom < tan.top:
            v.append(Violation(None, f"hmd_profile.eye_tangents.{eye}",
                               f"bottom tangent must be below top tangent, got ({tan.bottom!r}, {tan.top!r})"))

    if not layout.rbf_r0 > 0.0:
        v.append(Violation(None, "rbf_r0", f"shape parameter must be positive, got {layout.rbf_r0!r}"))
    if layout.path_mode not in PATH_MODES:
        v.append(Violation(None, "path_mode",
                           f"unknown path mode {layout.path_mode!r}; expected one of {PATH_MODES}"))

    for i, wp in enumerate(layout.waypoints):
        for axis, value in zip("xyz", wp.position):
            _check_finite(v, i, "position", value, f"position.{axis}")
        norm_sq = sum(c * c for c in wp.orientation)
        if not math.isfinite(norm_sq):
            v.append(Violation(i, "orientation", "orientation must be finite"))
        elif abs(math.sqrt(norm_sq) - 1.0) > QUAT_NORM_TOL:
            v.append(Violation(i, "orientation",
                               f"quaternion norm {math.sqrt(norm_sq)!r} deviates from 1 by more than {QUAT_NORM_TOL}"))
        if _check_finite(v, i, "d_ia", wp.d_ia, "d_ia") and wp.d_ia < 0.0:
            v.append(Violation(i, "d_ia", f"interaxial separation must be nonnegative, got {wp.d_ia!r}"))
        if _check_finite(v, i, "d_zp", wp.d_zp, "d_zp"):
            if wp.d_zp <= 0.0:
                v.append(Violation(i, "d_zp", f"zero-parallax distance must be positive, got {wp.d_zp!r}"))
            elif wp.d_zp <= profile.near:
                v.append(Violation(i, "d_zp",
                                   f"zero-parallax distance {wp.d_zp!r} must exceed the near plane {profile.near!r}"))

    for i, wp in enumerate(layout.waypoints):
        xi, zi = wp.ground_point()
        for j in range(i):
            xj, zj = layout.waypoints[j].ground_point()
            if math.hypot(xi - xj, zi - zj) < GROUND_COINCIDENCE_TOL:
                v.append(Violation(i, "position",
                                   f"ground-plane position coincides with waypoint {j} "
                                   f"(within {GROUND_COINCIDENCE_TOL} m); interpolation centers must be distinct"))
    return v


# --- serialization ---------------------------------------------------------

def _tangents_to_dict(t: EyeFrustumTangents) -> dict:
    return {"left": t.left, "right": t.right, "top": t.top, "bottom": t.bottom}


def layout_to_dict(layout: DepthLayout) -> dict:
    """Plain-dict form of the layout, key order fixed for byte-stable output."""
    p = layout.hmd_profile
    return {
        "version": SCHEMA_VERSION,
        "name": layout.name,
        "hmd_profile": {
            "vertical_fov": p.vertical_fov,
            "aspect": p.aspect,
            "near": p.near,
            "far": p.far,
            "eye_tangents": {
                "left": _tangents_to_dict(p.tangents_left),
                "right": _tangents_to_dict(p.tangents_right),
            },
            "default_ipd": p.default_ipd,
        },
        "comfort_band": {"lo_deg": layout.comfort_band.lo_deg, "hi_deg": layout.comfort_band.hi_deg},
        "rbf_r0": layout.rbf_r0,
        "path_mode": layout.path_mode,
        "waypoints": [
            {
                "position": list(w.position),
                "orientation": list(w.orientation),
                "d_ia": w.d_ia,
                "d_zp": w.d_zp,
            }
            for w in layout.waypoints
        ],
    }


def serialize_layout(layout: DepthLayout) -> bytes:
    """Canonical layout file bytes (UTF-8 JSON, full-precision floats)."""
    return (json.dumps(layout_to_dict(layout), indent=2) + "\n").encode("utf-8")


def _parse_tangents(obj, path) -> EyeFrustumTangents:
    values = {}
    for key in ("left", "right", "top", "bottom"):
        raw, p = ju.require(obj, key, path)
        values[key] = ju.number(raw, p)
    return EyeFrustumTangents(**values)


def _parse_profile(obj, path) -> HmdProfile:
    fields = {}
    for key in ("vertical_fov", "aspect", "near", "far", "default_ipd"):
        raw, p = ju.require(obj, key, path)
        fields[key] = ju.number(raw, p)
    tangents, tpath = ju.require(obj, "eye_tangents", path)
    left_raw, lpath = ju.require(tangents, "left", tpath)
    right_raw, rpath = ju.require(tangents, "right", tpath)
    return HmdProfile(
        tangents_left=_parse_tangents(left_raw, lpath),
        tangents_right=_parse_tangents(right_raw, rpath),
        **fields,
    )


def parse_waypoint(obj, path="") -> Waypoint:
    """Parse one waypoint object, reporting errors with a JSON path."""
    pos_raw, pos_path = ju.require(obj, "position", path)
    ori_raw, ori_path = ju.require(obj, "orientation", path)
    ia_raw, ia_path = ju.require(obj, "d_ia", path)
    zp_raw, zp_path = ju.require(obj, "d_zp", path)
    return Waypoint(
        position=ju.vector(pos_raw, pos_path, 3),
        orientation=ju.vector(ori_raw, ori_path, 4),
        d_ia=ju.number(ia_raw, ia_path),
        d_zp=ju.number(zp_raw, zp_path),
    )


def layout_from_dict(doc) -> DepthLayout:
    version, vpath = ju.require(doc, "version", "")
    if ju.string(version, vpath) != SCHEMA_VERSION:
        raise LayoutFormatError(vpath, f"unknown schema version {version!r}; this build reads version {SCHEMA_VERSION!r}")

    name_raw, name_path = ju.require(doc, "name", "")
    profile_raw, profile_path = ju.require(doc, "hmd_profile", "")
    wps_raw, wps_path = ju.require(doc, "waypoints", "")

    waypoints = tuple(
        parse_waypoint(item, ju.join(wps_path, i))
        for i, item in enumerate(ju.array(wps_raw, wps_path))
    )

    band = DEFAULT_BAND
    if (found := ju.optional(doc, "comfort_band", "")) is not None:
        band_raw, band_path = found
        lo_raw, lo_path = ju.require(band_raw, "lo_deg", band_path)
        hi_raw, hi_path = ju.require(band_raw, "hi_deg", band_path)
        try:
            band = ComfortBand(lo_deg=ju.number(lo_raw, lo_path), hi_deg=ju.number(hi_raw, hi_path))
        except ValueError as exc:
            raise LayoutFormatError(band_path, str(exc)) from exc

    rbf_r0 = DEFAULT_RBF_SHAPE
    if (found := ju.optional(doc, "rbf_r0", "")) is not None:
        rbf_r0 = ju.number(*found)

    path_mode = "single-bezier"
    if (found := ju.optional(doc, "path_mode", "")) is not None:
        path_mode = ju.string(*found)
        if path_mode not in PATH_MODES:
            raise LayoutFormatError(found[1], f"unknown path mode {path_mode!r}; expected one of {PATH_MODES}")

    return DepthLayout(
        name=ju.string(name_raw, name_path),
        hmd_profile=_parse_profile(profile_raw, profile_path),
        waypoints=waypoints,
        comfort_band=band,
        rbf_r0=rbf_r0,
        path_mode=path_mode,
    )


def deserialize_layout(data: bytes | str) -> DepthLayout:
    """Parse layout file bytes; raises LayoutFormatError with a JSON path."""
    return layout_from_dict(ju.loads(data, "layout file"))


def with_waypoints(layout: DepthLayout, waypoints: Iterable[Waypoint]) -> DepthLayout:
    """Copy of the layout with a different waypoint sequence."""
    return replace(layout, waypoints=tuple(waypoints))

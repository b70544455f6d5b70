"""Per-frame composition: path + interpolated parameters + clamp + projection.

``prepare`` does all the once-per-layout work: validates the layout, builds
the camera path (plus arc-length table), solves one RBF field per
stereoscopic parameter, resolves the comfort band to its two clamp ratios,
and packs everything into flat arrays for the compiled kernel.  After that,
``eval_frame`` is a single kernel call per frame plus domain-object
assembly, well under the real-time budget.

A session can optionally pin both parameters to constants
(``fixed_params``), emulating the conventional fixed-camera configuration;
interpolation is bypassed but the clamp and projection stages still run.
This is how a depth chart for the "no authored layout" baseline is made.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernel
from .comfort import band_ratios, default_delta
from .errors import (
    DegenerateInterpolantError,
    InvalidLayoutError,
    PathDomainError,
    ProjectionError,
    UnsatisfiableBandError,
)
from .kinematics import CameraPath, Pose, build_path, remap_arc_length, with_arc_table
from .layout import DepthLayout, validate_layout
from .projection import FrustumExtents, StereoProjectionPair
from .rbf import RbfField, solve_field

SPACINGS = ("uniform-parameter", "uniform-arc-length")

#: Fraction by which the waypoint bounding rectangle grows (total, per axis)
#: when a surface grid is sampled without explicit bounds.
SURFACE_MARGIN = 0.2

#: Half-extent substituted when all waypoints share one coordinate, so the
#: default surface bounds never collapse to a zero-area rectangle.
SURFACE_MIN_HALF_EXTENT = 1.0


@dataclass(frozen=True, slots=True)
class FrameRecord:
    """Everything a renderer needs for one stereo frame."""

    t: float                  # playback parameter in [0, 1]
    pose: Pose
    eye_offset: float         # lateral view-transform offset per eye, m
    d_ia: float               # interaxial separation, m (floored at 0)
    d_zp_raw: float           # interpolated zero-parallax distance, m
    d_zp: float               # comfort-clamped zero-parallax distance, m
    was_clamped: bool
    projections: StereoProjectionPair


@dataclass(frozen=True, slots=True)
class DepthProbeSeries:
    """Scene min/max render depth along the path, supplied by the renderer."""

    samples: tuple[tuple[float, float, float], ...]  # (t, d_min, d_max)

    def __post_init__(self):
        prev_t = -math.inf
        for i, (t, d_min, d_max) in enumerate(self.samples):
            if not (0.0 <= t <= 1.0):
                raise ValueError(f"probe sample {i}: t must lie in [0, 1], got {t!r}")
            if t <= prev_t:
                raise ValueError(f"probe sample {i}: t values must be strictly increasing")
            if not (0.0 < d_min <= d_max) or not math.isfinite(d_max):
                raise ValueError(
                    f"probe sample {i}: needs 0 < d_min <= d_max, got ({d_min!r}, {d_max!r})")
            prev_t = t


@dataclass(frozen=True, slots=True)
class DepthChartSeries:
    """Scene depth relative to the zero-parallax plane along the path.

    Negative values lie in front of the display plane (the crossed-eye,
    negative-disparity region); positive values behind it.
    """

    samples: tuple[tuple[float, float, float, float], ...]  # (t, rel_min, rel_max, d_zp)


@dataclass(frozen=True)
class PreparedSession:
    """Immutable once built; every evaluation after that is pure."""

    layout: DepthLayout
    mode: str
    path: CameraPath
    field_ia: RbfField
    field_zp: RbfField
    delta_default: float       # rad, the profile's own asymmetry baseline
    ratio_hi: float            # comfort clamp: near-side ratio bound
    ratio_lo: float            # comfort clamp: far-side ratio bound
    fixed_params: tuple[float, float] | None
    # Vertical extents at the near plane (left b, left t, right b, right t).
    _verticals: tuple[float, float, float, float]
    # Kernel packs; see _kernel module docstring for layouts.
    _ctrl: np.ndarray
    _quats: np.ndarray
    _rbf: np.ndarray
    _sc: np.ndarray

    def __post_init__(self):
        for arr in (self._ctrl, self._quats, self._rbf, self._sc):
            arr.setflags(write=False)


def prepare(layout: DepthLayout, path_mode: str | None = None,
            fixed_params: tuple[float, float] | None = None) -> PreparedSession:
    """Build a per-layout evaluation session.

    Raises InvalidLayoutError (with the full violation report) for layouts
    that fail validation, and propagates solver, path, and comfort-band
    errors.  ``fixed_params = (d_ia, d_zp)`` pins both stereoscopic
    parameters instead of interpolating them.
    """
    violations = validate_layout(layout)
    if violations:
        raise InvalidLayoutError(violations)

    profile = layout.hmd_profile
    path = with_arc_table(build_path(layout, path_mode))

    centers = np.array([wp.ground_point() for wp in layout.waypoints], dtype=np.float64)
    field_ia = solve_field(centers, [wp.d_ia for wp in layout.waypoints], layout.rbf_r0)
    field_zp = solve_field(centers, [wp.d_zp for wp in layout.waypoints], layout.rbf_r0)

    ratio_hi, ratio_lo = band_ratios(profile, layout.comfort_band)
    base = default_delta(profile)
    zero_ia_ok = (math.radians(layout.comfort_band.lo_deg) <= -base
                  <= math.radians(layout.comfort_band.hi_deg))

    if fixed_params is not None:
        fixed_ia, fixed_zp = fixed_params
        if not (math.isfinite(fixed_ia) and fixed_ia >= 0.0):
            raise ValueError(f"fixed d_ia must be nonnegative and finite, got {fixed_ia!r}")
        if not (math.isfinite(fixed_zp) and fixed_zp > profile.near):
            raise ValueError(
                f"fixed d_zp must be finite and beyond the near plane {profile.near!r}, "
                f"got {fixed_zp!r}")

    ctrl = np.ascontiguousarray(path.control_points.reshape(-1, 3), dtype=np.float64)
    quats = np.ascontiguousarray(path.orientations, dtype=np.float64)
    rbf_pack = np.column_stack([centers, field_ia.weights, field_zp.weights])

    sc = np.zeros(16, dtype=np.float64)
    sc[0] = 0.0 if path.mode == "single-bezier" else 1.0
    sc[1] = float(path.waypoint_count)
    sc[2] = profile.horizontal_half_slope()
    sc[3] = profile.near
    sc[4] = profile.far
    sc[5] = ratio_hi
    sc[6] = ratio_lo
    sc[7] = 1.0 if zero_ia_ok else 0.0
    if fixed_params is not None:
        sc[8] = 1.0
        sc[9] = fixed_params[0]
        sc[10] = fixed_params[1]
    sc[11] = layout.rbf_r0 * layout.rbf_r0
    verticals = (profile.tangents_left.bottom * profile.near,
                 profile.tangents_left.top * profile.near,
                 profile.tangents_right.bottom * profile.near,
                 profile.tangents_right.top * profile.near)
    sc[12:16] = verticals

    return PreparedSession(
        layout=layout,
        mode=path.mode,
        path=path,
        field_ia=field_ia,
        field_zp=field_zp,
        delta_default=base,
        ratio_hi=ratio_hi,
        ratio_lo=ratio_lo,
        fixed_params=fixed_params,
        _verticals=verticals,
        _ctrl=ctrl,
        _quats=quats,
        _rbf=rbf_pack,
        _sc=sc,
    )


def _raise_status(session: PreparedSession, status: int, t: float, out: np.ndarray):
    if status == 1:
        raise UnsatisfiableBandError(
            f"interpolated interaxial separation is 0 at t={t!r}, which pins the "
            f"frustum half-angle difference to 0, outside the comfort band around "
            f"default delta {session.delta_default!r} rad")
    if status == 2:
        raise DegenerateInterpolantError(
            f"interpolated zero-parallax distance {float(out[9])!r} at t={t!r} is at or "
            f"inside the near plane {session.layout.hmd_profile.near!r}; the layout "
            f"drives the display plane into the camera")
    if status == 3:
        width = 2.0 * float(out[10]) * session.layout.hmd_profile.horizontal_half_slope()
        raise ProjectionError(
            f"interaxial separation {float(out[8])!r} at t={t!r} reaches the frustum "
            f"width {width!r} at the zero-parallax distance; the condensed side "
            f"would vanish")
    raise AssertionError(f"unknown kernel status {status}")


def _eval_at(session: PreparedSession, t: float, u: float) -> FrameRecord:
    out = np.empty(46, dtype=np.float64)
    status = _kernel.eval_frame_into(u, session._ctrl, session._quats,
                                     session._rbf, session._sc, out)
    if status != 0:
        _raise_status(session, status, t, out)

    vals = out.tolist()
    profile = session.layout.hmd_profile
    cn = vals[12]
    bn = vals[13]
    lb, lt, rb, rt = session._verticals
    extents_left = FrustumExtents(l=-cn, r=bn, b=lb, t=lt,
                                  n=profile.near, f=profile.far)
    extents_right = FrustumExtents(l=-bn, r=cn, b=rb, t=rt,
                                   n=profile.near, f=profile.far)
    projections = StereoProjectionPair(
        left=out[14:30].reshape(4, 4),
        right=out[30:46].reshape(4, 4),
        extents_left=extents_left,
        extents_right=extents_right,
        d_ia=vals[8],
        d_zp=vals[10],
    )
    return FrameRecord(
        t=t,
        pose=Pose(position=(vals[0], vals[1], vals[2]),
                  orientation=(vals[3], vals[4], vals[5], vals[6])),
        eye_offset=vals[7],
        d_ia=vals[8],
        d_zp_raw=vals[9],
        d_zp=vals[10],
        was_clamped=vals[11] != 0.0,
        projections=projections,
    )


def eval_frame(session: PreparedSession, t: float) -> FrameRecord:
    """Evaluate one frame at playback parameter ``t`` in [0, 1]."""
    if not (0.0 <= t <= 1.0):
        raise PathDomainError(f"frame parameter must lie in [0, 1], got {t!r}")
    t = float(t)
    return _eval_at(session, t, t)


def eval_frames(session: PreparedSession, count: int,
                spacing: str = "uniform-parameter") -> list[FrameRecord]:
    """Batch of ``count`` frames at t = i/(count-1), ordered by t.

    ``uniform-arc-length`` spacing remaps each t through the path's
    arc-length table so playback speed is near constant; record ``t``
    values are unchanged, only the curve parameter moves.
    """
    if count < 2:
        raise PathDomainError(f"a frame stream needs at least 2 frames, got {count}")
    if spacing not in SPACINGS:
        raise PathDomainError(f"unknown spacing {spacing!r}; expected one of {SPACINGS}")
    table = session.path.arc_table
    frames = []
    for i in range(count):
        t = i / (count - 1)
        u = remap_arc_length(table, t) if spacing == "uniform-arc-length" else t
        frames.append(_eval_at(session, t, u))
    return frames


def depth_chart(session: PreparedSession, probes: DepthProbeSeries) -> DepthChartSeries:
    """Scene depth relative to the zero-parallax plane at each probe time.

    The emitted ``d_zp`` trace is the chart's zero line; ``rel_min`` below
    zero means scene content in front of the display plane.
    """
    samples = []
    for t, d_min, d_max in probes.samples:
        frame = eval_frame(session, t)
        samples.append((t, d_min - frame.d_zp, d_max - frame.d_zp, frame.d_zp))
    return DepthChartSeries(samples=tuple(samples))


def default_surface_bounds(layout: DepthLayout) -> tuple[float, float, float, float]:
    """Waypoint ground-plane bounding rectangle grown by the surface margin."""
    xs = [wp.position[0] for wp in layout.waypoints]
    zs = [wp.position[2] for wp in layout.waypoints]
    return (*_padded(min(xs), max(xs)), *_padded(min(zs), max(zs)))


def _padded(lo: float, hi: float) -> tuple[float, float]:
    pad = 0.5 * SURFACE_MARGIN * (hi - lo)
    if pad <= 0.0:
        pad = SURFACE_MIN_HALF_EXTENT
    return lo - pad, hi + pad


def surface_field(session: PreparedSession, param: str) -> RbfField:
    if param == "d_ia":
        return session.field_ia
    if param == "d_zp":
        return session.field_zp
    raise ValueError(f"unknown surface parameter {param!r}; expected 'd_ia' or 'd_zp'")

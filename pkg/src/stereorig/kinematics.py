"""Camera path construction and evaluation.

Waypoint positions become a smooth positional curve in one of two modes:

* ``single-bezier``: one Bézier curve of degree m-1 whose control points
  are the waypoint positions, in order.  Smoothest possible blend, but the
  camera does not pass through interior waypoints.
* ``piecewise-c1``: a cubic Bézier per consecutive waypoint pair with
  Catmull-Rom tangents.  Interpolates every waypoint with a continuous
  first derivative.

Orientations are scheduled independently of position mode: the parameter
``u`` picks waypoint segment ``k = floor(u * (m - 1))`` and the bracketing
quaternions are combined by shortest-arc spherical linear interpolation.

An optional arc-length table (dense chord-length sampling) supports
near-constant-speed traversal; without it, playback is uniform in ``u``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import PathDomainError
from .layout import DepthLayout, Waypoint

# Endpoint dot products above this use normalized lerp instead of slerp;
# the interpolation angle is too small for a stable sine division.
SLERP_DOT_LIMIT = 1.0 - 1e-10

ARC_TABLE_MIN_SAMPLES = 16


@dataclass(frozen=True, slots=True)
class Pose:
    """Camera station: position in meters plus unit orientation quaternion."""

    position: tuple[float, float, float]
    orientation: tuple[float, float, float, float]  # (w, x, y, z)


@dataclass(frozen=True)
class CameraPath:
    """Built positional curve plus orientation schedule.

    ``control_points`` is (m, 3) in single-bezier mode and (m-1, 4, 3) in
    piecewise-c1 mode (cubic Bézier control points per segment).
    ``orientations`` is the (m, 4) array of authored waypoint quaternions.
    """

    mode: str
    control_points: np.ndarray
    orientations: np.ndarray
    waypoint_count: int
    arc_table: np.ndarray | None = None  # (n, 2): normalized length -> u

    def __post_init__(self):
        self.control_points.setflags(write=False)
        self.orientations.setflags(write=False)
        if self.arc_table is not None:
            self.arc_table.setflags(write=False)


def _catmull_rom_segments(points: np.ndarray) -> np.ndarray:
    """Cubic Bézier control points per segment from Catmull-Rom tangents.

    Interior tangents average the neighbor chord; the ends use the one-sided
    chord so the curve starts and stops along its first and last legs.
    """
    m = points.shape[0]
    tangents = np.empty_like(points)
    tangents[0] = points[1] - points[0]
    tangents[-1] = points[-1] - points[-2]
    if m > 2:
        tangents[1:-1] = 0.5 * (points[2:] - points[:-2])
    segments = np.empty((m - 1, 4, 3))
    segments[:, 0] = points[:-1]
    segments[:, 1] = points[:-1] + tangents[:-1] / 3.0
    segments[:, 2] = points[1:] - tangents[1:] / 3.0
    segments[:, 3] = points[1:]
    return segments


def build_path(layout: DepthLayout, mode: str | None = None) -> CameraPath:
    """Construct the camera path for a layout.

    ``mode`` overrides the layout's own ``path_mode`` when given.  Requires
    at least two waypoints; raises PathDomainError otherwise.
    """
    mode = layout.path_mode if mode is None else mode
    m = len(layout.waypoints)
    if m < 2:
        raise PathDomainError(f"a camera path needs at least 2 waypoints, got {m}")
    points = np.array([wp.position for wp in layout.waypoints], dtype=np.float64)
    quats = np.array([wp.orientation for wp in layout.waypoints], dtype=np.float64)
    if mode == "single-bezier":
        control = points
    elif mode == "piecewise-c1":
        control = _catmull_rom_segments(points)
    else:
        raise PathDomainError(f"unknown path mode {mode!r}")
    return CameraPath(mode=mode, control_points=control, orientations=quats, waypoint_count=m)


def _check_param(u: float) -> float:
    if not (0.0 <= u <= 1.0):
        raise PathDomainError(f"path parameter must lie in [0, 1], got {u!r}")
    return float(u)


def de_casteljau(control: np.ndarray, t: float) -> np.ndarray:
    """Evaluate a Bézier curve by repeated linear interpolation.

    Numerically stable for all degrees (every intermediate point is a
    convex combination); the independent Bernstein-sum oracle in the tests
    agrees to 1e-12.
    """
    pts = control.astype(np.float64, copy=True)
    n = pts.shape[0]
    for level in range(1, n):
        pts[: n - level] = (1.0 - t) * pts[: n - level] + t * pts[1 : n - level + 1]
    return pts[0]


def _segment_of(u: float, m: int) -> tuple[int, float]:
    """Uniform mapping of u in [0,1] onto segment index and local fraction."""
    scaled = u * (m - 1)
    k = min(int(math.floor(scaled)), m - 2)
    return k, scaled - k


def eval_position(path: CameraPath, u: float) -> tuple[float, float, float]:
    """Position on the curve at parameter ``u`` in [0, 1]."""
    u = _check_param(u)
    if path.mode == "single-bezier":
        p = de_casteljau(path.control_points, u)
    else:
        k, s = _segment_of(u, path.waypoint_count)
        p = de_casteljau(path.control_points[k], s)
    return (float(p[0]), float(p[1]), float(p[2]))


def slerp(a: np.ndarray, b: np.ndarray, s: float) -> np.ndarray:
    """Shortest-arc spherical linear interpolation of unit quaternions.

    Negates ``b`` when the endpoints straddle hemispheres, and falls back
    to normalized linear interpolation when the angle between them is too
    small for a stable sine division.
    """
    dot = float(a @ b)
    if dot < 0.0:
        b = -b
        dot = -dot
    if dot > SLERP_DOT_LIMIT:
        out = (1.0 - s) * a + s * b
        return out / math.sqrt(float(out @ out))
    theta = math.acos(min(dot, 1.0))
    sin_theta = math.sin(theta)
    wa = math.sin((1.0 - s) * theta) / sin_theta
    wb = math.sin(s * theta) / sin_theta
    return wa * a + wb * b


def eval_orientation(path: CameraPath, u: float) -> tuple[float, float, float, float]:
    """Orientation at parameter ``u``: slerp between the bracketing waypoints."""
    u = _check_param(u)
    k, s = _segment_of(u, path.waypoint_count)
    q = slerp(path.orientations[k], path.orientations[k + 1], s)
    return (float(q[0]), float(q[1]), float(q[2]), float(q[3]))


def eval_pose(path: CameraPath, u: float) -> Pose:
    return Pose(position=eval_position(path, u), orientation=eval_orientation(path, u))


def build_arc_table(path: CameraPath, samples: int = 256) -> np.ndarray:
    """Normalized cumulative chord-length table over ``samples`` curve spans.

    Returns an (n, 2) array of (normalized arc length, u) rows, strictly
    increasing in both columns, with endpoints exactly (0, 0) and (1, 1).
    Chord lengths converge to true arc length as ``samples`` grows; 256 is
    plenty for playback pacing.
    """
    if samples < ARC_TABLE_MIN_SAMPLES:
        raise PathDomainError(f"arc table needs at least {ARC_TABLE_MIN_SAMPLES} samples, got {samples}")
    us = np.linspace(0.0, 1.0, samples + 1)
    pts = np.array([eval_position(path, float(u)) for u in us])
    chords = np.sqrt(np.sum(np.diff(pts, axis=0) ** 2, axis=1))
    cum = np.concatenate([[0.0], np.cumsum(chords)])
    total = cum[-1]
    if total <= 0.0:
        # Degenerate (all waypoints coincide in 3D): identity pacing.
        return np.column_stack([us, us])
    lengths = cum / total  # last entry is exactly 1.0
    # Strict monotonicity: drop repeats from zero-length spans, keep endpoints.
    keep = np.concatenate([[True], np.diff(lengths) > 0.0])
    keep[-1] = True
    return np.column_stack([lengths[keep], us[keep]])


def with_arc_table(path: CameraPath, samples: int = 256) -> CameraPath:
    return CameraPath(
        mode=path.mode,
        control_points=path.control_points,
        orientations=path.orientations,
        waypoint_count=path.waypoint_count,
        arc_table=build_arc_table(path, samples),
    )


def remap_arc_length(table: np.ndarray, s: float) -> float:
    """Curve parameter u whose normalized arc length is ``s`` (linear lookup)."""
    if not (0.0 <= s <= 1.0):
        raise PathDomainError(f"arc-length fraction must lie in [0, 1], got {s!r}")
    lengths = table[:, 0]
    us = table[:, 1]
    i = int(np.searchsorted(lengths, s, side="right"))
    if i <= 0:
        return float(us[0])
    if i >= len(lengths):
        return float(us[-1])
    frac = (s - lengths[i - 1]) / (lengths[i] - lengths[i - 1])
    return float(us[i - 1] + frac * (us[i] - us[i - 1]))


def waypoint_knot(path: CameraPath, index: int) -> float:
    """Curve parameter at which piecewise mode passes waypoint ``index``."""
    return index / (path.waypoint_count - 1)


def path_samples(path: CameraPath, n: int) -> list[Pose]:
    """n poses uniform in parameter, endpoints included."""
    if n < 2:
        raise PathDomainError(f"need at least 2 samples, got {n}")
    return [eval_pose(path, i / (n - 1)) for i in range(n)]


def ground_track(waypoints: tuple[Waypoint, ...]) -> np.ndarray:
    """(m, 2) ground-plane projections of the waypoints, in authoring order."""
    return np.array([wp.ground_point() for wp in waypoints], dtype=np.float64)

"""Authored stereoscopic camera control for scripted VR experiences.

Waypoints carry camera poses plus per-location stereo parameters; smooth
radial-basis interpolation turns them into continuous parameter fields,
a Bézier path moves the camera, a comfort limiter keeps the zero-parallax
distance inside a safe angular band, and swapped asymmetric frusta turn
each frame's parameters into per-eye projection matrices.
"""

from .comfort import (
    DEFAULT_BAND,
    NARROW_BAND,
    AngleState,
    ClampResult,
    ComfortBand,
    angle_delta,
    band_ratios,
    clamp_zero_parallax,
    default_delta,
)
from .errors import (
    AsymmetricEyesError,
    DegenerateInterpolantError,
    InvalidLayoutError,
    LayoutFormatError,
    PathDomainError,
    ProjectionError,
    SingularSystemError,
    StereoRigError,
    UnsatisfiableBandError,
)
from .kinematics import (
    CameraPath,
    Pose,
    build_arc_table,
    build_path,
    eval_orientation,
    eval_pose,
    eval_position,
    path_samples,
    remap_arc_length,
    slerp,
    with_arc_table,
)
from .layout import (
    DEFAULT_HMD,
    DepthLayout,
    EyeFrustumTangents,
    HmdProfile,
    Violation,
    Waypoint,
    deserialize_layout,
    serialize_layout,
    validate_layout,
    with_waypoints,
)
from .pipeline import (
    DepthChartSeries,
    DepthProbeSeries,
    FrameRecord,
    PreparedSession,
    depth_chart,
    default_surface_bounds,
    eval_frame,
    eval_frames,
    prepare,
    surface_field,
)
from .projection import (
    FrustumExtents,
    StereoProjectionPair,
    assemble_projection,
    build_projection_pair,
    eye_offset,
    half_width_at_zp,
    side_widths,
    swapped_extents,
)
from .rbf import RbfField, basis_eval, evaluate_grid, kernel_matrix, solve_field

__version__ = "0.1.0"

__all__ = [
    "AngleState",
    "AsymmetricEyesError",
    "CameraPath",
    "ClampResult",
    "ComfortBand",
    "DEFAULT_BAND",
    "DEFAULT_HMD",
    "DegenerateInterpolantError",
    "DepthChartSeries",
    "DepthLayout",
    "DepthProbeSeries",
    "EyeFrustumTangents",
    "FrameRecord",
    "FrustumExtents",
    "HmdProfile",
    "InvalidLayoutError",
    "LayoutFormatError",
    "NARROW_BAND",
    "PathDomainError",
    "Pose",
    "PreparedSession",
    "ProjectionError",
    "RbfField",
    "SingularSystemError",
    "StereoProjectionPair",
    "StereoRigError",
    "UnsatisfiableBandError",
    "Violation",
    "Waypoint",
    "angle_delta",
    "assemble_projection",
    "band_ratios",
    "basis_eval",
    "build_arc_table",
    "build_path",
    "build_projection_pair",
    "clamp_zero_parallax",
    "default_delta",
    "default_surface_bounds",
    "depth_chart",
    "deserialize_layout",
    "evaluate_grid",
    "eval_frame",
    "eval_frames",
    "eval_orientation",
    "eval_pose",
    "eval_position",
    "eye_offset",
    "half_width_at_zp",
    "kernel_matrix",
    "path_samples",
    "prepare",
    "remap_arc_length",
    "serialize_layout",
    "side_widths",
    "slerp",
    "solve_field",
    "surface_field",
    "swapped_extents",
    "validate_layout",
    "with_arc_table",
    "with_waypoints",
]

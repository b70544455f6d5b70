"""Dynamic zero-parallax comfort clamping.

When the left/right view frusta are swapped, each eye's frustum has an
expanded side and a condensed side about the view axis.  The half-angle
difference between those sides grows as the zero-parallax plane moves
toward the cameras, pulling the viewer's eyes outward.  This module
restricts the zero-parallax distance so that difference stays inside a
configured band around the HMD's own default asymmetry: too far out
risks double vision, too far in risks eye strain.

Geometry: with slope ``k = aspect * tan(fov/2)`` (half-width of the
symmetric frustum per unit distance) and ``s = d_ia / (2 * d_zp)``,

    expanded half-angle  = atan(k + s)
    condensed half-angle = atan(k - s)
    delta                = atan(k + s) - atan(k - s)

``delta`` depends on d_ia and d_zp only through ``s`` and is strictly
increasing in ``s``, so each band edge corresponds to one ratio ``s``
that can be solved once per (profile, band) and reused for every frame.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import TYPE_CHECKING

from .errors import AsymmetricEyesError, UnsatisfiableBandError

if TYPE_CHECKING:
    from .layout import HmdProfile

EYE_AGREEMENT_TOL = 1e-9  # rad; both eyes must report the same default delta
BISECTION_TOL = 1e-9      # rad; band edges are located to this accuracy in delta


@dataclass(frozen=True, slots=True)
class ComfortBand:
    """Allowed half-angle-difference offsets from the HMD default, in degrees."""

    lo_deg: float
    hi_deg: float

    def __post_init__(self):
        if not self.lo_deg < self.hi_deg:
            raise ValueError(f"comfort band requires lo < hi, got ({self.lo_deg}, {self.hi_deg})")
        if not (self.lo_deg <= 0.0 <= self.hi_deg):
            raise ValueError("comfort band must contain 0 (the HMD default)")


#: Wide preset: generous room below the default, one degree above it.
DEFAULT_BAND = ComfortBand(lo_deg=-10.0, hi_deg=1.0)

#: Symmetric one-degree preset for conservative authoring.
NARROW_BAND = ComfortBand(lo_deg=-1.0, hi_deg=1.0)


@dataclass(frozen=True, slots=True)
class AngleState:
    """Half angles of a swapped frustum's two sides about the view axis."""

    expanded: float       # rad, the wider side
    condensed: float      # rad, the narrower side
    delta: float          # expanded - condensed
    delta_default: float  # the HMD profile's own asymmetry baseline


@dataclass(frozen=True, slots=True)
class ClampResult:
    d_zp: float
    was_clamped: bool
    active_bound: str  # "none" | "near" | "far"


def default_delta(profile: HmdProfile) -> float:
    """Half-angle difference of the profile's default (unmodified) frusta.

    The outer (temple-side) plane of a consumer HMD frustum is wider than
    the inner one; the default delta is ``atan(|outer|) - atan(|inner|)``,
    where outer is the left plane for the left eye and the right plane for
    the right eye.  Both eyes must agree within EYE_AGREEMENT_TOL or the
    profile is rejected as malformed.
    """
    left = math.atan(abs(profile.tangents_left.left)) - math.atan(abs(profile.tangents_left.right))
    right = math.atan(abs(profile.tangents_right.right)) - math.atan(abs(profile.tangents_right.left))
    if abs(left - right) > EYE_AGREEMENT_TOL:
        raise AsymmetricEyesError(
            f"per-eye default half-angle offsets disagree: {left!r} vs {right!r} rad"
        )
    return left


def angle_delta(profile: HmdProfile, d_ia: float, d_zp: float) -> AngleState:
    """Half-angle state of the swapped frusta at the given parameters."""
    if d_zp <= 0.0:
        raise ValueError(f"d_zp must be positive, got {d_zp}")
    if d_ia < 0.0:
        raise ValueError(f"d_ia must be nonnegative, got {d_ia}")
    slope = profile.horizontal_half_slope()
    ratio = d_ia / (2.0 * d_zp)
    expanded = math.atan(slope + ratio)
    condensed = math.atan(slope - ratio)
    return AngleState(
        expanded=expanded,
        condensed=condensed,
        delta=expanded - condensed,
        delta_default=default_delta(profile),
    )


def _delta_of_ratio(slope: float, ratio: float) -> float:
    return math.atan(slope + ratio) - math.atan(slope - ratio)


def _bisect_ratio(slope: float, target: float) -> float:
    """Solve delta(ratio) = target for ratio on (0, slope) by bisection.

    delta is strictly increasing in ratio, so the bracket never loses the
    root; iterate until the bracket maps to a delta interval narrower than
    BISECTION_TOL.
    """
    lo, hi = 0.0, slope
    d_lo, d_hi = 0.0, _delta_of_ratio(slope, slope)
    for _ in range(200):
        if d_hi - d_lo <= BISECTION_TOL:
            break
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:  # bracket exhausted at double precision
            break
        d_mid = _delta_of_ratio(slope, mid)
        if d_mid < target:
            lo, d_lo = mid, d_mid
        else:
            hi, d_hi = mid, d_mid
    return 0.5 * (lo + hi)


@lru_cache(maxsize=None)
def band_ratios(profile: HmdProfile, band: ComfortBand) -> tuple[float, float]:
    """Ratios s = d_ia/(2*d_zp) at which delta meets the band edges.

    Returns ``(ratio_hi, ratio_lo)``:

    * ``ratio_hi`` bounds the near side: d_zp below ``d_ia/(2*ratio_hi)``
      pushes delta above ``delta_default + hi``.  ``inf`` when the band's
      upper edge lies beyond any reachable delta (no near clamp).
    * ``ratio_lo`` bounds the far side: d_zp above ``d_ia/(2*ratio_lo)``
      drops delta below ``delta_default + lo``.  0 when the lower edge is
      at or below zero delta (no far clamp).
    """
    base = default_delta(profile)
    slope = profile.horizontal_half_slope()
    delta_max = _delta_of_ratio(slope, slope)

    target_hi = base + math.radians(band.hi_deg)
    target_lo = base + math.radians(band.lo_deg)

    if target_hi <= 0.0:
        # Even a symmetric frustum (delta = 0) sits above the band.
        raise UnsatisfiableBandError(
            f"band upper edge {target_hi!r} rad is below the minimum achievable delta 0"
        )
    ratio_hi = math.inf if target_hi >= delta_max else _bisect_ratio(slope, target_hi)
    ratio_lo = 0.0 if target_lo <= 0.0 else _bisect_ratio(slope, target_lo)
    return ratio_hi, ratio_lo


def clamp_zero_parallax(
    profile: HmdProfile, band: ComfortBand, d_ia: float, d_zp_raw: float
) -> ClampResult:
    """Clamp d_zp_raw to the nearest value whose delta sits inside the band.

    delta is strictly decreasing in d_zp for fixed d_ia > 0, so the band
    maps to the interval [d_ia/(2*ratio_hi), d_ia/(2*ratio_lo)] and the
    nearest in-band value is plain interval clamping.  With d_ia = 0 the
    delta is identically zero: the raw value passes through when the band
    reaches down to the symmetric state, otherwise no d_zp can satisfy
    the band and the configuration is reported unsatisfiable.
    """
    if d_ia < 0.0:
        raise ValueError(f"d_ia must be nonnegative, got {d_ia}")
    if d_zp_raw <= 0.0:
        raise ValueError(f"d_zp_raw must be positive, got {d_zp_raw}")
    ratio_hi, ratio_lo = band_ratios(profile, band)

    if d_ia == 0.0:
        base = default_delta(profile)
        if math.radians(band.lo_deg) <= -base <= math.radians(band.hi_deg):
            return ClampResult(d_zp_raw, False, "none")
        raise UnsatisfiableBandError(
            "zero interaxial separation pins delta to 0, "
            f"outside the band around default delta {base!r} rad"
        )

    near_limit = d_ia / (2.0 * ratio_hi) if math.isfinite(ratio_hi) else 0.0
    far_limit = d_ia / (2.0 * ratio_lo) if ratio_lo > 0.0 else math.inf
    if near_limit > far_limit:
        raise UnsatisfiableBandError(
            f"band admits no zero-parallax distance at d_ia={d_ia!r}: "
            f"near limit {near_limit!r} exceeds far limit {far_limit!r}"
        )
    if d_zp_raw < near_limit:
        return ClampResult(near_limit, True, "near")
    if d_zp_raw > far_limit:
        return ClampResult(far_limit, True, "far")
    return ClampResult(d_zp_raw, False, "none")

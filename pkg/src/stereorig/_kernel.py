"""Compiled per-frame evaluation core.

One njit call does everything a frame needs: curve point, slerp, the two
RBF evaluations, the comfort clamp, and both projection matrices.  The
Python wrapper in pipeline.py only unpacks the output buffer into domain
objects, which keeps the amortized frame cost in single-digit microseconds.

The arithmetic here deliberately mirrors the reference modules
expression-for-expression (kinematics.de_casteljau / kinematics.slerp,
comfort.clamp_zero_parallax, projection.assemble_projection) so that a
frame's matrices are bit-identical to building them through the plain
Python path from the same (d_ia, d_zp).

Scalar pack layout (sc):
  0 mode (0 = single-bezier, 1 = piecewise-c1)
  1 waypoint count m
  2 horizontal half slope k
  3 near         4 far
  5 ratio_hi (inf = no near clamp)   6 ratio_lo (0 = no far clamp)
  7 zero-d_ia passthrough allowed (1/0)
  8 fixed-parameter mode flag (1/0)  9 fixed d_ia   10 fixed d_zp
  11 r0 squared
  12 left b   13 left t   14 right b   15 right t   (vertical extents at near)

Output buffer layout (out, length 46):
  0:3 position  3:7 quaternion  7 eye_offset  8 d_ia  9 d_zp_raw
  10 d_zp  11 was_clamped  12 cn  13 bn  14:30 left matrix  30:46 right matrix

Status codes: 0 ok; 1 zero d_ia outside band; 2 raw zero-parallax distance
at or inside the near plane; 3 interaxial separation at least the frustum
width (condensed side vanishes).
"""

import math

import numpy as np
from numba import njit

SLERP_DOT_LIMIT = 1.0 - 1e-10  # keep in sync with kinematics.SLERP_DOT_LIMIT


# numpy error model: float division follows IEEE-754, so an open band edge
# (ratio 0 or inf) turns into an infinite or zero clamp limit by itself.
@njit(cache=True, error_model="numpy")
def eval_frame_into(u, ctrl, quats, rbf, sc, out):
    m = int(sc[1])

    # Segment mapping shared by piecewise position and orientation.
    scaled = u * (m - 1)
    k_seg = int(math.floor(scaled))
    if k_seg > m - 2:
        k_seg = m - 2
    s_seg = scaled - k_seg

    # Position by de Casteljau, single curve or segment-local cubic.
    if sc[0] == 0.0:
        npts = m
        base = 0
        t_loc = u
    else:
        npts = 4
        base = 4 * k_seg
        t_loc = s_seg
    wx = np.empty(npts)
    wy = np.empty(npts)
    wz = np.empty(npts)
    for i in range(npts):
        wx[i] = ctrl[base + i, 0]
        wy[i] = ctrl[base + i, 1]
        wz[i] = ctrl[base + i, 2]
    omt = 1.0 - t_loc
    for level in range(1, npts):
        for i in range(npts - level):
            wx[i] = omt * wx[i] + t_loc * wx[i + 1]
            wy[i] = omt * wy[i] + t_loc * wy[i + 1]
            wz[i] = omt * wz[i] + t_loc * wz[i + 1]
    out[0] = wx[0]
    out[1] = wy[0]
    out[2] = wz[0]

    # Orientation: shortest-arc slerp with nlerp fallback near zero angle.
    a0 = quats[k_seg, 0]
    a1 = quats[k_seg, 1]
    a2 = quats[k_seg, 2]
    a3 = quats[k_seg, 3]
    b0 = quats[k_seg + 1, 0]
    b1 = quats[k_seg + 1, 1]
    b2 = quats[k_seg + 1, 2]
    b3 = quats[k_seg + 1, 3]
    dot = a0 * b0 + a1 * b1 + a2 * b2 + a3 * b3
    if dot < 0.0:
        b0 = -b0
        b1 = -b1
        b2 = -b2
        b3 = -b3
        dot = -dot
    if dot > SLERP_DOT_LIMIT:
        q0 = (1.0 - s_seg) * a0 + s_seg * b0
        q1 = (1.0 - s_seg) * a1 + s_seg * b1
        q2 = (1.0 - s_seg) * a2 + s_seg * b2
        q3 = (1.0 - s_seg) * a3 + s_seg * b3
        inv = 1.0 / math.sqrt(q0 * q0 + q1 * q1 + q2 * q2 + q3 * q3)
        q0 *= inv
        q1 *= inv
        q2 *= inv
        q3 *= inv
    else:
        theta = math.acos(min(dot, 1.0))
        sin_theta = math.sin(theta)
        wa = math.sin((1.0 - s_seg) * theta) / sin_theta
        wb = math.sin(s_seg * theta) / sin_theta
        q0 = wa * a0 + wb * b0
        q1 = wa * a1 + wb * b1
        q2 = wa * a2 + wb * b2
        q3 = wa * a3 + wb * b3
    out[3] = q0
    out[4] = q1
    out[5] = q2
    out[6] = q3

    # Stereo parameters from the two RBF fields at the ground-plane point.
    px = out[0]
    pz = out[2]
    r0sq = sc[11]
    acc_ia = 0.0
    acc_zp = 0.0
    for i in range(m):
        dx = px - rbf[i, 0]
        dz = pz - rbf[i, 1]
        phi = 1.0 / math.sqrt(dx * dx + dz * dz + r0sq)
        acc_ia += rbf[i, 2] * phi
        acc_zp += rbf[i, 3] * phi
    d_ia = acc_ia if acc_ia > 0.0 else 0.0  # interpolant may undershoot
    d_zp_raw = acc_zp
    if sc[8] == 1.0:
        d_ia = sc[9]
        d_zp_raw = sc[10]

    near = sc[3]
    if d_zp_raw <= near:
        out[9] = d_zp_raw
        return 2

    # Comfort clamp; IEEE division handles the open band edges
    # (ratio_hi = inf -> near limit 0, ratio_lo = 0 -> far limit inf).
    was_clamped = 0.0
    if d_ia == 0.0:
        if sc[7] != 1.0:
            return 1
        d_zp = d_zp_raw
    else:
        near_limit = d_ia / (2.0 * sc[5])
        far_limit = d_ia / (2.0 * sc[6])
        if d_zp_raw < near_limit:
            d_zp = near_limit
            was_clamped = 1.0
        elif d_zp_raw > far_limit:
            d_zp = far_limit
            was_clamped = 1.0
        else:
            d_zp = d_zp_raw

    # Swapped-frustum extents and both projection matrices.
    k_slope = sc[2]
    a = d_zp * k_slope
    if d_ia >= 2.0 * a:
        out[8] = d_ia
        out[10] = d_zp
        return 3
    b = a - 0.5 * d_ia
    c = a + 0.5 * d_ia
    cn = c * near / d_zp
    bn = b * near / d_zp

    out[7] = 0.5 * d_ia
    out[8] = d_ia
    out[9] = d_zp_raw
    out[10] = d_zp
    out[11] = was_clamped
    out[12] = cn
    out[13] = bn

    far = sc[4]
    m22 = -(far + near) / (far - near)
    m23 = -2.0 * far * near / (far - near)
    for i in range(14, 46):
        out[i] = 0.0

    # Left eye: l = -cn, r = bn.
    ll = -cn
    rr = bn
    bb = sc[12]
    tt = sc[13]
    out[14] = 2.0 * near / (rr - ll)
    out[16] = (rr + ll) / (rr - ll)
    out[19] = 2.0 * near / (tt - bb)
    out[20] = (tt + bb) / (tt - bb)
    out[24] = m22
    out[25] = m23
    out[28] = -1.0

    # Right eye: l = -bn, r = cn.
    ll = -bn
    rr = cn
    bb = sc[14]
    tt = sc[15]
    out[30] = 2.0 * near / (rr - ll)
    out[32] = (rr + ll) / (rr - ll)
    out[35] = 2.0 * near / (tt - bb)
    out[36] = (tt + bb) / (tt - bb)
    out[40] = m22
    out[41] = m23
    out[44] = -1.0
    return 0

"""Radial basis function interpolation over ground-plane waypoint positions.

Each stereoscopic parameter (interaxial separation, zero-parallax distance)
is treated as a scalar field over the horizontal ground plane, known only at
the authored waypoints.  An RBF interpolant

    f(p) = sum_k  w_k * phi(|p - c_k|)

reproduces the authored values exactly at the waypoint centers ``c_k`` and
blends smoothly between them everywhere else.  The default basis is the
inverse multiquadric

    phi(r) = 1 / sqrt(r**2 + r0**2)

whose shape parameter ``r0`` sets the spatial falloff: small values localize
each waypoint's influence, large values flatten the blend.  The kernel matrix
``K[i, j] = phi(|c_i - c_j|)`` is symmetric positive definite for distinct
centers, so the weight system ``K w = y`` has a unique solution.

No polynomial term is appended, so constant fields are *not* reproduced away
from the centers; the interpolant decays toward zero far from all waypoints.
That matches the intended use (parameters are only meaningful near the
authored path) but callers wanting a constant-everywhere field should use the
pipeline's fixed-parameter mode instead of a one-value interpolant.

Weights are solved with partially pivoted LU factorization plus one step of
iterative refinement.  A near-singular kernel matrix almost always means two
waypoints (nearly) coincide on the ground plane; the raised error names the
closest pair so the author knows which waypoint to move.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInterpolantError, SingularSystemError

# Pivots below this fraction of the kernel's max magnitude mean the system
# is numerically singular and weights would be garbage.
PIVOT_RTOL = 1e-12

# The factorization is rejected unless the recomputed residual satisfies
# max|K w - y| <= RESIDUAL_RTOL * (1 + max|y|).
RESIDUAL_RTOL = 1e-9


def _basis_sq(r2: np.ndarray | float, r0: float, kind: str = "imq"):
    """Basis evaluated at *squared* distances (the hot-path form).

    The inverse multiquadric folds the square root into itself, so every
    internal caller works with r² and skips one sqrt per distance.
    """
    if kind == "imq":
        return 1.0 / np.sqrt(r2 + r0 * r0)
    if kind == "gaussian":
        return np.exp(-np.asarray(r2) / (r0 * r0))
    raise ValueError(f"unknown basis kind {kind!r}")


def basis_eval(r: float, r0: float, kind: str = "imq") -> float:
    """Evaluate the radial basis at distance ``r``.

    Parameters
    ----------
    r : float
        Euclidean distance; must be nonnegative and finite.
    r0 : float
        Shape parameter in the same length units as the distance.
    kind : str
        ``"imq"`` (inverse multiquadric, the default everywhere) or
        ``"gaussian"`` (``exp(-r**2 / r0**2)``), kept for side-by-side
        conditioning experiments.

    The inverse multiquadric is ``1/sqrt(r**2 + r0**2)``: finite and
    positive at r = 0 (where it equals 1/r0) and strictly decreasing.
    """
    if not (isinstance(r, (int, float)) and math.isfinite(r) and r >= 0.0):
        raise ValueError(f"distance must be a nonnegative finite number, got {r!r}")
    return float(_basis_sq(float(r) * float(r), r0, kind))


def kernel_matrix(centers: np.ndarray, r0: float, kind: str = "imq") -> np.ndarray:
    """Dense pairwise kernel matrix for the given (m, 2) center array.

    Symmetric bit-for-bit: opposite off-diagonal entries square the exact
    negations of each other's coordinate differences, so they evaluate the
    basis at identical squared distances.
    """
    diff = centers[:, None, :] - centers[None, :, :]
    r2 = np.einsum("ijk,ijk->ij", diff, diff)
    return _basis_sq(r2, r0, kind)


def _nearest_pair(centers: np.ndarray) -> tuple[int, int]:
    """Indices of the closest pair of centers, for singularity diagnostics."""
    m = centers.shape[0]
    best = (0, 1)
    best_d = math.inf
    for i in range(m):
        for j in range(i + 1, m):
            d = float(np.hypot(*(centers[i] - centers[j])))
            if d < best_d:
                best_d = d
                best = (i, j)
    return best


def _lu_solve(k: np.ndarray, y: np.ndarray, centers: np.ndarray) -> np.ndarray:
    """Solve ``k x = y`` by LU with partial pivoting, in float64 throughout.

    Hand-rolled rather than delegated so the pivot check can raise a
    waypoint-aware error: when a pivot collapses relative to the kernel's
    scale, the system is singular because two centers (nearly) coincide,
    and the exception names the closest pair.
    """
    m = k.shape[0]
    a = k.astype(np.float64, copy=True)
    perm = np.arange(m)
    threshold = PIVOT_RTOL * float(np.max(np.abs(k)))

    for col in range(m):
        pivot_row = col + int(np.argmax(np.abs(a[col:, col])))
        if abs(a[pivot_row, col]) <= threshold:
            i, j = _nearest_pair(centers)
            raise SingularSystemError(
                f"interpolation system is singular (pivot {abs(a[pivot_row, col]):.3e} "
                f"below threshold {threshold:.3e}); waypoints {i} and {j} are the "
                f"closest pair on the ground plane",
                nearest_pair=(i, j),
            )
        if pivot_row != col:
            a[[col, pivot_row]] = a[[pivot_row, col]]
            perm[[col, pivot_row]] = perm[[pivot_row, col]]
        # Store multipliers in the eliminated column (compact LU).
        a[col + 1:, col] /= a[col, col]
        a[col + 1:, col + 1:] -= np.outer(a[col + 1:, col], a[col, col + 1:])

    def substitute(rhs: np.ndarray) -> np.ndarray:
        x = rhs[perm].astype(np.float64, copy=True)
        for col in range(m):                        # forward: L has unit diagonal
            x[col + 1:] -= a[col + 1:, col] * x[col]
        for col in range(m - 1, -1, -1):            # backward
            x[col] /= a[col, col]
            x[:col] -= a[:col, col] * x[col]
        return x

    x = substitute(y)
    # One step of iterative refinement tightens the last couple of bits,
    # which the exactness guarantee at the centers leans on.
    x += substitute(y - k @ x)
    return x


@dataclass(frozen=True)
class RbfField:
    """A solved scalar interpolant over the ground plane.

    Keeps the sampled values it was fitted to (for exactness checks) and
    the verified solve residual ``max|K w - y|``.
    """

    centers: np.ndarray   # (m, 2) float64, read-only
    weights: np.ndarray   # (m,) float64, read-only
    values: np.ndarray    # (m,) float64, read-only; the fitted samples
    r0: float
    residual: float
    kind: str = "imq"

    def __post_init__(self):
        self.centers.setflags(write=False)
        self.weights.setflags(write=False)
        self.values.setflags(write=False)

    def __call__(self, points: np.ndarray) -> np.ndarray:
        """Evaluate at an (n, 2) array of ground-plane points; returns (n,)."""
        pts = np.asarray(points, dtype=np.float64)
        squeeze = pts.ndim == 1
        pts = np.atleast_2d(pts)
        diff = pts[:, None, :] - self.centers[None, :, :]
        r2 = np.einsum("ijk,ijk->ij", diff, diff)
        out = _basis_sq(r2, self.r0, self.kind) @ self.weights
        return out[0] if squeeze else out

    def at(self, x: float, z: float) -> float:
        """Scalar evaluation at one ground-plane point."""
        r2 = (x - self.centers[:, 0]) ** 2 + (z - self.centers[:, 1]) ** 2
        return float(_basis_sq(r2, self.r0, self.kind) @ self.weights)


def solve_field(centers, values, r0: float, kind: str = "imq") -> RbfField:
    """Fit an RBF interpolant through ``values`` at ``centers``.

    Parameters
    ----------
    centers : (m, 2) array-like
        Ground-plane waypoint positions.  Must be pairwise distinct; a
        coincident pair makes the kernel matrix singular.
    values : (m,) array-like
        Authored parameter value at each center.
    r0 : float
        Basis shape parameter (meters).  Must be positive.
    kind : str
        Basis name accepted by :func:`basis_eval`.

    Returns
    -------
    RbfField
        Interpolant with ``field.at(x, z) == value`` at every center up to
        solver tolerance (verified: residual <= 1e-9 * (1 + max|values|)).

    Raises
    ------
    DegenerateInterpolantError
        Fewer than one center, shape mismatch, or nonpositive ``r0``.
    SingularSystemError
        Kernel matrix numerically singular; message names the closest
        pair of centers.
    """
    c = np.asarray(centers, dtype=np.float64)
    y = np.asarray(values, dtype=np.float64)
    if c.ndim != 2 or c.shape[1] != 2:
        raise DegenerateInterpolantError(f"centers must be an (m, 2) array, got shape {c.shape}")
    if y.shape != (c.shape[0],):
        raise DegenerateInterpolantError(
            f"need one value per center: {c.shape[0]} centers but values shape {y.shape}")
    if c.shape[0] < 1:
        raise DegenerateInterpolantError("an interpolant needs at least one center")
    if not (math.isfinite(r0) and r0 > 0.0):
        raise DegenerateInterpolantError(f"shape parameter must be positive and finite, got {r0!r}")
    if not np.all(np.isfinite(c)) or not np.all(np.isfinite(y)):
        raise DegenerateInterpolantError("centers and values must be finite")

    k = kernel_matrix(c, r0, kind)
    w = _lu_solve(k, y, c)

    residual = float(np.max(np.abs(k @ w - y)))
    bound = RESIDUAL_RTOL * (1.0 + float(np.max(np.abs(y))))
    if residual > bound:
        i, j = _nearest_pair(c) if c.shape[0] > 1 else (0, 0)
        raise SingularSystemError(
            f"interpolation weights failed verification (residual {residual:.3e} "
            f"exceeds {bound:.3e}); the kernel system is too ill-conditioned, "
            f"likely because waypoints {i} and {j} nearly coincide",
            nearest_pair=(i, j),
        )
    return RbfField(centers=c, weights=w, values=y, r0=r0, residual=residual, kind=kind)


def evaluate_grid(field: RbfField, bounds: tuple[float, float, float, float],
                  res: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Sample ``field`` on a regular res-by-res grid.

    ``bounds`` is (x_min, x_max, z_min, z_max).  Returns ``(xs, zs, values)``
    where ``values[i, j] == field.at(xs[j], zs[i])`` (row-major over z then x,
    the layout imaging code expects).
    """
    x_min, x_max, z_min, z_max = bounds
    if not (x_min < x_max and z_min < z_max):
        raise DegenerateInterpolantError(
            f"grid bounds must satisfy x_min < x_max and z_min < z_max, got {bounds!r}")
    if res < 2:
        raise DegenerateInterpolantError(f"grid resolution must be at least 2, got {res}")
    xs = np.linspace(x_min, x_max, res)
    zs = np.linspace(z_min, z_max, res)
    gx, gz = np.meshgrid(xs, zs)
    pts = np.column_stack([gx.ravel(), gz.ravel()])
    vals = field(pts).reshape(res, res)
    return xs, zs, vals

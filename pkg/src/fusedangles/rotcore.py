"""Quaternion and rotation matrix algebra, plus the angle helpers everything else uses.

Array conventions used throughout the package (all angles in radians):

    quat       (..., 4)     (w, x, y, z), Hamilton product, scalar first
    rotmat     (..., 3, 3)  columns are the body axes in global coordinates,
                            so the bottom row is the global z-axis expressed
                            in body coordinates
    tilt       (..., 3)     (psi, gamma, alpha)
    fused      (..., 4)     (psi, theta, phi, h) with h stored as +1.0/-1.0
    euler      (..., 3)     (yaw, pitch, roll), intrinsic ZYX
    axisangle  (..., 4)     (ux, uy, uz, angle)

Every function accepts array_like input with arbitrary leading batch
dimensions and returns numpy arrays.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

PI = np.pi
TWO_PI = 2.0 * np.pi

UNIT_TOL = 1e-9
ROTMAT_TOL = 1e-9


class DomainError(ValueError):
    """A value lies outside the domain of a rotation representation."""


class SineSumError(DomainError):
    pass


class FusedYawSingularError(DomainError):
    pass


def atan2(y, x):
    """``np.arctan2`` with ``atan2(0, 0) = 0`` for every signed zero."""
    y = np.asarray(y, dtype=float)
    x = np.asarray(x, dtype=float)
    out = np.arctan2(y, x)
    return np.where((y == 0.0) & (x == 0.0), 0.0, out)


def wrap(angle):
    """Wrap angles to the half-open interval (-pi, pi].

    Values already inside the interval are returned untouched, which makes
    the function exactly idempotent.

    >>> float(wrap(-np.pi))
    3.141592653589793
    """
    a = np.asarray(angle, dtype=float)
    if not np.all(np.isfinite(a)):
        raise DomainError("cannot wrap a non-finite angle")
    r = np.remainder(a + PI, TWO_PI) - PI
    r = np.where(r <= -PI, r + TWO_PI, r)
    r = np.where(r > PI, PI, r)
    return np.where((a > -PI) & (a <= PI), a, r)


def msign(x):
    """Sign function with ``msign(0) = +1``; returns +1.0 or -1.0."""
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise DomainError("msign of a non-finite value")
    return np.where(x >= 0.0, 1.0, -1.0)


def clamp_unit(v, name="value", tol=1e-9):
    """Clamp to [-1, 1]; excess beyond ``tol`` is a domain error."""
    v = np.asarray(v, dtype=float)
    if np.any(np.abs(v) > 1.0 + tol):
        raise DomainError(f"{name} outside [-1, 1] by more than {tol:g}")
    return np.clip(v, -1.0, 1.0)


def as_quat(q, check=True):
    """Return ``q`` as a float array of shape (..., 4), optionally checking unit norm."""
    q = np.asarray(q, dtype=float)
    if q.shape[-1:] != (4,):
        raise DomainError(f"quaternion must have 4 components, got shape {q.shape}")
    if check:
        if not np.all(np.isfinite(q)):
            raise DomainError("non-finite quaternion")
        dev = np.abs(np.sum(q * q, axis=-1) - 1.0)
        if np.any(dev > UNIT_TOL):
            raise DomainError(
                f"non-unit quaternion (|norm^2 - 1| = {np.max(dev):.3g} > {UNIT_TOL:g})"
            )
    return q


def quat_normalize(q):
    q = np.asarray(q, dtype=float)
    return q / np.linalg.norm(q, axis=-1, keepdims=True)


def quat_mul(a, b):
    """Hamilton product ``a * b``, renormalised.

    The result rotates by ``b`` first and then by ``a`` when acting on
    vectors, i.e. ``R(a * b) = R(a) @ R(b)``.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    aw, ax, ay, az = np.moveaxis(a, -1, 0)
    bw, bx, by, bz = np.moveaxis(b, -1, 0)
    out = np.stack(
        [
            aw * bw - ax * bx - ay * by - az * bz,
            aw * bx + ax * bw + ay * bz - az * by,
            aw * by - ax * bz + ay * bw + az * bx,
            aw * bz + ax * by - ay * bx + az * bw,
        ],
        axis=-1,
    )
    return quat_normalize(out)


def quat_conj(q):
    q = np.asarray(q, dtype=float)
    return q * np.array([1.0, -1.0, -1.0, -1.0])


def quat_rotate(q, v):
    """Rotate vector ``v`` by ``q``: body coordinates in, global coordinates out."""
    q = np.asarray(q, dtype=float)
    v = np.asarray(v, dtype=float)
    w = q[..., :1]
    u = q[..., 1:]
    t = 2.0 * np.cross(u, v)
    return v + w * t + np.cross(u, t)


def quat_dot(a, b):
    return np.sum(np.asarray(a, dtype=float) * np.asarray(b, dtype=float), axis=-1)


def quat_equal(a, b, tol=1e-12):
    """True where ``a`` and ``b`` agree up to global sign within ``tol``."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    dp = np.max(np.abs(a - b), axis=-1)
    dm = np.max(np.abs(a + b), axis=-1)
    return np.minimum(dp, dm) <= tol


def elementary_quat(axis, angle):
    """Quaternion of a rotation by ``angle`` about coordinate axis 'x', 'y' or 'z'."""
    angle = np.asarray(angle, dtype=float)
    idx = "xyz".index(axis) + 1
    q = np.zeros(angle.shape + (4,))
    q[..., 0] = np.cos(0.5 * angle)
    q[..., idx] = np.sin(0.5 * angle)
    return q


def axisangle_to_quat(axis, angle):
    axis = np.asarray(axis, dtype=float)
    angle = np.asarray(angle, dtype=float)
    n = np.linalg.norm(axis, axis=-1)
    if np.any(np.abs(n - 1.0) > 1e-12):
        raise DomainError("rotation axis must be a unit vector")
    half = 0.5 * angle[..., None]
    return np.concatenate([np.cos(half), axis * np.sin(half)], axis=-1)


def quat_to_axisangle(q):
    """Return ``(axis, angle)`` with ``angle`` in [0, pi].

    The zero rotation gets the axis (0, 0, 1). For half turns the axis is
    chosen with its first nonzero component positive.
    """
    q = as_quat(q)
    q = np.where(q[..., :1] < 0.0, -q, q)
    v = q[..., 1:]
    s = np.linalg.norm(v, axis=-1)
    angle = 2.0 * np.arctan2(s, q[..., 0])
    safe = np.where(s > 0.0, s, 1.0)[..., None]
    axis = np.where(s[..., None] > 0.0, v / safe, np.array([0.0, 0.0, 1.0]))
    # half turn: q and -q both have w = 0
    nz = axis != 0.0
    first = np.take_along_axis(axis, np.argmax(nz, axis=-1)[..., None], axis=-1)
    flip = (q[..., :1] == 0.0) & (first < 0.0)
    axis = np.where(flip, -axis, axis)
    return axis, angle


def quat_to_rotmat(q):
    q = as_quat(q)
    w, x, y, z = np.moveaxis(q, -1, 0)
    R = np.empty(q.shape[:-1] + (3, 3))
    R[..., 0, 0] = w * w + x * x - y * y - z * z
    R[..., 0, 1] = 2.0 * (x * y - w * z)
    R[..., 0, 2] = 2.0 * (x * z + w * y)
    R[..., 1, 0] = 2.0 * (x * y + w * z)
    R[..., 1, 1] = w * w - x * x + y * y - z * z
    R[..., 1, 2] = 2.0 * (y * z - w * x)
    R[..., 2, 0] = 2.0 * (x * z - w * y)
    R[..., 2, 1] = 2.0 * (y * z + w * x)
    R[..., 2, 2] = w * w - x * x - y * y + z * z
    return R


def rotmat_to_quat(R):
    """Matrix to quaternion, branching on the largest of (trace, diagonal).

    Each branch divides by the largest available pivot, so no branch is
    evaluated close to a zero denominator.
    """
    R = check_rotmat(R)
    r11, r12, r13 = R[..., 0, 0], R[..., 0, 1], R[..., 0, 2]
    r21, r22, r23 = R[..., 1, 0], R[..., 1, 1], R[..., 1, 2]
    r31, r32, r33 = R[..., 2, 0], R[..., 2, 1], R[..., 2, 2]
    tr = r11 + r22 + r33
    cands = np.stack(
        [
            np.stack([1.0 + tr, r32 - r23, r13 - r31, r21 - r12], axis=-1),
            np.stack([r32 - r23, 1.0 + r11 - r22 - r33, r12 + r21, r13 + r31], axis=-1),
            np.stack([r13 - r31, r12 + r21, 1.0 - r11 + r22 - r33, r23 + r32], axis=-1),
            np.stack([r21 - r12, r13 + r31, r23 + r32, 1.0 - r11 - r22 + r33], axis=-1),
        ],
        axis=-2,
    )
    pick = np.argmax(np.stack([tr, r11, r22, r33], axis=-1), axis=-1)
    q = np.take_along_axis(cands, pick[..., None, None], axis=-2)[..., 0, :]
    return quat_normalize(q)


@dataclass(frozen=True)
class RotMatReport:
    """Outcome of :func:`rotmat_validate`."""

    valid: bool
    orthonormality_residual: float
    det_deviation: float
    tol: float

    def __bool__(self):
        return self.valid

    def describe(self):
        if self.valid:
            return "valid rotation matrix"
        return (
            f"not a rotation matrix: max |R^T R - I| = {self.orthonormality_residual:.3g}, "
            f"|det R - 1| = {self.det_deviation:.3g} (tol {self.tol:g})"
        )


def rotmat_validate(R, tol=ROTMAT_TOL):
    """Check orthonormality and unit determinant over a whole batch."""
    R = np.asarray(R, dtype=float)
    if R.shape[-2:] != (3, 3):
        raise DomainError(f"rotation matrix must be 3x3, got shape {R.shape}")
    if not np.all(np.isfinite(R)):
        return RotMatReport(False, float("inf"), float("inf"), tol)
    gram = np.swapaxes(R, -1, -2) @ R
    resid = float(np.max(np.abs(gram - np.eye(3)), initial=0.0))
    det = float(np.max(np.abs(np.linalg.det(R) - 1.0), initial=0.0))
    return RotMatReport(resid <= tol and det <= tol, resid, det, tol)


def check_rotmat(R, tol=ROTMAT_TOL):
    R = np.asarray(R, dtype=float)
    report = rotmat_validate(R, tol)
    if not report:
        raise DomainError(report.describe())
    return R


def random_rotation(rng, size=None):
    """Haar-uniform random unit quaternions from a normalised 4D Gaussian.

    Parameters
    ----------
    rng : numpy.random.Generator
        Caller-owned generator; the function never seeds one itself.
    size : int or tuple, optional
        Batch shape. ``None`` returns a single quaternion of shape (4,).
    """
    shape = () if size is None else (size,) if np.isscalar(size) else tuple(size)
    g = rng.standard_normal(shape + (4,))
    return quat_normalize(g)

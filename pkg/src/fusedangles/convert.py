"""Conversions among fused angles, tilt angles, rotation matrices and quaternions.

The tilt rotation component of a rotation depends only on the global z-axis
expressed in body coordinates, ``z = (-sin(theta), sin(phi), cos(alpha))``,
which is also the bottom row of the rotation matrix.  The (gamma, alpha) and
(theta, phi, h) parameters are therefore computed from that vector.  Inverse
sines and cosines are evaluated as equivalent two-argument arctangents of the
vector components, which keeps full precision at the poles and at the
|theta| + |phi| = pi/2 boundary where asin/acos lose half their digits.
"""

from __future__ import annotations

import numpy as np

from .rotcore import (
    DomainError,
    SineSumError,
    as_quat,
    atan2,
    axisangle_to_quat,
    check_rotmat,
    elementary_quat,
    msign,
    quat_mul,
    quat_to_axisangle,
    quat_to_rotmat,
    rotmat_to_quat,
    wrap,
)

SINE_SUM_TOL = 1e-9
ACCEL_MIN_NORM = 1e-3

REPRS = ("quat", "rotmat", "tilt", "fused", "euler", "axisangle")


def _split(a, n, name):
    a = np.asarray(a, dtype=float)
    if a.shape[-1:] != (n,):
        raise DomainError(f"{name} must have {n} components, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise DomainError(f"non-finite {name}")
    return tuple(np.moveaxis(a, -1, 0))


def _check_hemi(h):
    if not np.all((h == 1.0) | (h == -1.0)):
        raise DomainError("hemisphere must be exactly 1 or -1")


def _check_alpha(alpha):
    if np.any((alpha < -1e-9) | (alpha > np.pi + 1e-9)):
        raise DomainError("tilt angle alpha must lie in [0, pi]")
    return np.clip(alpha, 0.0, np.pi)


def _sine_sum(theta, phi):
    """Return (sin theta, sin phi, 1 - sin^2 theta - sin^2 phi), validated.

    The remainder uses the product form cos(theta+phi)cos(theta-phi), and
    values within SINE_SUM_TOL of the boundary are projected onto it.
    """
    if np.any((np.abs(theta) > np.pi / 2 + 1e-9) | (np.abs(phi) > np.pi / 2 + 1e-9)):
        raise SineSumError("fused pitch and roll must lie in [-pi/2, pi/2]")
    st = np.sin(theta)
    sp = np.sin(phi)
    crit = st * st + sp * sp
    if np.any(crit > 1.0 + SINE_SUM_TOL):
        worst = float(np.max(np.abs(theta) + np.abs(phi)))
        raise SineSumError(
            f"sine sum criterion violated: sin^2(theta) + sin^2(phi) = {float(np.max(crit)):.6g} > 1 "
            f"(|theta| + |phi| = {worst:.6g} > pi/2)"
        )
    rem = np.maximum(_cos_sum(theta, phi) * _cos_sum(theta, -phi), 0.0)
    return st, sp, rem


def _cos_sum(a, b):
    """cos(a + b) corrected for the rounding error of the sum.

    Near the |theta| + |phi| = pi/2 boundary cos(a + b) is tiny and the
    plain sum loses most of its relative precision.
    """
    s = a + b
    bv = s - a
    err = (a - (s - bv)) + (b - bv)
    return np.cos(s) - np.sin(s) * err


# ---------------------------------------------------------------------------
# z-vector identifications


def zvec_from_fused(theta, phi, h):
    """Global z-axis in body coordinates for given fused pitch, roll and hemisphere."""
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    h = np.asarray(h, dtype=float)
    _check_hemi(h)
    st, sp, rem = _sine_sum(theta, phi)
    return np.stack(np.broadcast_arrays(-st, sp, h * np.sqrt(rem)), axis=-1)


def _check_zvec(z):
    z = np.asarray(z, dtype=float)
    n = np.linalg.norm(z, axis=-1, keepdims=True)
    if np.any(n < 1e-12):
        raise DomainError("z-vector has near-zero norm")
    if np.any(np.abs(n - 1.0) > 1e-6):
        raise DomainError("z-vector must have unit norm (within 1e-6)")
    return z / n


def _tilt_from_z(zx, zy, zz):
    gamma = atan2(-zx, zy)
    alpha = np.arctan2(np.hypot(zx, zy), zz)
    return gamma, alpha


def _fused_from_z(zx, zy, zz):
    theta = np.arctan2(-zx, np.hypot(zy, zz))
    phi = np.arctan2(zy, np.hypot(zx, zz))
    return theta, phi, msign(zz)


def tilt_params_from_zvec(z):
    """Return ``(gamma, alpha)`` for a unit z-vector."""
    z = _check_zvec(z)
    return _tilt_from_z(*np.moveaxis(z, -1, 0))


def fused_params_from_zvec(z):
    """Return ``(theta, phi, h)`` for a unit z-vector."""
    z = _check_zvec(z)
    return _fused_from_z(*np.moveaxis(z, -1, 0))


def tilt_from_accel(a, min_norm=ACCEL_MIN_NORM):
    """Identify the tilt rotation from a quasi-static accelerometer reading.

    Returns ``((theta, phi, h), (gamma, alpha))``. The fused yaw is not
    observable from gravity alone and is not returned.
    """
    a = np.asarray(a, dtype=float)
    n = np.linalg.norm(a, axis=-1, keepdims=True)
    if np.any(~np.isfinite(n)) or np.any(n <= min_norm):
        raise DomainError(f"acceleration norm must exceed {min_norm:g} m/s^2")
    z = a / n
    return fused_params_from_zvec(z), tilt_params_from_zvec(z)


# ---------------------------------------------------------------------------
# fused <-> tilt


def fused_to_tilt(F):
    psi, theta, phi, h = _split(F, 4, "fused angles")
    _check_hemi(h)
    st, sp, rem = _sine_sum(theta, phi)
    gamma = atan2(st, sp)
    alpha = np.arctan2(np.hypot(st, sp), h * np.sqrt(rem))
    return np.stack([psi, gamma, alpha], axis=-1)


def tilt_to_fused(T):
    psi, gamma, alpha = _split(T, 3, "tilt angles")
    alpha = _check_alpha(alpha)
    sa = np.sin(alpha)
    zx = -sa * np.sin(gamma)
    zy = sa * np.cos(gamma)
    zz = np.cos(alpha)
    theta, phi, _ = _fused_from_z(zx, zy, zz)
    h = np.where(alpha <= np.pi / 2, 1.0, -1.0)
    return np.stack([psi, theta, phi, h], axis=-1)


# ---------------------------------------------------------------------------
# rotation matrices


def _tilt_upper_rows(psi, gamma, alpha):
    beta = psi + gamma
    cg, sg = np.cos(gamma), np.sin(gamma)
    cb, sb = np.cos(beta), np.sin(beta)
    ca, sa = np.cos(alpha), np.sin(alpha)
    row1 = np.stack([cg * cb + ca * sg * sb, sg * cb - ca * cg * sb, sa * sb], axis=-1)
    row2 = np.stack([cg * sb - ca * sg * cb, sg * sb + ca * cg * cb, -sa * cb], axis=-1)
    return row1, row2


def tilt_to_rotmat(T):
    psi, gamma, alpha = _split(T, 3, "tilt angles")
    alpha = _check_alpha(alpha)
    row1, row2 = _tilt_upper_rows(psi, gamma, alpha)
    sa, ca = np.sin(alpha), np.cos(alpha)
    row3 = np.stack([-sa * np.sin(gamma), sa * np.cos(gamma), ca], axis=-1)
    return np.stack([row1, row2, row3], axis=-2)


def fused_to_rotmat(F):
    """Rotation matrix of fused angles; the bottom row is exactly the z-vector."""
    psi, theta, phi, h = _split(F, 4, "fused angles")
    _check_hemi(h)
    st, sp, rem = _sine_sum(theta, phi)
    ca = h * np.sqrt(rem)
    gamma = atan2(st, sp)
    alpha = np.arctan2(np.hypot(st, sp), ca)
    row1, row2 = _tilt_upper_rows(psi, gamma, alpha)
    row3 = np.stack([-st, sp, ca], axis=-1)
    return np.stack([row1, row2, row3], axis=-2)


def rotmat_fused_yaw(R):
    """Fused yaw of a rotation matrix via the four-case half-angle formula."""
    R = check_rotmat(R)
    r11, r12, r13 = R[..., 0, 0], R[..., 0, 1], R[..., 0, 2]
    r21, r22, r23 = R[..., 1, 0], R[..., 1, 1], R[..., 1, 2]
    r31, r32, r33 = R[..., 2, 0], R[..., 2, 1], R[..., 2, 2]
    tr = r11 + r22 + r33
    rm = np.maximum(np.maximum(r11, r22), r33)
    rz = 1.0 - r11 - r22 + r33
    half = np.select(
        [tr >= 0.0, rm == r33, rm == r22],
        [
            atan2(r21 - r12, 1.0 + tr),
            atan2(rz, r21 - r12),
            atan2(r32 + r23, r13 - r31),
        ],
        default=atan2(r13 + r31, r32 - r23),
    )
    return wrap(2.0 * half)


def rotmat_to_tilt(R):
    R = check_rotmat(R)
    gamma, alpha = _tilt_from_z(R[..., 2, 0], R[..., 2, 1], R[..., 2, 2])
    return np.stack([rotmat_fused_yaw(R), gamma, alpha], axis=-1)


def rotmat_to_fused(R):
    R = check_rotmat(R)
    theta, phi, h = _fused_from_z(R[..., 2, 0], R[..., 2, 1], R[..., 2, 2])
    return np.stack([rotmat_fused_yaw(R), theta, phi, h], axis=-1)


# ---------------------------------------------------------------------------
# quaternions


def quat_fused_yaw(q, return_singular=False):
    """Fused yaw ``wrap(2 atan2(z, w))``.

    With ``return_singular=True`` also returns a boolean mask marking the
    fused yaw singularity ``w^2 + z^2 < 1e-24``, where 0 is returned.
    """
    q = as_quat(q)
    w, z = q[..., 0], q[..., 3]
    psi = wrap(2.0 * atan2(z, w))
    if return_singular:
        singular = w * w + z * z < 1e-24
        return np.where(singular, 0.0, psi), singular
    return psi


def _quat_zvec(q):
    w, x, y, z = np.moveaxis(q, -1, 0)
    return 2.0 * (x * z - w * y), 2.0 * (w * x + y * z), (w * w + z * z) - (x * x + y * y)


def tilt_to_quat(T):
    psi, gamma, alpha = _split(T, 3, "tilt angles")
    alpha = _check_alpha(alpha)
    ha, hp = 0.5 * alpha, 0.5 * psi
    ca, sa = np.cos(ha), np.sin(ha)
    return np.stack(
        [ca * np.cos(hp), sa * np.cos(hp + gamma), sa * np.sin(hp + gamma), ca * np.sin(hp)],
        axis=-1,
    )


def quat_to_tilt(q):
    q = as_quat(q)
    w, x, y, z = np.moveaxis(q, -1, 0)
    gamma = atan2(w * y - x * z, w * x + y * z)
    alpha = 2.0 * np.arctan2(np.hypot(x, y), np.hypot(w, z))
    return np.stack([quat_fused_yaw(q), gamma, alpha], axis=-1)


def fused_to_quat(F):
    """Fused angles to quaternion without evaluating the tilt angle itself.

    Positive hemisphere uses the (1 + cos alpha) branch, negative hemisphere
    the (1 - cos alpha) branch; each is bounded away from zero on its side.
    """
    psi, theta, phi, h = _split(F, 4, "fused angles")
    _check_hemi(h)
    st, sp, rem = _sine_sum(theta, phi)
    ca = h * np.sqrt(rem)
    sa = np.hypot(st, sp)
    hp = 0.5 * psi
    chp, shp = np.cos(hp), np.sin(hp)
    cpos = 1.0 + ca
    qp = np.stack([chp * cpos, sp * chp - st * shp, sp * shp + st * chp, shp * cpos], axis=-1)
    gamma = atan2(st, sp)
    cneg = 1.0 - ca
    qn = np.stack(
        [sa * chp, np.cos(hp + gamma) * cneg, np.sin(hp + gamma) * cneg, sa * shp], axis=-1
    )
    q = np.where((h > 0)[..., None], qp, qn)
    return q / np.linalg.norm(q, axis=-1, keepdims=True)


def quat_to_fused(q):
    q = as_quat(q)
    theta, phi, h = _fused_from_z(*_quat_zvec(q))
    return np.stack([quat_fused_yaw(q), theta, phi, h], axis=-1)


# ---------------------------------------------------------------------------
# intrinsic ZYX Euler angles


def euler_zyx_to_quat(E):
    yaw, pitch, roll = _split(E, 3, "euler angles")
    return quat_mul(
        elementary_quat("z", yaw),
        quat_mul(elementary_quat("y", pitch), elementary_quat("x", roll)),
    )


def quat_to_euler_zyx(q, gimbal_tol=1e-12):
    """Return (yaw, pitch, roll); at gimbal lock roll is set to 0."""
    q = as_quat(q)
    w, x, y, z = np.moveaxis(q, -1, 0)
    sp = 2.0 * (w * y - x * z)
    lock = np.abs(sp) >= 1.0 - gimbal_tol
    pitch = np.arctan2(sp, np.hypot(2.0 * (w * x + y * z), (w * w + z * z) - (x * x + y * y)))
    yaw = atan2(2.0 * (w * z + x * y), (w * w + x * x) - (y * y + z * z))
    roll = atan2(2.0 * (w * x + y * z), (w * w + z * z) - (x * x + y * y))
    yaw = np.where(lock, wrap(2.0 * atan2(z, w)), yaw)
    roll = np.where(lock, 0.0, roll)
    pitch = np.where(lock, np.copysign(np.pi / 2, sp), pitch)
    return np.stack([yaw, pitch, roll], axis=-1)


# ---------------------------------------------------------------------------
# generic dispatch by representation token


def to_quat(values, rep):
    """Convert a representation (by token, see ``REPRS``) to a unit quaternion."""
    if rep == "quat":
        return as_quat(values)
    if rep == "rotmat":
        v = np.asarray(values, dtype=float)
        if v.shape[-2:] != (3, 3):
            v = v.reshape(v.shape[:-1] + (3, 3))
        return rotmat_to_quat(v)
    if rep == "tilt":
        return tilt_to_quat(values)
    if rep == "fused":
        return fused_to_quat(values)
    if rep == "euler":
        return euler_zyx_to_quat(values)
    if rep == "axisangle":
        v = np.asarray(values, dtype=float)
        return axisangle_to_quat(v[..., :3], v[..., 3])
    raise ValueError(f"unknown representation {rep!r}")


def from_quat(q, rep):
    """Inverse of :func:`to_quat`; rotation matrices come back as (..., 3, 3)."""
    if rep == "quat":
        return as_quat(q)
    if rep == "rotmat":
        return quat_to_rotmat(q)
    if rep == "tilt":
        return quat_to_tilt(q)
    if rep == "fused":
        return quat_to_fused(q)
    if rep == "euler":
        return quat_to_euler_zyx(q)
    if rep == "axisangle":
        axis, angle = quat_to_axisangle(q)
        return np.concatenate([axis, angle[..., None]], axis=-1)
    raise ValueError(f"unknown representation {rep!r}")


_DIRECT = {
    ("fused", "tilt"): fused_to_tilt,
    ("tilt", "fused"): tilt_to_fused,
    ("tilt", "rotmat"): tilt_to_rotmat,
    ("fused", "rotmat"): fused_to_rotmat,
    ("rotmat", "tilt"): rotmat_to_tilt,
    ("rotmat", "fused"): rotmat_to_fused,
}


def convert(values, src, dst):
    """Convert between any two representations, using a closed form when one exists."""
    for r in (src, dst):
        if r not in REPRS:
            raise ValueError(f"unknown representation {r!r}")
    if src == dst:
        return to_quat(values, src) if src == "quat" else from_quat(to_quat(values, src), src)
    fn = _DIRECT.get((src, dst))
    if fn is not None:
        return fn(values)
    return from_quat(to_quat(values, src), dst)


__all__ = [
    "REPRS",
    "SINE_SUM_TOL",
    "convert",
    "euler_zyx_to_quat",
    "from_quat",
    "fused_params_from_zvec",
    "fused_to_quat",
    "fused_to_rotmat",
    "fused_to_tilt",
    "quat_fused_yaw",
    "quat_to_euler_zyx",
    "quat_to_fused",
    "quat_to_tilt",
    "rotmat_fused_yaw",
    "rotmat_to_fused",
    "rotmat_to_tilt",
    "tilt_from_accel",
    "tilt_params_from_zvec",
    "tilt_to_fused",
    "tilt_to_quat",
    "tilt_to_rotmat",
    "to_quat",
    "zvec_from_fused",
]

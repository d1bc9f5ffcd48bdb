"""Rotation-level operations in fused and tilt angle parameters.

Composition and slerp go through quaternions; inversion, yaw handling,
standard form and the tilt-parameter dot product use the closed forms.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass

import numpy as np

from . import convert
from .rotcore import (
    DomainError,
    FusedYawSingularError,
    as_quat,
    quat_conj,
    quat_dot,
    quat_mul,
    wrap,
)

YAW_SINGULAR_SQ = 1e-24
YAW_WARNING_SQ = 1e-12


class AntipodalWarning(RuntimeWarning):
    """Slerp between rotations a half turn apart; the geodesic is not unique."""


class SingularityKind(enum.Flag):
    NONE = 0
    FUSED_YAW = enum.auto()
    TILT_AXIS = enum.auto()


@dataclass(frozen=True)
class SingularityClass:
    kind: SingularityKind
    alpha: float
    # w^2 + z^2 below 1e-12: yaw is defined but badly conditioned
    near_fused_yaw: bool = False

    @property
    def fused_yaw_singular(self):
        return SingularityKind.FUSED_YAW in self.kind

    @property
    def tilt_axis_singular(self):
        return SingularityKind.TILT_AXIS in self.kind


# ---------------------------------------------------------------------------
# inverses


def tilt_inverse(T):
    T = np.asarray(T, dtype=float)
    psi, gamma, alpha = np.moveaxis(T, -1, 0)
    return np.stack([wrap(-psi), wrap(psi + gamma - np.pi), alpha], axis=-1)


def fused_inverse(F):
    """Fused angles of the inverse rotation.

    Yaw negates and the hemisphere is kept; pitch and roll follow from the
    tilt axis angle of the inverse, ``wrap(psi + gamma - pi)``.
    """
    F = np.asarray(F, dtype=float)
    psi, gamma, alpha = np.moveaxis(convert.fused_to_tilt(F), -1, 0)
    h = F[..., 3]
    beta = psi + gamma
    sa = np.sin(alpha)
    zx, zy, zz = sa * np.sin(beta), -sa * np.cos(beta), np.cos(alpha)
    theta = np.arctan2(-zx, np.hypot(zy, zz))
    phi = np.arctan2(zy, np.hypot(zx, zz))
    return np.stack([wrap(-psi), theta, phi, h], axis=-1)


# ---------------------------------------------------------------------------
# fused yaw of quaternions


def quat_fused_yaw(q, return_singular=False):
    return convert.quat_fused_yaw(q, return_singular=return_singular)


quat_fused_yaw.__doc__ = convert.quat_fused_yaw.__doc__


def _yaw_norm(q):
    q = as_quat(q)
    n2 = q[..., 0] ** 2 + q[..., 3] ** 2
    if np.any(n2 < YAW_SINGULAR_SQ):
        raise FusedYawSingularError("fused yaw singular (alpha = pi)")
    return q, np.sqrt(n2)


def yaw_quat(q):
    """Pure z-rotation carrying the fused yaw of ``q``."""
    q, n = _yaw_norm(q)
    out = np.zeros_like(q)
    out[..., 0] = q[..., 0] / n
    out[..., 3] = q[..., 3] / n
    return out


def remove_yaw(q):
    """Tilt-only part of ``q``: ``conj(yaw_quat(q)) * q``, with zero fused yaw."""
    q, n = _yaw_norm(q)
    w, x, y, z = np.moveaxis(q, -1, 0)
    out = np.stack([w * w + z * z, w * x + z * y, w * y - z * x, np.zeros_like(w)], axis=-1)
    return out / n[..., None]


# ---------------------------------------------------------------------------
# standard form and equality


def standard_form(F, tol=1e-12):
    """Canonical representative of a fused angles rotation.

    Sets h = 1 on the |theta| + |phi| = pi/2 boundary, and maps the fused
    yaw singular rotations (theta = phi = 0, h = -1) to exactly (0, 0, 0, -1),
    so rounding residue in theta and phi does not survive.
    """
    F = np.array(F, dtype=float)
    psi, theta, phi, h = np.moveaxis(F, -1, 0)
    boundary = np.abs(theta) + np.abs(phi) >= np.pi / 2 - tol
    singular = (np.abs(theta) <= tol) & (np.abs(phi) <= tol) & (h < 0)
    F[..., 3] = np.where(boundary, 1.0, h)
    for i in range(3):
        F[..., i] = np.where(singular, 0.0, F[..., i])
    return F


def fused_equal(F1, F2, tol=1e-9):
    """Equality as rotations: standard forms agree within ``tol``, yaw wrap-aware."""
    a = standard_form(F1, tol)
    b = standard_form(F2, tol)
    dpsi = np.abs(wrap(a[..., 0] - b[..., 0]))
    return (
        (dpsi <= tol)
        & (np.abs(a[..., 1] - b[..., 1]) <= tol)
        & (np.abs(a[..., 2] - b[..., 2]) <= tol)
        & (a[..., 3] == b[..., 3])
    )


# ---------------------------------------------------------------------------
# singularities


def classify_singularity(q, tol=1e-12):
    """Classify a single quaternion against the fused yaw and tilt axis singularities."""
    q = as_quat(q)
    if q.shape != (4,):
        raise DomainError("classify_singularity takes a single quaternion")
    w, x, y, z = q
    wz = np.hypot(w, z)
    xy = np.hypot(x, y)
    alpha = float(2.0 * np.arctan2(xy, wz))
    kind = SingularityKind.NONE
    if wz < tol:
        kind |= SingularityKind.FUSED_YAW
    if 2.0 * wz * xy < tol:
        kind |= SingularityKind.TILT_AXIS
    return SingularityClass(kind, alpha, near_fused_yaw=bool(wz * wz < YAW_WARNING_SQ))


# ---------------------------------------------------------------------------
# metrics and interpolation


def quat_dot_tilt(T1, T2):
    """Quaternion dot product of two rotations given in tilt angles."""
    T1 = np.asarray(T1, dtype=float)
    T2 = np.asarray(T2, dtype=float)
    psi1, g1, a1 = np.moveaxis(T1, -1, 0)
    psi2, g2, a2 = np.moveaxis(T2, -1, 0)
    dpsi = 0.5 * (psi1 - psi2)
    return np.cos(a1 / 2) * np.cos(a2 / 2) * np.cos(dpsi) + np.sin(a1 / 2) * np.sin(
        a2 / 2
    ) * np.cos(dpsi + g1 - g2)


def _relative(a, b, rep):
    qa = convert.to_quat(a, rep)
    qb = convert.to_quat(b, rep)
    return quat_mul(quat_conj(qa), qb)


def metric_dR(a, b, rep="quat"):
    """Riemannian distance: the angle of the relative rotation, in [0, pi].

    Equal to ``2 acos(|qa . qb|)`` but evaluated as an arctangent of the
    relative quaternion, which stays accurate for nearby rotations.
    """
    r = _relative(a, b, rep)
    return 2.0 * np.arctan2(np.linalg.norm(r[..., 1:], axis=-1), np.abs(r[..., 0]))


def metric_dL(a, b, rep="quat"):
    """Linear distance ``1 - |qa . qb|`` in [0, 1]."""
    qa = convert.to_quat(a, rep)
    qb = convert.to_quat(b, rep)
    return 1.0 - np.minimum(np.abs(quat_dot(qa, qb)), 1.0)


def slerp(a, b, t):
    """Constant-speed geodesic from ``a`` (t=0) to ``b`` (t=1) along the shorter arc.

    For half-turn pairs the two arcs have equal length; ``b`` is used with
    the sign it was given and an :class:`AntipodalWarning` is issued.
    """
    a = as_quat(a)
    b = as_quat(b)
    t = np.asarray(t, dtype=float)
    r = quat_mul(quat_conj(a), b)
    r = np.where(r[..., :1] < 0.0, -r, r)
    if np.any(np.abs(r[..., 0]) < 1e-12):
        warnings.warn("slerp between antipodal rotations; geodesic is not unique", AntipodalWarning)
    v = r[..., 1:]
    s = np.linalg.norm(v, axis=-1)
    half = np.arctan2(s, r[..., 0])
    safe = np.where(s > 0.0, s, 1.0)
    axis = v / safe[..., None]
    th = t * half
    step = np.concatenate([np.cos(th)[..., None], axis * np.sin(th)[..., None]], axis=-1)
    return quat_mul(a, step)


def fused_lerp(F1, F2, t):
    """Componentwise fused angle interpolation, for positive-hemisphere inputs only.

    Yaw is interpolated along the shorter way round. Interpolating across
    hemispheres has no sensible meaning and raises :class:`DomainError`.
    """
    F1 = np.asarray(F1, dtype=float)
    F2 = np.asarray(F2, dtype=float)
    t = np.asarray(t, dtype=float)
    if np.any(F1[..., 3] != 1.0) or np.any(F2[..., 3] != 1.0):
        raise DomainError("direct fused interpolation requires both rotations in the positive hemisphere")
    dpsi = wrap(F2[..., 0] - F1[..., 0])
    psi = wrap(F1[..., 0] + t * dpsi)
    theta = F1[..., 1] + t * (F2[..., 1] - F1[..., 1])
    phi = F1[..., 2] + t * (F2[..., 2] - F1[..., 2])
    return np.stack(np.broadcast_arrays(psi, theta, phi, np.ones_like(psi)), axis=-1)


# ---------------------------------------------------------------------------
# composition


def compose(a, b, rep="quat"):
    """Rotation ``a`` after ``b``'s body-frame rotation: ``R(a) @ R(b)``, in ``rep``."""
    q = quat_mul(convert.to_quat(a, rep), convert.to_quat(b, rep))
    return convert.from_quat(q, rep)


def inverse(value, rep="quat"):
    """Group inverse in any representation; fused and tilt use their closed forms."""
    if rep == "fused":
        return fused_inverse(value)
    if rep == "tilt":
        return tilt_inverse(value)
    return convert.from_quat(quat_conj(convert.to_quat(value, rep)), rep)


__all__ = [
    "AntipodalWarning",
    "SingularityClass",
    "SingularityKind",
    "classify_singularity",
    "compose",
    "fused_equal",
    "fused_inverse",
    "fused_lerp",
    "inverse",
    "metric_dL",
    "metric_dR",
    "quat_dot_tilt",
    "quat_fused_yaw",
    "remove_yaw",
    "slerp",
    "standard_form",
    "tilt_inverse",
    "yaw_quat",
]

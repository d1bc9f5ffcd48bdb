"""First-principles geometric constructions of tilt and fused angles.

These build the frames literally: the tilt rotation comes from a cross
product and frame A from undoing it, and pitch and roll are measured on
plane projections of the global z-axis. Only elementary vector operations
are used. Everything here handles one matrix at a time and is slow; its
only job is to cross-check the closed forms in :mod:`fusedangles.convert`,
which it never calls.
"""

from __future__ import annotations

import math

import numpy as np

from .rotcore import DomainError, check_rotmat, clamp_unit, wrap

X_G = np.array([1.0, 0.0, 0.0])
Z_G = np.array([0.0, 0.0, 1.0])

DEGENERATE_TOL = 1e-6


def _unit(v):
    return v / np.linalg.norm(v)


def _angle_between(a, b):
    return math.atan2(np.linalg.norm(np.cross(a, b)), float(np.dot(a, b)))


def _signed_angle(a, b, about):
    """Angle from ``a`` to ``b`` measured positively about ``about``."""
    return math.atan2(float(np.dot(np.cross(a, b), about)), float(np.dot(a, b)))


def _rodrigues(v, axis, angle):
    c, s = math.cos(angle), math.sin(angle)
    return v * c + np.cross(axis, v) * s + axis * np.dot(axis, v) * (1.0 - c)


def tilt_construction(R, tol=DEGENERATE_TOL):
    """Build the tilt rotation for a single rotation matrix.

    Returns a dict with the tilt axis ``axis`` (global coordinates), the
    tilt angle ``alpha``, the x-axis of frame A ``x_a`` and the body z-axis
    ``z_b``.
    """
    R = check_rotmat(R)
    x_b, z_b = R[:, 0], R[:, 2]
    cross = np.cross(Z_G, z_b)
    alpha = _angle_between(Z_G, z_b)
    if not tol < alpha < math.pi - tol:
        raise DomainError(f"tilt construction is degenerate for alpha = {alpha:.3g}")
    axis = _unit(cross)
    x_a = _rodrigues(x_b, axis, -alpha)
    return {"axis": axis, "alpha": alpha, "x_a": x_a, "z_b": z_b}


def geometric_tilt(R, tol=DEGENERATE_TOL):
    """Tilt angles (psi, gamma, alpha) measured directly from the construction."""
    c = tilt_construction(R, tol)
    gamma = _signed_angle(c["x_a"], c["axis"], Z_G)
    psi = _signed_angle(X_G, c["x_a"], Z_G)
    return np.array([float(wrap(psi)), float(wrap(gamma)), c["alpha"]])


def _geometric_yaw(R):
    # yaw is total: frame A is B itself when untilted, and 0 at a half-turn tilt
    R = np.asarray(R, dtype=float)
    alpha = _angle_between(Z_G, R[:, 2])
    if alpha <= DEGENERATE_TOL:
        return float(wrap(_signed_angle(X_G, R[:, 0], Z_G)))
    if alpha >= math.pi - DEGENERATE_TOL:
        return 0.0
    return float(geometric_tilt(R)[0])


def _projected_angle(z_g, normal, sign_axis_comp):
    v = z_g - np.dot(z_g, normal) * normal
    n = np.linalg.norm(v)
    mag = math.pi / 2 if n == 0.0 else _angle_between(z_g, v)
    return mag if sign_axis_comp > 0 else -mag if sign_axis_comp < 0 else 0.0


def geometric_fused(R):
    """Fused angles from plane projections of the global z-axis.

    Pitch is the angle between z_G and its projection onto the body y-z
    plane with sign -sgn(z_G . x_B); roll uses the x-z plane with sign
    sgn(z_G . y_B).
    """
    R = check_rotmat(R)
    x_b, y_b, z_b = R[:, 0], R[:, 1], R[:, 2]
    zx = float(np.dot(Z_G, x_b))
    zy = float(np.dot(Z_G, y_b))
    zz = float(np.dot(Z_G, z_b))
    theta = _projected_angle(Z_G, x_b, -zx)
    phi = _projected_angle(Z_G, y_b, zy)
    h = 1.0 if zz >= 0.0 else -1.0
    return np.array([_geometric_yaw(R), theta, phi, h])


def psi_case_formula(R):
    """Fused yaw by the case expression on the body z- and x-axes.

    Numerically poor near alpha = 0; kept as a cross-check only.
    """
    R = check_rotmat(R)
    alpha = math.acos(float(clamp_unit(R[2, 2], "R33")))
    if alpha != 0.0:
        gamma = math.atan2(-R[2, 0], R[2, 1]) if (R[2, 0] or R[2, 1]) else 0.0
        base = math.atan2(R[0, 2], -R[1, 2]) if (R[0, 2] or R[1, 2]) else 0.0
        return float(wrap(base - gamma))
    return math.atan2(R[1, 0], R[0, 0])

"""Fused angles and tilt angles rotation representations."""

from .rotcore import (
    DomainError,
    FusedYawSingularError,
    SineSumError,
    axisangle_to_quat,
    msign,
    quat_conj,
    quat_mul,
    quat_rotate,
    quat_to_axisangle,
    quat_to_rotmat,
    random_rotation,
    rotmat_to_quat,
    rotmat_validate,
    wrap,
)
from .convert import (
    euler_zyx_to_quat,
    fused_params_from_zvec,
    fused_to_quat,
    fused_to_rotmat,
    fused_to_tilt,
    quat_fused_yaw,
    quat_to_euler_zyx,
    quat_to_fused,
    quat_to_tilt,
    rotmat_fused_yaw,
    rotmat_to_fused,
    rotmat_to_tilt,
    tilt_from_accel,
    tilt_params_from_zvec,
    tilt_to_fused,
    tilt_to_quat,
    tilt_to_rotmat,
    zvec_from_fused,
)
from .fusedops import (
    classify_singularity,
    compose,
    fused_equal,
    fused_inverse,
    metric_dL,
    metric_dR,
    quat_dot_tilt,
    remove_yaw,
    slerp,
    standard_form,
    tilt_inverse,
    yaw_quat,
)

__version__ = "0.1.0"

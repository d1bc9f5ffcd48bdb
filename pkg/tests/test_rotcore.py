import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate

from fusedangles.rotcore import (
    DomainError,
    atan2,
    axisangle_to_quat,
    elementary_quat,
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

from conftest import Rz, same_rotation

finite = st.floats(-1e6, 1e6, allow_nan=False)
unit_quats = st.lists(st.floats(-1, 1), min_size=4, max_size=4).filter(
    lambda v: sum(x * x for x in v) > 1e-3
).map(lambda v: np.array(v) / np.linalg.norm(v))


@pytest.mark.parametrize(
    "angle, expected",
    [(math.pi, math.pi), (3 * math.pi / 2, -math.pi / 2), (-math.pi, math.pi), (0.0, 0.0)],
)
def test_wrap_examples(angle, expected):
    assert float(wrap(angle)) == pytest.approx(expected, abs=1e-15)


def test_wrap_rejects_nonfinite():
    with pytest.raises(DomainError):
        wrap(float("nan"))


@given(finite)
def test_wrap_range_and_idempotent(x):
    w = float(wrap(x))
    assert -math.pi < w <= math.pi
    assert float(wrap(w)) == w
    assert math.isclose(math.remainder(w - x, 2 * math.pi), 0.0, abs_tol=1e-9 * max(1, abs(x)))


def test_msign():
    assert msign(0.0) == 1.0
    assert msign(2.5) == 1.0
    assert msign(-0.3) == -1.0
    assert msign(-0.0) == 1.0


def test_atan2_zero_convention():
    for y, x in [(0.0, 0.0), (0.0, -0.0), (-0.0, -0.0), (-0.0, 0.0)]:
        assert float(atan2(y, x)) == 0.0
    assert float(atan2(1.0, 0.0)) == pytest.approx(math.pi / 2)


def test_quat_mul_examples():
    q = np.array([0.5, 0.5, 0.5, 0.5])
    np.testing.assert_allclose(quat_mul([1, 0, 0, 0], q), q, atol=1e-15)
    rz90 = elementary_quat("z", math.pi / 2)
    np.testing.assert_allclose(quat_mul(rz90, rz90), [0, 0, 0, 1], atol=1e-15)


def test_quat_mul_matches_matrix_product(quats):
    a, b = quats[:1000], quats[1000:]
    np.testing.assert_allclose(
        quat_to_rotmat(quat_mul(a, b)), quat_to_rotmat(a) @ quat_to_rotmat(b), atol=1e-14
    )


def test_conj_and_rotate():
    np.testing.assert_array_equal(quat_conj([1, 0, 0, 0]), [1, 0, 0, 0])
    rz90 = elementary_quat("z", math.pi / 2)
    np.testing.assert_allclose(quat_rotate(rz90, [1, 0, 0]), [0, 1, 0], atol=1e-15)


def test_rotate_matches_rotmat_and_inverse(quats, rng):
    v = rng.standard_normal((len(quats), 3))
    np.testing.assert_allclose(quat_rotate(quats, v), np.einsum("nij,nj->ni", quat_to_rotmat(quats), v), atol=1e-13)
    back = quat_rotate(quats, quat_rotate(quat_conj(quats), v))
    np.testing.assert_allclose(back, v, atol=1e-13)


def test_q_times_conj_is_identity(quats):
    prod = quat_mul(quats, quat_conj(quats))
    np.testing.assert_allclose(prod, np.broadcast_to([1.0, 0, 0, 0], prod.shape), atol=1e-12)


def test_axisangle_examples():
    r2 = math.sqrt(2) / 2
    np.testing.assert_allclose(axisangle_to_quat([1, 0, 0], math.pi / 2), [r2, r2, 0, 0], atol=1e-15)
    np.testing.assert_allclose(axisangle_to_quat([0, 0, 1], math.pi), [0, 0, 0, 1], atol=1e-15)
    axis, angle = quat_to_axisangle([0.5, 0.5, 0.5, 0.5])
    np.testing.assert_allclose(axis, np.ones(3) / math.sqrt(3), atol=1e-15)
    assert float(angle) == pytest.approx(2 * math.pi / 3, abs=1e-15)


def test_axisangle_zero_and_half_turn_conventions():
    axis, angle = quat_to_axisangle([1, 0, 0, 0])
    np.testing.assert_array_equal(axis, [0, 0, 1])
    assert float(angle) == 0.0
    axis, angle = quat_to_axisangle([0, 0, -1, 0])
    np.testing.assert_array_equal(axis, [0, 1, 0])
    assert float(angle) == pytest.approx(math.pi)


def test_axisangle_rejects_nonunit_axis():
    with pytest.raises(DomainError):
        axisangle_to_quat([1, 1, 0], 0.3)


def test_axisangle_round_trip(rng):
    axis = rng.standard_normal((5000, 3))
    axis /= np.linalg.norm(axis, axis=-1, keepdims=True)
    angle = rng.uniform(1e-3, math.pi - 1e-3, 5000)
    a2, t2 = quat_to_axisangle(axisangle_to_quat(axis, angle))
    np.testing.assert_allclose(t2, angle, atol=1e-10)
    np.testing.assert_allclose(a2, axis, atol=1e-10)


def test_rotmat_validate_examples():
    assert rotmat_validate(np.eye(3))
    rep = rotmat_validate(np.diag([1.0, 1.0, -1.0]))
    assert not rep and rep.det_deviation == pytest.approx(2.0)
    R = np.eye(3)
    R[:, 0] *= 1 + 1e-6
    rep = rotmat_validate(R)
    assert not rep
    # Gram deviation of a column scaled by (1 + e) is 2e + e^2
    assert rep.orthonormality_residual == pytest.approx(2e-6 + 1e-12, rel=1e-6)
    assert "not a rotation matrix" in rep.describe()


def test_rotmat_from_quat_is_valid(quats):
    assert rotmat_validate(quat_to_rotmat(quats), tol=1e-12)


def test_rotmat_quat_examples():
    np.testing.assert_allclose(quat_to_rotmat([1, 0, 0, 0]), np.eye(3))
    r2 = math.sqrt(2) / 2
    np.testing.assert_allclose(quat_to_rotmat([r2, 0, 0, r2]), Rz(math.pi / 2), atol=1e-15)
    assert same_rotation(rotmat_to_quat(Rz(math.pi / 2)), [r2, 0, 0, r2], 1e-15)
    assert same_rotation(rotmat_to_quat(np.eye(3)), [1, 0, 0, 0], 0)


def test_rotmat_quat_round_trip(quats):
    assert np.all(same_rotation(rotmat_to_quat(quat_to_rotmat(quats)), quats, 1e-12))


@pytest.mark.parametrize("diag", [(1, -1, -1), (-1, 1, -1), (-1, -1, 1)])
def test_rotmat_to_quat_half_turns(diag):
    q = rotmat_to_quat(np.diag(np.array(diag, dtype=float)))
    np.testing.assert_allclose(quat_to_rotmat(q), np.diag(diag), atol=1e-15)


def test_rotmat_to_quat_rejects_reflection():
    with pytest.raises(DomainError):
        rotmat_to_quat(np.diag([1.0, 1.0, -1.0]))


@given(unit_quats)
def test_rotmat_round_trip_property(q):
    assert same_rotation(rotmat_to_quat(quat_to_rotmat(q)), q, 1e-12)


def test_random_rotation_unit_and_deterministic():
    a = random_rotation(np.random.default_rng(5), 1000)
    b = random_rotation(np.random.default_rng(5), 1000)
    np.testing.assert_array_equal(a, b)
    np.testing.assert_allclose(np.linalg.norm(a, axis=-1), 1.0, atol=1e-12)
    assert random_rotation(np.random.default_rng(5)).shape == (4,)


def test_random_rotation_mean_angle_oracle():
    # Haar density of the rotation angle is (1 - cos t) / pi on [0, pi]
    expected, _ = integrate.quad(lambda t: t * (1 - math.cos(t)) / math.pi, 0, math.pi)
    assert expected == pytest.approx(math.pi / 2 + 2 / math.pi, abs=1e-12)
    assert expected == pytest.approx(2.2074, abs=1e-4)
    q = random_rotation(np.random.default_rng(99), 100_000)
    angle = 2 * np.arctan2(np.linalg.norm(q[:, 1:], axis=-1), np.abs(q[:, 0]))
    assert angle.mean() == pytest.approx(expected, abs=0.01)

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from scipy.spatial.transform import Rotation

from pairpose.errors import DegenerateVectorError
from pairpose.geometry import (Pose, angle_between, axis_angle_to_matrix, embed_pair, embed_rotation, is_rotation,
                               matrix_to_axis_angle, rotation_angular_distance)

finite = st.floats(-3.0, 3.0, allow_nan=False)
vec3 = arrays(np.float64, 3, elements=finite)


def random_rotations(rng, k):
    return Rotation.random(k, random_state=rng).as_matrix()


def test_identity_and_quarter_turn():
    np.testing.assert_array_equal(axis_angle_to_matrix(np.zeros(3)), np.eye(3))
    R = axis_angle_to_matrix([0, 0, math.pi / 2])
    np.testing.assert_allclose(R @ [1, 0, 0], [0, 1, 0], atol=1e-15)
    assert is_rotation(R)


def test_matrix_to_axis_angle_special_cases():
    np.testing.assert_array_equal(matrix_to_axis_angle(np.eye(3)), np.zeros(3))
    Rz = np.diag([-1.0, -1.0, 1.0])
    np.testing.assert_allclose(matrix_to_axis_angle(Rz), [0, 0, math.pi], atol=1e-12)
    # tie rule: first nonzero axis component positive
    Rx = np.diag([1.0, -1.0, -1.0])
    np.testing.assert_allclose(matrix_to_axis_angle(Rx), [math.pi, 0, 0], atol=1e-12)
    a = np.array([1.0, -1.0, 0.0]) / math.sqrt(2)
    r = matrix_to_axis_angle(Rotation.from_rotvec(-math.pi * a).as_matrix())
    np.testing.assert_allclose(r, math.pi * a, atol=1e-9)


def test_rodrigues_matches_quaternion_oracle():
    rng = np.random.default_rng(0)
    r = rng.uniform(-math.pi, math.pi, size=(500, 3))
    np.testing.assert_allclose(axis_angle_to_matrix(r), Rotation.from_rotvec(r).as_matrix(), atol=1e-12)


@settings(max_examples=300)
@given(vec3)
def test_round_trip(r):
    theta = np.linalg.norm(r)
    if theta >= math.pi - 1e-6:
        r = r * (math.pi - 1e-3) / theta
    R = axis_angle_to_matrix(r)
    assert is_rotation(R)
    back = matrix_to_axis_angle(R)
    np.testing.assert_allclose(back, r, atol=1e-8)
    # scipy's quaternion path as an independent inverse
    np.testing.assert_allclose(back, Rotation.from_matrix(R).as_rotvec(), atol=1e-8)


def test_round_trip_random_matrices():
    rng = np.random.default_rng(1)
    for R in random_rotations(rng, 500):
        r = matrix_to_axis_angle(R)
        assert np.linalg.norm(r) <= math.pi + 1e-12
        np.testing.assert_allclose(axis_angle_to_matrix(r), R, atol=1e-8)


def test_round_trip_near_pi():
    rng = np.random.default_rng(2)
    for _ in range(200):
        axis = rng.normal(size=3)
        axis /= np.linalg.norm(axis)
        angle = math.pi - 10 ** rng.uniform(-12, -3)
        R = axis_angle_to_matrix(angle * axis)
        np.testing.assert_allclose(axis_angle_to_matrix(matrix_to_axis_angle(R)), R, atol=1e-8)


@pytest.mark.parametrize("a, b, expected", [
    ([1, 0, 0], [1, 0, 0], 0.0),
    ([1, 0, 0], [0, 1, 0], math.pi / 2),
    ([1, 0, 0], [-1, 0, 0], math.pi),
])
def test_angle_between_examples(a, b, expected):
    assert angle_between(a, b) == pytest.approx(expected, abs=1e-15)


def test_angle_between_degenerate():
    with pytest.raises(DegenerateVectorError):
        angle_between([0, 0, 0], [1, 0, 0])
    with pytest.raises(DegenerateVectorError):
        angle_between([1, 0, 0], [1e-13, 0, 0])


@given(vec3, vec3, st.floats(1e-3, 1e3), st.floats(1e-3, 1e3))
def test_angle_between_symmetric_and_scale_invariant(a, b, s, t):
    if np.linalg.norm(a) < 1e-6 or np.linalg.norm(b) < 1e-6:
        return
    ang = angle_between(a, b)
    assert 0.0 <= ang <= math.pi
    assert angle_between(b, a) == pytest.approx(ang, abs=1e-12)
    assert angle_between(s * a, t * b) == pytest.approx(ang, abs=1e-9)


def test_angle_between_small_angles_accurate():
    # acos(dot) would return 0 here
    eps = 1e-10
    assert angle_between([1, 0, 0], [1, eps, 0]) == pytest.approx(eps, rel=1e-6)


def test_rotation_distance():
    rng = np.random.default_rng(3)
    R = random_rotations(rng, 1)[0]
    assert rotation_angular_distance(R, R) == pytest.approx(0.0, abs=1e-7)
    for theta in (0.1, 1.0, 3.0):
        axis = rng.normal(size=3)
        axis /= np.linalg.norm(axis)
        assert rotation_angular_distance(np.eye(3), axis_angle_to_matrix(theta * axis)) == pytest.approx(theta, abs=1e-9)


def test_rotation_distance_below_axis_angle_distance():
    # holds over the whole [-pi, pi]^3 cube, not just the pi-ball
    rng = np.random.default_rng(4)
    r1 = rng.uniform(-math.pi, math.pi, size=(1000, 3))
    r2 = rng.uniform(-math.pi, math.pi, size=(1000, 3))
    R1, R2 = axis_angle_to_matrix(r1), axis_angle_to_matrix(r2)
    for a, b, x, y in zip(R1, R2, r1, r2):
        assert rotation_angular_distance(a, b) <= np.linalg.norm(x - y) + 1e-12


def test_cube_rotation_displacement_bound():
    rng = np.random.default_rng(5)
    for _ in range(1000):
        sigma = 10 ** rng.uniform(-3, math.log10(math.pi))
        r0 = rng.uniform(-math.pi + sigma, math.pi - sigma, size=3)
        r = r0 + sigma * rng.uniform(-1, 1, size=3)
        u = rng.normal(size=3)
        ang = angle_between(axis_angle_to_matrix(r) @ u, axis_angle_to_matrix(r0) @ u)
        assert ang <= math.sqrt(3) * sigma + 1e-12


def test_embed_rotation():
    np.testing.assert_array_equal(embed_rotation(np.eye(3)), [1, 0, 0, 0, 1, 0, 0, 0, 1])
    R = np.arange(9.0).reshape(3, 3)
    # column-major: R11, R21, R31, R12, ...
    np.testing.assert_array_equal(embed_rotation(R), [0, 3, 6, 1, 4, 7, 2, 5, 8])
    rng = np.random.default_rng(6)
    Rs = random_rotations(rng, 200)
    x = embed_rotation(Rs)
    np.testing.assert_allclose(np.linalg.norm(x, axis=1), math.sqrt(3), atol=1e-12)
    for A, B, xa, xb in zip(Rs[:-1], Rs[1:], x[:-1], x[1:]):
        assert xa @ xb == pytest.approx(np.trace(A.T @ B), abs=1e-12)


def test_embed_pair():
    e = embed_pair([1, 0, 0], [1, 0, 0])
    np.testing.assert_array_equal(e, np.eye(9)[0])
    rng = np.random.default_rng(7)
    for R in random_rotations(rng, 200):
        v, u = rng.normal(size=3), rng.normal(size=3)
        e = embed_pair(v, u)
        vn, un = v / np.linalg.norm(v), u / np.linalg.norm(u)
        assert e @ embed_rotation(R) == pytest.approx(vn @ R @ un, abs=1e-12)
        assert np.linalg.norm(e) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(DegenerateVectorError):
        embed_pair([0, 0, 0], [1, 0, 0])


def test_pose_validation():
    with pytest.raises(ValueError):
        Pose(2 * np.eye(3), np.zeros(3))
    with pytest.raises(ValueError):
        Pose(np.eye(3), [np.nan, 0, 0])
    p = Pose(np.eye(3), [1, 2, 3])
    np.testing.assert_array_equal(p.transform(np.zeros((1, 3))), [[1, 2, 3]])

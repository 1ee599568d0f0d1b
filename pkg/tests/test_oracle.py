import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pairpose.errors import BudgetExceededError
from pairpose.geometry import Pose
from pairpose.oracle import GridSpec, exhaustive_pose_check, grid_rotation_search, sweep_1d_consensus
from pairpose.pairing import ConstraintSet, Correspondences, build_pairs
from pairpose.rotation_search import consensus_count

from conftest import noise_free_correspondences


def brute_force_1d(values, eps):
    # every optimal window can be slid until its left end touches a value
    return max(sum(v - eps <= a <= v + eps for v in values) for a in [x + eps for x in values])


def test_sweep_examples():
    assert sweep_1d_consensus([1, 1, 1], 0.1) == (1.0, 3)
    assert sweep_1d_consensus([0, 1, 2, 3], 0.6)[1] == 2
    assert sweep_1d_consensus([7.5], 0.3) == (7.5, 1)


@given(st.lists(st.floats(-50, 50, allow_nan=False), min_size=1, max_size=40), st.floats(1e-3, 10))
def test_sweep_matches_quadratic(values, eps):
    center, n = sweep_1d_consensus(values, eps)
    assert n == brute_force_1d(values, eps)
    assert sum(abs(center - v) <= eps * (1 + 1e-12) for v in values) >= n


def test_grid_axis_points():
    np.testing.assert_allclose(GridSpec(2 * math.pi).axis_points(), [0.0], atol=1e-15)
    pts = GridSpec(math.pi / 64).axis_points()
    assert len(pts) == 128 and pts[0] > -math.pi and pts[-1] < math.pi


def test_grid_single_point_is_identity(rng):
    u = rng.normal(size=(30, 3))
    v = rng.normal(size=(30, 3))
    cs = ConstraintSet(u / np.linalg.norm(u, axis=1)[:, None], v / np.linalg.norm(v, axis=1)[:, None],
                       np.zeros((30, 2)))
    R, n = grid_rotation_search(cs, 0.2, GridSpec(2 * math.pi))
    np.testing.assert_allclose(R, np.eye(3), atol=1e-15)
    assert n == consensus_count(cs, np.eye(3), 0.2)


def test_grid_single_constraint(rng):
    cs = ConstraintSet(np.array([[1.0, 0, 0]]), np.array([[1.0, 0, 0]]), [[0, 1]])
    assert grid_rotation_search(cs, 0.05, GridSpec(math.pi / 8))[1] == 1


def test_grid_finds_noise_free_optimum(rng):
    corrs, R, _, _ = noise_free_correspondences(rng, 20)
    cs = build_pairs(corrs)
    # half-diagonal of a pi/32 cell is ~0.085 rad
    R_best, n = grid_rotation_search(cs, 0.09, GridSpec(math.pi / 32))
    assert n == 10
    assert consensus_count(cs, R_best, 0.09) == 10


def test_grid_budget():
    cs = ConstraintSet(np.array([[1.0, 0, 0]]), np.array([[0, 1.0, 0]]), [[0, 1]])
    with pytest.raises(BudgetExceededError):
        grid_rotation_search(cs, 0.1, GridSpec(math.pi / 200))


def test_exhaustive_pose_check(rng):
    corrs, R, t, _ = noise_free_correspondences(rng, 50)
    assert exhaustive_pose_check(corrs, Pose(R, t), 1e-9) == 50
    far = Pose(R, t + np.array([1e4, -1e4, 0]))
    assert exhaustive_pose_check(corrs, far, 0.01) == 0
    single = Correspondences(np.array([[0, 0, 5.0]]), np.array([[0, 0, 1.0]]))
    assert exhaustive_pose_check(single, Pose(np.eye(3), np.zeros(3)), 1e-6) == 1

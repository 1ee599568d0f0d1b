"""Brute-force reference solvers.

Nothing here imports the optimised search code; these exist to falsify it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BudgetExceededError, EmptyInputError

MAX_GRID_SAMPLES = 10_000_000


@dataclass(frozen=True)
class GridSpec:
    resolution: float

    def __post_init__(self):
        if self.resolution <= 0:
            raise ValueError("resolution must be positive")

    def axis_points(self) -> np.ndarray:
        """Cell centres of a regular grid over ``[-pi, pi]``."""
        n = max(1, int(np.ceil(2 * np.pi / self.resolution - 1e-9)))
        return -np.pi + (np.arange(n) + 0.5) * (2 * np.pi / n)


def _quat_rotations(r: np.ndarray) -> np.ndarray:
    # rotation vectors -> unit quaternions -> matrices
    theta = np.linalg.norm(r, axis=1)
    half = 0.5 * theta
    with np.errstate(invalid="ignore", divide="ignore"):
        k = np.where(theta > 0, np.sin(half) / np.where(theta > 0, theta, 1.0), 0.5)
    w = np.cos(half)
    x, y, z = (r * k[:, None]).T
    R = np.empty((len(r), 3, 3))
    R[:, 0, 0] = 1 - 2 * (y * y + z * z)
    R[:, 0, 1] = 2 * (x * y - z * w)
    R[:, 0, 2] = 2 * (x * z + y * w)
    R[:, 1, 0] = 2 * (x * y + z * w)
    R[:, 1, 1] = 1 - 2 * (x * x + z * z)
    R[:, 1, 2] = 2 * (y * z - x * w)
    R[:, 2, 0] = 2 * (x * z - y * w)
    R[:, 2, 1] = 2 * (y * z + x * w)
    R[:, 2, 2] = 1 - 2 * (x * x + y * y)
    return R


def grid_rotation_search(constraints, delta: float, grid: GridSpec):
    """Evaluate the pairwise consensus at every grid rotation; return the best.

    Uses ``constraints.u`` and ``constraints.v`` only. Returns
    ``(R_best, count)``; ties keep the first grid point in C order.
    """
    axis = grid.axis_points()
    total = len(axis) ** 3
    if total > MAX_GRID_SAMPLES:
        raise BudgetExceededError(f"grid has {total} samples (limit {MAX_GRID_SAMPLES})")
    u = np.asarray(constraints.u, dtype=float)
    v = np.asarray(constraints.v, dtype=float)
    u = u / np.linalg.norm(u, axis=1, keepdims=True)
    v = v / np.linalg.norm(v, axis=1, keepdims=True)
    chunk = max(1024, 3_000_000 // max(len(u), 1))
    pts = np.stack(np.meshgrid(axis, axis, axis, indexing="ij"), axis=-1).reshape(-1, 3)
    best_count, best_r = -1, None
    for start in range(0, total, chunk):
        r = pts[start:start + chunk]
        R = _quat_rotations(r)
        Ru = np.einsum("kab,mb->kma", R, u)
        cos = np.einsum("kma,ma->km", Ru, v)
        # |angle - pi/2| < delta  <=>  |cos angle| < sin(delta)
        counts = np.count_nonzero(np.abs(cos) < np.sin(delta), axis=1)
        i = int(np.argmax(counts))
        if counts[i] > best_count:
            best_count, best_r = int(counts[i]), r[i]
    return _quat_rotations(best_r[None])[0], best_count


def sweep_1d_consensus(values, epsilon: float) -> tuple[float, int]:
    """Exact ``max_t #{s : |t - t_s| <= epsilon}`` by a sorted two-pointer sweep."""
    vals = sorted(float(x) for x in np.ravel(values))
    if not vals:
        raise EmptyInputError("need at least one value")
    best, best_center = 0, vals[0]
    j = 0
    for i in range(len(vals)):
        if j < i:
            j = i
        while j + 1 < len(vals) and vals[j + 1] - vals[i] <= 2 * epsilon:
            j += 1
        if j - i + 1 > best:
            best = j - i + 1
            best_center = 0.5 * (vals[i] + vals[j])
    return best_center, best


def exhaustive_pose_check(corrs, pose, angular_threshold: float) -> int:
    """Number of correspondences whose bearing is within the threshold of ``R p + t``."""
    count = 0
    for p, q in zip(corrs.points, corrs.bearings):
        w = pose.rotation @ p + pose.translation
        nw = np.linalg.norm(w)
        if nw == 0:
            continue
        ang = np.arctan2(np.linalg.norm(np.cross(q, w)), q @ w)
        if ang < angular_threshold:
            count += 1
    return count

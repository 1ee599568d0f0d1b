"""Consensus-maximising rotation search by branch-and-bound over axis-angle space.

The domain is the cube ``[-pi, pi]^3``. Each cube stores an integer upper and
lower bound on the number of pair constraints that any rotation inside it can
satisfy. Two bound families are provided:

``hartley``
    Margin ``sqrt(3) * sigma`` on the angle between ``v`` and ``R0 u``.
``linear``
    Rotations embedded as 9-vectors ``x`` with ``|x| = sqrt(3)``; the margin
    is the largest angle ``alpha`` between ``x`` and the centre embedding.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .constants import DEFAULT_DELTA, HALF_PI, SQRT3
from .errors import ConfigError, EmptyInputError
from .geometry import axis_angle_to_matrix, embed_rotation
from .pairing import ConstraintSet


class BoundKind(str, Enum):
    HARTLEY = "hartley"
    LINEAR = "linear"


@dataclass(frozen=True)
class RotationSearchConfig:
    delta: float = DEFAULT_DELTA
    bound_kind: BoundKind = BoundKind.HARTLEY
    max_iterations: int = 200_000
    queue_capacity_cap: int = 5_000_000

    def __post_init__(self):
        if not 0.0 < self.delta < HALF_PI:
            raise ConfigError("delta must lie in (0, pi/2)")
        object.__setattr__(self, "bound_kind", BoundKind(self.bound_kind))


@dataclass(order=True)
class RotationCube:
    # heap key: larger upper first, then larger lower, then smaller cube,
    # then cube coordinates so ties never depend on insertion order
    sort_key: tuple = field(init=False, repr=False)
    center: tuple[float, float, float] = field(compare=False)
    half_side: float = field(compare=False)
    upper: int = field(compare=False)
    lower: int = field(compare=False)

    def __post_init__(self):
        if self.half_side <= 0:
            raise ValueError("half_side must be positive")
        if self.upper < self.lower or self.lower < 0:
            raise ValueError("need upper >= lower >= 0")
        self.sort_key = (-self.upper, -self.lower, self.half_side, self.center)

    @property
    def volume(self) -> float:
        return (2.0 * self.half_side) ** 3


@dataclass
class ConsensusReport:
    best_rotation: np.ndarray
    best_axis_angle: np.ndarray
    best_count: int
    inlier_constraint_ids: np.ndarray
    iterations: int
    certified: bool
    explored_branches: int
    best_half_side: float
    # rows: (iteration, best_upper, best_lower, queue_size, remaining_volume)
    bound_trace: list[tuple[int, int, int, int, float]] = field(default_factory=list)

    @property
    def remaining_volume_trace(self) -> list[float]:
        return [row[4] for row in self.bound_trace]


def derive_tau(delta: float) -> float:
    """Embedded-space threshold accepting the same constraints as ``delta``.

    ``cos angle(e, x) = cos angle(v, R u) / sqrt(3)`` for unit ``e`` and
    ``|x| = sqrt(3)``, so ``sin`` of the distance from pi/2 scales by 1/sqrt(3).
    """
    if not 0.0 < delta <= HALF_PI:
        raise ConfigError("delta must lie in (0, pi/2]")
    return math.asin(math.sin(delta) / SQRT3)


def linear_margin(half_side: float) -> float:
    """Upper bound ``alpha`` on ``angle(x, x0)`` over a cube of given half-side."""
    c = (1.0 + 2.0 * math.cos(min(SQRT3 * half_side, math.pi))) / 3.0
    return math.acos(min(1.0, max(-1.0, c)))


def _embedded_rotations(r: np.ndarray) -> np.ndarray:
    """Column-major 9-vectors of the rotations for axis-angle rows ``r`` (k, 3)."""
    theta = np.sqrt(np.einsum("ij,ij->i", r, r))
    safe = np.where(theta > 0, theta, 1.0)
    a = np.where(theta > 1e-6, np.sin(theta) / safe, 1.0 - theta**2 / 6.0)
    b = np.where(theta > 1e-6, (1.0 - np.cos(theta)) / safe**2, 0.5 - theta**2 / 24.0)
    x, y, z = r.T
    # R = I + a K + b K^2, with K^2 = r r^T - theta^2 I
    out = np.empty((len(r), 9))
    out[:, 0] = 1 - b * (y * y + z * z)
    out[:, 1] = a * z + b * x * y
    out[:, 2] = -a * y + b * x * z
    out[:, 3] = -a * z + b * x * y
    out[:, 4] = 1 - b * (x * x + z * z)
    out[:, 5] = a * x + b * y * z
    out[:, 6] = a * y + b * x * z
    out[:, 7] = -a * x + b * y * z
    out[:, 8] = 1 - b * (x * x + y * y)
    return out


def _residuals_hartley(constraints: ConstraintSet, x: np.ndarray) -> np.ndarray:
    # |angle(v, Ru) - pi/2| = asin(|v.Ru|) = asin(|e.x|) for unit v, u
    c = constraints.e @ x.T
    return np.arcsin(np.minimum(np.abs(c), 1.0))


def _residuals_linear(constraints: ConstraintSet, x: np.ndarray) -> np.ndarray:
    c = (constraints.e @ x.T) / np.sqrt(np.einsum("...i,...i->...", x, x))
    return np.arcsin(np.minimum(np.abs(c), 1.0))


def pair_residuals(constraints: ConstraintSet, R: np.ndarray) -> np.ndarray:
    """Residual of every constraint at ``R`` (shape ``(m,)``)."""
    return _residuals_hartley(constraints, embed_rotation(np.asarray(R, dtype=float)))


def consensus_count(constraints: ConstraintSet, R: np.ndarray, delta: float) -> int:
    return int(np.count_nonzero(pair_residuals(constraints, R) < delta))


def bounds_hartley(constraints: ConstraintSet, cube: RotationCube, delta: float) -> tuple[int, int]:
    up, lo = _bounds_batch(constraints, np.array([cube.center]), cube.half_side, BoundKind.HARTLEY, delta)
    return int(up[0]), int(lo[0])


def bounds_linear(constraints: ConstraintSet, cube: RotationCube, tau: float) -> tuple[int, int]:
    up, lo = _bounds_batch(constraints, np.array([cube.center]), cube.half_side, BoundKind.LINEAR, tau)
    return int(up[0]), int(lo[0])


def _bounds_batch(constraints, centers, half_side, kind, threshold):
    """Upper/lower bounds for equal-sized cubes with the given centres."""
    x = _embedded_rotations(np.asarray(centers, dtype=float))
    if kind is BoundKind.HARTLEY:
        res = _residuals_hartley(constraints, x)
        margin = SQRT3 * half_side
    else:
        res = _residuals_linear(constraints, x)
        margin = linear_margin(half_side)
    lower = np.count_nonzero(res < threshold, axis=0)
    upper = np.count_nonzero(res < threshold + margin, axis=0)
    return upper, lower


_OFFSETS = np.array([[sx, sy, sz] for sx in (-1, 1) for sy in (-1, 1) for sz in (-1, 1)], dtype=float)


def solve_rotation(constraints: ConstraintSet, config: RotationSearchConfig = RotationSearchConfig()) -> ConsensusReport:
    """Best-first branch-and-bound for the rotation with maximal consensus.

    Terminates with a certificate once no queued cube has an upper bound above
    the best lower bound. If ``max_iterations`` or the queue cap is hit first
    the best rotation so far is returned with ``certified=False``.
    """
    m = len(constraints)
    if m == 0:
        raise EmptyInputError("rotation search needs at least one constraint")
    kind = config.bound_kind
    threshold = config.delta if kind is BoundKind.HARTLEY else derive_tau(config.delta)

    root_sigma = math.pi
    up, lo = _bounds_batch(constraints, np.zeros((1, 3)), root_sigma, kind, threshold)
    root = RotationCube((0.0, 0.0, 0.0), root_sigma, int(up[0]), int(lo[0]))
    best_lower, best_cube = root.lower, root
    # entries are (sort_key, cube); keys are unique because centres are
    heap = [(root.sort_key, root)] if root.upper > best_lower else []
    volume = root.volume if heap else 0.0
    total_volume = root.volume
    trace = [(0, max(root.upper, best_lower), best_lower, len(heap), volume / total_volume)]
    explored = 1
    iterations = 0
    certified = True

    while heap:
        if iterations >= config.max_iterations or len(heap) > config.queue_capacity_cap:
            certified = False
            break
        _, cube = heapq.heappop(heap)
        volume -= cube.volume
        iterations += 1

        s = 0.5 * cube.half_side
        centers = np.asarray(cube.center) + s * _OFFSETS
        ups, los = _bounds_batch(constraints, centers, s, kind, threshold)
        ups, los = ups.tolist(), los.tolist()
        explored += 8

        k_best = max(range(8), key=lambda k: (los[k], -k))
        if los[k_best] > best_lower:
            best_lower = los[k_best]
            best_cube = RotationCube(tuple(centers[k_best].tolist()), s, ups[k_best], los[k_best])
            heap = [item for item in heap if item[1].upper > best_lower]
            heapq.heapify(heap)
            volume = sum(item[1].volume for item in heap)
        for k in range(8):
            if ups[k] > best_lower:
                child = RotationCube(tuple(centers[k].tolist()), s, ups[k], los[k])
                heapq.heappush(heap, (child.sort_key, child))
                volume += child.volume

        best_upper = max(best_lower, heap[0][1].upper) if heap else best_lower
        trace.append((iterations, best_upper, best_lower, len(heap), max(volume, 0.0) / total_volume))

    r_best = np.array(best_cube.center)
    R_best = axis_angle_to_matrix(r_best)
    inliers = np.flatnonzero(pair_residuals(constraints, R_best) < config.delta)
    return ConsensusReport(
        best_rotation=R_best,
        best_axis_angle=r_best,
        best_count=best_lower,
        inlier_constraint_ids=inliers,
        iterations=iterations,
        certified=certified,
        explored_branches=explored,
        best_half_side=best_cube.half_side,
        bound_trace=trace,
    )

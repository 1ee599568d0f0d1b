"""End-to-end pose estimation: pairing, rotation search, translation vote."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .constants import DEFAULT_DELTA
from .geometry import Pose, rotation_angular_distance
from .pairing import ConstraintSet, Correspondences, PairingStrategy, build_pairs
from .rotation_search import BoundKind, ConsensusReport, RotationSearchConfig, solve_rotation
from .translation import TranslationConfig, TranslationReport, solve_translation

# angular threshold used only to report final correspondence inliers
REPORT_INLIER_ANGLE = 0.02


@dataclass(frozen=True)
class SolverConfig:
    delta: float = DEFAULT_DELTA
    bound_kind: BoundKind = BoundKind.HARTLEY
    epsilon_t: float | None = None
    pairing: PairingStrategy = PairingStrategy()
    max_iterations: int = 200_000
    inlier_angle: float = REPORT_INLIER_ANGLE

    def rotation_config(self) -> RotationSearchConfig:
        return RotationSearchConfig(self.delta, self.bound_kind, self.max_iterations)

    def translation_config(self) -> TranslationConfig:
        return TranslationConfig(self.delta, self.epsilon_t)


@dataclass
class PoseEstimate:
    pose: Pose
    rotation: ConsensusReport
    translation: TranslationReport
    constraints: ConstraintSet = field(repr=False)
    inlier_ids: np.ndarray
    rot_ms: float
    trans_ms: float

    @property
    def certified(self) -> bool:
        return self.rotation.certified


def correspondence_inliers(corrs: Correspondences, pose: Pose, threshold: float) -> np.ndarray:
    cam = pose.transform(corrs.points)
    cos = np.einsum("ij,ij->i", cam, corrs.bearings)
    sin = np.linalg.norm(np.cross(cam, corrs.bearings), axis=1)
    return np.flatnonzero(np.arctan2(sin, cos) < threshold)


def estimate_pose(corrs: Correspondences, config: SolverConfig = SolverConfig()) -> PoseEstimate:
    constraints = build_pairs(corrs, config.pairing)
    t0 = time.perf_counter()
    rot = solve_rotation(constraints, config.rotation_config())
    t1 = time.perf_counter()
    trans = solve_translation(corrs, constraints.source_ids, rot.best_rotation, config.translation_config())
    t2 = time.perf_counter()
    pose = Pose(rot.best_rotation, trans.t)
    inliers = corrs.ids[correspondence_inliers(corrs, pose, config.inlier_angle)]
    return PoseEstimate(pose, rot, trans, constraints, inliers, 1e3 * (t1 - t0), 1e3 * (t2 - t1))


def pose_errors(truth: Pose, estimate: Pose) -> tuple[float, float]:
    """Rotation error (radians) and relative translation error (fraction)."""
    e_rot = rotation_angular_distance(truth.rotation, estimate.rotation)
    e_trans = float(np.linalg.norm(truth.translation - estimate.translation) / np.linalg.norm(truth.translation))
    return e_rot, e_trans

"""Outlier-robust absolute pose from pairwise constraints, solved by branch-and-bound."""

from .geometry import (Pose, angle_between, axis_angle_to_matrix, embed_pair, embed_rotation,
                       matrix_to_axis_angle, rotation_angular_distance)
from .pairing import (ConstraintSet, Correspondence, Correspondences, PairConstraint, PairingStrategy,
                      build_pairs, pair_residual)
from .pipeline import PoseEstimate, SolverConfig, estimate_pose, pose_errors
from .rotation_search import (BoundKind, ConsensusReport, RotationCube, RotationSearchConfig, bounds_hartley,
                              bounds_linear, consensus_count, derive_tau, solve_rotation)
from .synthetic import OutlierType, Scene, SceneConfig, generate_scene
from .translation import (TranslationConfig, TranslationReport, filter_pairs, pair_translation,
                          solve_translation, vote_axis)

__version__ = "0.1.0"

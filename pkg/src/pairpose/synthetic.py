"""Synthetic 2D-3D correspondence scenes with controlled outliers."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.spatial.transform import Rotation

from .errors import ConfigError
from .geometry import Pose
from .pairing import Correspondences


class OutlierType(int, Enum):
    SAME_BOX = 1
    UNIT_BOX = 2


@dataclass(frozen=True)
class SceneConfig:
    n_points: int = 1000
    image_width: int = 640
    image_height: int = 480
    focal: float = 1000.0
    point_box: tuple = ((0.0, 10.0), (0.0, 10.0), (5.0, 15.0))
    outlier_ratio: float = 0.0
    outlier_type: OutlierType = OutlierType.SAME_BOX
    noise_sigma_px: float = 1.0
    random_pose: bool = False
    rng_seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "outlier_type", OutlierType(self.outlier_type))
        if self.n_points < 1:
            raise ConfigError("n_points must be positive")
        if not 0.0 <= self.outlier_ratio < 1.0:
            raise ConfigError("outlier_ratio must lie in [0, 1)")
        if any(hi <= lo for lo, hi in self.point_box):
            raise ConfigError("point_box must be nonempty")
        if self.noise_sigma_px < 0 or self.focal <= 0:
            raise ConfigError("noise and focal length must be nonnegative / positive")

    @property
    def principal_point(self) -> tuple[float, float]:
        return 0.5 * self.image_width, 0.5 * self.image_height


@dataclass
class Scene:
    corrs: Correspondences
    ground_truth: Pose
    inlier_mask: np.ndarray
    depths: np.ndarray = field(repr=False)
    pixels: np.ndarray = field(repr=False)

    def __iter__(self):
        return iter((self.corrs, self.ground_truth, self.inlier_mask))


def pixels_to_bearings(px: np.ndarray, focal: float, cx: float, cy: float) -> np.ndarray:
    px = np.asarray(px, dtype=float).reshape(-1, 2)
    rays = np.column_stack([(px[:, 0] - cx) / focal, (px[:, 1] - cy) / focal, np.ones(len(px))])
    return rays / np.linalg.norm(rays, axis=1, keepdims=True)


def project(cam_points: np.ndarray, focal: float, cx: float, cy: float) -> np.ndarray:
    return np.column_stack([focal * cam_points[:, 0] / cam_points[:, 2] + cx,
                            focal * cam_points[:, 1] / cam_points[:, 2] + cy])


def ground_truth_pose(cfg: SceneConfig, rng: np.random.Generator) -> Pose:
    """Camera pose that keeps the whole point box inside the image.

    The default uses the identity rotation with the camera backed off from the
    box centre; ``random_pose`` draws a uniform rotation and looks at the box
    centre from a distance where its bounding sphere fits the field of view.
    """
    box = np.array(cfg.point_box, dtype=float)
    center = box.mean(axis=1)
    half = 0.5 * (box[:, 1] - box[:, 0])
    half_w, half_h = 0.5 * cfg.image_width, 0.5 * cfg.image_height
    if not cfg.random_pose:
        # nearest face at depth z must satisfy f*half_x/z <= half_w (same for y)
        z_near = 1.1 * cfg.focal * max(half[0] / half_w, half[1] / half_h)
        t = np.array([-center[0], -center[1], z_near - box[2, 0]])
        return Pose(np.eye(3), t)
    R = Rotation.random(random_state=rng).as_matrix()
    radius = float(np.linalg.norm(half))
    half_fov = np.arctan(min(half_w, half_h) / cfg.focal)
    dist = 1.05 * radius / np.sin(half_fov)
    t = np.array([0.0, 0.0, dist]) - R @ center
    return Pose(R, t)


def generate_scene(cfg: SceneConfig) -> Scene:
    rng = np.random.default_rng(cfg.rng_seed)
    pose = ground_truth_pose(cfg, rng)
    cx, cy = cfg.principal_point
    box = np.array(cfg.point_box, dtype=float)

    n_out = int(round(cfg.outlier_ratio * cfg.n_points))
    n_in = cfg.n_points - n_out

    pts, px_true, depth = [], [], []
    have = 0
    while have < n_in:
        cand = rng.uniform(box[:, 0], box[:, 1], size=(max(2 * (n_in - have), 16), 3))
        cam = pose.transform(cand)
        with np.errstate(divide="ignore", invalid="ignore"):
            px = project(cam, cfg.focal, cx, cy)
        ok = ((cam[:, 2] > 0) & (px[:, 0] >= 0) & (px[:, 0] < cfg.image_width)
              & (px[:, 1] >= 0) & (px[:, 1] < cfg.image_height))
        take = np.flatnonzero(ok)[: n_in - have]
        pts.append(cand[take])
        px_true.append(px[take])
        depth.append(np.linalg.norm(cam[take], axis=1))
        have += len(take)
    P_in = np.concatenate(pts) if pts else np.empty((0, 3))
    px_in = np.concatenate(px_true) if px_true else np.empty((0, 2))
    lam_in = np.concatenate(depth) if depth else np.empty(0)
    if cfg.noise_sigma_px > 0:
        px_in = px_in + rng.normal(0.0, cfg.noise_sigma_px, size=px_in.shape)

    if cfg.outlier_type is OutlierType.SAME_BOX:
        P_out = rng.uniform(box[:, 0], box[:, 1], size=(n_out, 3))
    else:
        P_out = rng.uniform(0.0, 1.0, size=(n_out, 3))
    px_out = rng.uniform([0.0, 0.0], [cfg.image_width, cfg.image_height], size=(n_out, 2))

    P = np.concatenate([P_in, P_out])
    px = np.concatenate([px_in, px_out])
    mask = np.concatenate([np.ones(n_in, bool), np.zeros(n_out, bool)])
    lam = np.concatenate([lam_in, np.full(n_out, np.nan)])
    order = rng.permutation(cfg.n_points)
    P, px, mask, lam = P[order], px[order], mask[order], lam[order]
    Q = pixels_to_bearings(px, cfg.focal, cx, cy)
    return Scene(Correspondences(P, Q), pose, mask, lam, px)

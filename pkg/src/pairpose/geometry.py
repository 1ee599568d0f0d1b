"""Small-dimension rotation geometry and the residuals built on it.

Rotations are plain ``(3, 3)`` float arrays, axis-angle vectors are ``(3,)``
arrays whose norm is the angle in radians. Most functions also accept a
leading batch dimension where noted.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constants import DEGENERATE_NORM, HALF_PI, UNIT_TOL
from .errors import DegenerateVectorError


@dataclass(frozen=True)
class Pose:
    rotation: np.ndarray
    translation: np.ndarray

    def __post_init__(self):
        R = np.asarray(self.rotation, dtype=float)
        t = np.asarray(self.translation, dtype=float).reshape(3)
        if not is_rotation(R):
            raise ValueError("rotation is not in SO(3)")
        if not np.all(np.isfinite(t)):
            raise ValueError("translation must be finite")
        object.__setattr__(self, "rotation", R)
        object.__setattr__(self, "translation", t)

    def transform(self, points: np.ndarray) -> np.ndarray:
        """World points ``(n, 3)`` into the camera frame."""
        return np.asarray(points) @ self.rotation.T + self.translation


def is_rotation(R: np.ndarray, tol: float = UNIT_TOL) -> bool:
    R = np.asarray(R, dtype=float)
    if R.shape != (3, 3) or not np.all(np.isfinite(R)):
        return False
    return bool(np.allclose(R.T @ R, np.eye(3), atol=tol) and abs(np.linalg.det(R) - 1.0) <= tol)


def hat(w: np.ndarray) -> np.ndarray:
    """Skew-symmetric matrix of ``w``; works on ``(..., 3)`` input."""
    w = np.asarray(w, dtype=float)
    out = np.zeros(w.shape[:-1] + (3, 3))
    out[..., 0, 1] = -w[..., 2]
    out[..., 0, 2] = w[..., 1]
    out[..., 1, 0] = w[..., 2]
    out[..., 1, 2] = -w[..., 0]
    out[..., 2, 0] = -w[..., 1]
    out[..., 2, 1] = w[..., 0]
    return out


def axis_angle_to_matrix(r: np.ndarray) -> np.ndarray:
    """Rodrigues formula. Accepts ``(3,)`` or a batch ``(k, 3)``."""
    r = np.asarray(r, dtype=float)
    theta = np.linalg.norm(r, axis=-1)[..., None, None]
    K = hat(r)
    K2 = K @ K
    small = theta < 1e-6
    # Taylor expansions keep the tiny-angle branch accurate to ~1e-18.
    with np.errstate(divide="ignore", invalid="ignore"):
        a = np.where(small, 1.0 - theta**2 / 6.0, np.sin(theta) / theta)
        b = np.where(small, 0.5 - theta**2 / 24.0, (1.0 - np.cos(theta)) / theta**2)
    return np.eye(3) + a * K + b * K2


def _vee_antisym(R: np.ndarray) -> np.ndarray:
    # sin(theta) * axis
    return 0.5 * np.array([R[2, 1] - R[1, 2], R[0, 2] - R[2, 0], R[1, 0] - R[0, 1]])


def _canonical_sign(axis: np.ndarray) -> np.ndarray:
    for c in axis:
        if abs(c) > UNIT_TOL:
            return axis if c > 0 else -axis
    return axis


def matrix_to_axis_angle(R: np.ndarray) -> np.ndarray:
    """Inverse of :func:`axis_angle_to_matrix` with angle in ``[0, pi]``.

    At exactly pi the axis sign is ambiguous; the representative whose first
    nonzero component is positive is returned.
    """
    R = np.asarray(R, dtype=float)
    w = _vee_antisym(R)
    s = np.linalg.norm(w)
    c = 0.5 * (np.trace(R) - 1.0)
    theta = np.arctan2(s, c)
    if theta < 1e-6:
        # R - R^T = 2 sin(theta) K  and sin(theta)/theta ~ 1 - theta^2/6
        return w * (1.0 + theta**2 / 6.0)
    if theta < np.pi - 1e-4:
        return w * (theta / s)
    # Near pi: recover the axis from the symmetric part, sign from w.
    S = 0.5 * (R + R.T)
    aat = (S - c * np.eye(3)) / (1.0 - c)
    k = int(np.argmax(np.diag(aat)))
    axis = aat[:, k] / np.sqrt(aat[k, k])
    axis /= np.linalg.norm(axis)
    proj = float(axis @ w)
    if abs(proj) > 1e-12:
        axis = axis if proj > 0 else -axis
    else:
        axis = _canonical_sign(axis)
    return axis * theta


def _check_vector(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if np.linalg.norm(a) < DEGENERATE_NORM:
        raise DegenerateVectorError(f"vector {a} has (near) zero norm")
    return a


def angle_between(a: np.ndarray, b: np.ndarray) -> float:
    """Angle in ``[0, pi]`` via atan2(|a x b|, a.b).

    Other dimensions (the 9-vector embeddings) use the equally stable
    ``2 atan2(|a' - b'|, |a' + b'|)`` on normalised inputs.
    """
    a = _check_vector(a)
    b = _check_vector(b)
    if a.shape == (3,) and b.shape == (3,):
        return float(np.arctan2(np.linalg.norm(np.cross(a, b)), a @ b))
    a = a / np.linalg.norm(a)
    b = b / np.linalg.norm(b)
    return float(2.0 * np.arctan2(np.linalg.norm(a - b), np.linalg.norm(a + b)))


def rotation_angular_distance(R1: np.ndarray, R2: np.ndarray) -> float:
    c = 0.5 * (np.trace(np.asarray(R1).T @ np.asarray(R2)) - 1.0)
    return float(np.arccos(np.clip(c, -1.0, 1.0)))


def embed_rotation(R: np.ndarray) -> np.ndarray:
    """Column-major stacking (R11, R21, R31, R12, ...). Works on ``(k, 3, 3)``."""
    R = np.asarray(R, dtype=float)
    return np.swapaxes(R, -1, -2).reshape(R.shape[:-2] + (9,))


def unit(a: np.ndarray) -> np.ndarray:
    a = _check_vector(a)
    return a / np.linalg.norm(a)


def embed_pair(v: np.ndarray, u: np.ndarray) -> np.ndarray:
    """9-vector ``e`` with ``e @ embed_rotation(R) == v @ R @ u`` for unit v, u."""
    v = unit(v)
    u = unit(u)
    return np.outer(u, v).ravel()


def orthogonality_residual(v: np.ndarray, w: np.ndarray) -> float:
    """``|angle(v, w) - pi/2|``, the distance from exact orthogonality."""
    return abs(angle_between(v, w) - HALF_PI)

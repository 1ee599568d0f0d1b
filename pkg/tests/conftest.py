import numpy as np
import pytest

from pairpose.pairing import Correspondences
from pairpose.synthetic import SceneConfig, generate_scene


def random_pose(rng):
    from scipy.spatial.transform import Rotation

    R = Rotation.random(random_state=rng).as_matrix()
    t = rng.uniform(-2, 2, size=3)
    return R, t


def noise_free_correspondences(rng, n, R=None, t=None):
    """Inlier-only correspondences in front of a random camera, with true depths."""
    if R is None:
        R, t = random_pose(rng)
    cam = rng.uniform([-3, -3, 4], [3, 3, 12], size=(n, 3))
    P = (cam - t) @ R  # R^T (cam - t)
    depths = np.linalg.norm(cam, axis=1)
    Q = cam / depths[:, None]
    return Correspondences(P, Q), R, t, depths


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def noisy_scene():
    return generate_scene(SceneConfig(n_points=200, outlier_ratio=0.25, noise_sigma_px=1.0,
                                      random_pose=True, rng_seed=7))


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def record_criterion():
    def record(name: str, passed: bool, detail: str):
        line = f"[{'PASS' if passed else 'FAIL'}] {name}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

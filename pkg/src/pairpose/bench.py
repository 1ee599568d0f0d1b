"""Synthetic trial runner, correspondence files and CSV output."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .errors import PoseError
from .pairing import Correspondences
from .pipeline import SolverConfig, estimate_pose, pose_errors
from .synthetic import SceneConfig, generate_scene, pixels_to_bearings

ROT_SUCCESS = 0.1
TRANS_SUCCESS = 0.2

CSV_COLUMNS = ["seed", "outlier_ratio", "outlier_type", "bound_kind", "e_rot", "e_trans",
               "success", "rot_ms", "trans_ms", "rot_iterations", "certified", "error"]
TRACE_COLUMNS = ["iteration", "best_upper", "best_lower", "queue_size", "remaining_volume"]


class ParseError(PoseError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass
class TrialResult:
    seed: int
    outlier_ratio: float
    outlier_type: int
    bound_kind: str
    e_rot: float = math.nan
    e_trans: float = math.nan
    success: bool = False
    rot_ms: float = math.nan
    trans_ms: float = math.nan
    rot_iterations: int = 0
    certified: bool = False
    error: str = ""
    trace: list = field(default_factory=list, repr=False)


def trial_seeds(master_seed: int, n_trials: int) -> list[int]:
    return [int(s) for s in np.random.SeedSequence(master_seed).generate_state(n_trials)]


def run_trial(scene_cfg: SceneConfig, solver_cfg: SolverConfig,
              rot_threshold: float = ROT_SUCCESS, trans_threshold: float = TRANS_SUCCESS) -> TrialResult:
    seed = scene_cfg.rng_seed
    res = TrialResult(seed, scene_cfg.outlier_ratio, int(scene_cfg.outlier_type), solver_cfg.bound_kind.value)
    scene = generate_scene(scene_cfg)
    cfg = replace(solver_cfg, pairing=replace(solver_cfg.pairing, rng_seed=seed))
    try:
        est = estimate_pose(scene.corrs, cfg)
    except PoseError as exc:
        res.error = type(exc).__name__
        return res
    res.e_rot, res.e_trans = pose_errors(scene.ground_truth, est.pose)
    res.success = bool(res.e_rot < rot_threshold and res.e_trans < trans_threshold)
    res.rot_ms, res.trans_ms = est.rot_ms, est.trans_ms
    res.rot_iterations = est.rotation.iterations
    res.certified = est.rotation.certified
    res.trace = est.rotation.bound_trace
    return res


def run_trials(scene_cfg: SceneConfig, solver_cfg: SolverConfig, n_trials: int, master_seed: int = 0,
               rot_threshold: float = ROT_SUCCESS, trans_threshold: float = TRANS_SUCCESS) -> list[TrialResult]:
    """Independent trials; trial ``i`` uses the ``i``-th seed derived from ``master_seed``."""
    return [run_trial(replace(scene_cfg, rng_seed=s), solver_cfg, rot_threshold, trans_threshold)
            for s in trial_seeds(master_seed, n_trials)]


def success_rate(results: list[TrialResult]) -> float:
    return sum(r.success for r in results) / len(results) if results else math.nan


def _fmt(x) -> str:
    if isinstance(x, bool):
        return str(int(x))
    if isinstance(x, float):
        return "nan" if math.isnan(x) else f"{x:.9g}"
    return str(x)


def results_csv(results: list[TrialResult], timing: bool = True) -> str:
    """CSV text. With ``timing=False`` the runtime columns are left empty so
    repeated runs produce identical bytes."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in results:
        row = [r.seed, r.outlier_ratio, r.outlier_type, r.bound_kind, r.e_rot, r.e_trans, r.success,
               r.rot_ms if timing else "", r.trans_ms if timing else "", r.rot_iterations, r.certified, r.error]
        w.writerow([_fmt(x) for x in row])
    return buf.getvalue()


def trace_csv(trace) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TRACE_COLUMNS)
    for row in trace:
        w.writerow([_fmt(x) for x in row])
    return buf.getvalue()


def read_correspondences(path, pixels: bool = False, focal: float = 1000.0,
                         cx: float = 320.0, cy: float = 240.0) -> Correspondences:
    """Parse ``px py pz bx by bz`` records (or ``px py pz u v`` with ``pixels``).

    Blank lines and ``#`` comments are ignored. Bearings are normalised.
    """
    width = 5 if pixels else 6
    pts, tail = [], []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != width:
            raise ParseError(f"expected {width} numbers, got {len(fields)}", lineno)
        try:
            vals = [float(f) for f in fields]
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from None
        if not all(math.isfinite(v) for v in vals):
            raise ParseError("non-finite value", lineno)
        if not pixels and math.hypot(*vals[3:]) < 1e-12:
            raise ParseError("zero bearing vector", lineno)
        pts.append(vals[:3])
        tail.append(vals[3:])
    if not pts:
        raise ParseError("no correspondences in file")
    P = np.array(pts)
    if pixels:
        Q = pixels_to_bearings(np.array(tail), focal, cx, cy)
    else:
        Q = np.array(tail)
        Q = Q / np.linalg.norm(Q, axis=1, keepdims=True)
    return Correspondences(P, Q)


def write_correspondences(path, corrs: Correspondences, header: str = "") -> None:
    lines = [f"# {h}" for h in header.splitlines()]
    lines.append("# px py pz bx by bz")
    for p, q in zip(corrs.points, corrs.bearings):
        lines.append(" ".join(f"{v:.17g}" for v in (*p, *q)))
    Path(path).write_text("\n".join(lines) + "\n")

"""Command line: ``pairpose [bench] ...``, ``pairpose solve FILE``, ``pairpose generate``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .bench import (ParseError, read_correspondences, results_csv, run_trials, success_rate, trace_csv,
                    write_correspondences)
from .constants import DEFAULT_DELTA
from .errors import PoseError
from .pairing import PairingStrategy
from .pipeline import SolverConfig, estimate_pose
from .rotation_search import BoundKind
from .synthetic import SceneConfig, generate_scene

EXIT_PARSE = 2
EXIT_SOLVER = 3


def _floats(text):
    return [float(x) for x in text.split(",")]


def _ints(text):
    return [int(x) for x in text.split(",")]


def _bounds(text):
    return [BoundKind(x) for x in text.split(",")]


def _solver_args(p):
    p.add_argument("--bound", type=_bounds, default=[BoundKind.HARTLEY],
                   help="hartley, linear or a comma list of both")
    p.add_argument("--delta", type=float, default=DEFAULT_DELTA, help="pairwise inlier threshold (rad)")
    p.add_argument("--epsilon-t", type=float, default=None, help="translation vote threshold (world units)")
    p.add_argument("--pairing", default="half", help="half | augmented:K | all")
    p.add_argument("--max-iter", type=int, default=200_000)
    p.add_argument("--trace", type=Path, default=None, help="bound trace CSV of the first run")


def _scene_args(p):
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--outlier-ratio", type=_floats, default=[0.1])
    p.add_argument("--outlier-type", type=_ints, default=[1])
    p.add_argument("--noise-px", type=float, default=1.0)
    p.add_argument("--random-pose", action="store_true")
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pairpose", description=__doc__)
    sub = parser.add_subparsers(dest="command")

    b = sub.add_parser("bench", help="synthetic success-rate / runtime trials (default)")
    _scene_args(b)
    _solver_args(b)
    b.add_argument("--trials", type=int, default=10)
    b.add_argument("--csv", type=Path, default=None)
    b.add_argument("--no-timing", action="store_true", help="omit runtime columns (byte-stable CSV)")

    s = sub.add_parser("solve", help="estimate the pose for a correspondence file")
    s.add_argument("file", type=Path)
    _solver_args(s)
    s.add_argument("--pixels", action="store_true", help="records are 'px py pz u v'")
    s.add_argument("--focal", type=float, default=1000.0)
    s.add_argument("--cx", type=float, default=320.0)
    s.add_argument("--cy", type=float, default=240.0)
    s.add_argument("--out", type=Path, default=None)

    g = sub.add_parser("generate", help="write a synthetic scene as a correspondence file")
    _scene_args(g)
    g.add_argument("--out", type=Path, required=True)
    return parser


def _solver_config(args, kind, seed=0) -> SolverConfig:
    return SolverConfig(delta=args.delta, bound_kind=kind, epsilon_t=args.epsilon_t,
                        pairing=PairingStrategy.parse(args.pairing, seed), max_iterations=args.max_iter)


def cmd_bench(args) -> int:
    results = []
    for kind in args.bound:
        cfg = _solver_config(args, kind)
        for otype in args.outlier_type:
            for ratio in args.outlier_ratio:
                scene = SceneConfig(n_points=args.n, outlier_ratio=ratio, outlier_type=otype,
                                    noise_sigma_px=args.noise_px, random_pose=args.random_pose)
                cell = run_trials(scene, cfg, args.trials, args.seed)
                print(f"bound={kind.value} type={otype} ratio={ratio:g}: success "
                      f"{success_rate(cell):.3f}  median rot_ms "
                      f"{np.median([r.rot_ms for r in cell]):.1f}", file=sys.stderr)
                results.extend(cell)
    text = results_csv(results, timing=not args.no_timing)
    if args.csv:
        args.csv.write_text(text)
    else:
        sys.stdout.write(text)
    if args.trace and results:
        args.trace.write_text(trace_csv(results[0].trace))
    return 0


def cmd_solve(args) -> int:
    try:
        corrs = read_correspondences(args.file, args.pixels, args.focal, args.cx, args.cy)
    except (ParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    if len(corrs) < 4:
        print(f"warning: only {len(corrs)} correspondences ({len(corrs) // 2} pairwise constraint(s)); "
              "the estimate is weakly constrained", file=sys.stderr)
    try:
        est = estimate_pose(corrs, _solver_config(args, args.bound[0]))
    except PoseError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    R, t = est.pose.rotation, est.pose.translation
    lines = ["# rotation (row-major)"]
    lines += [" ".join(f"{x:.12g}" for x in row) for row in R]
    lines += ["# translation", " ".join(f"{x:.12g}" for x in t)]
    lines += [f"# certified {int(est.certified)} consensus {est.rotation.best_count}/{len(est.constraints)} "
              f"iterations {est.rotation.iterations}",
              "# inlier ids", " ".join(str(i) for i in est.inlier_ids)]
    text = "\n".join(lines) + "\n"
    if args.out:
        args.out.write_text(text)
    else:
        sys.stdout.write(text)
    if args.trace:
        args.trace.write_text(trace_csv(est.rotation.bound_trace))
    return 0


def cmd_generate(args) -> int:
    cfg = SceneConfig(n_points=args.n, outlier_ratio=args.outlier_ratio[0], outlier_type=args.outlier_type[0],
                      noise_sigma_px=args.noise_px, random_pose=args.random_pose, rng_seed=args.seed)
    scene = generate_scene(cfg)
    R, t = scene.ground_truth.rotation, scene.ground_truth.translation
    header = "\n".join([
        f"synthetic scene seed={args.seed} n={args.n} outlier_ratio={cfg.outlier_ratio:g} type={int(cfg.outlier_type)}",
        "R_true " + " ".join(f"{x:.17g}" for x in R.ravel()),
        "t_true " + " ".join(f"{x:.17g}" for x in t),
    ])
    write_correspondences(args.out, scene.corrs, header)
    return 0


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv or argv[0] not in ("bench", "solve", "generate", "-h", "--help"):
        argv.insert(0, "bench")
    args = build_parser().parse_args(argv)
    return {"bench": cmd_bench, "solve": cmd_solve, "generate": cmd_generate}[args.command](args)


if __name__ == "__main__":
    sys.exit(main())

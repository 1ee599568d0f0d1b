"""Median rotation-search runtime as the number of correspondences grows."""

import argparse
import time
from pathlib import Path

import numpy as np

from pairpose.pairing import PairingStrategy, build_pairs
from pairpose.rotation_search import BoundKind, RotationSearchConfig, solve_rotation
from pairpose.synthetic import SceneConfig, generate_scene


def time_rotation(n, kind, trials, seed, ratio):
    times, iters = [], []
    for i in range(trials):
        scene = generate_scene(SceneConfig(n_points=n, outlier_ratio=ratio, random_pose=True,
                                           rng_seed=seed + i))
        cs = build_pairs(scene.corrs, PairingStrategy(rng_seed=seed + i))
        t0 = time.perf_counter()
        rep = solve_rotation(cs, RotationSearchConfig(bound_kind=kind))
        times.append(time.perf_counter() - t0)
        iters.append(rep.iterations)
    return float(np.median(times)) * 1e3, float(np.median(iters))


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", default="250,500,1000,1500,2000")
    ap.add_argument("--trials", type=int, default=10)
    ap.add_argument("--outlier-ratio", type=float, default=0.1)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", type=Path, default=Path("results/runtime.csv"))
    args = ap.parse_args()

    lines = ["n,bound_kind,median_rot_ms,median_iterations"]
    for kind in BoundKind:
        for n in (int(s) for s in args.sizes.split(",")):
            ms, it = time_rotation(n, kind, args.trials, args.seed, args.outlier_ratio)
            lines.append(f"{n},{kind.value},{ms:.3f},{it:g}")
            print(lines[-1])
    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()

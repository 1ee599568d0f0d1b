"""Success rate over outlier ratios, outlier types and bound families.

    python3 scripts/success_rate_sweep.py --trials 50 --out results/success.csv
"""

import argparse
from pathlib import Path

from pairpose.bench import results_csv, run_trials, success_rate
from pairpose.pipeline import SolverConfig
from pairpose.rotation_search import BoundKind
from pairpose.synthetic import SceneConfig


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=200)
    ap.add_argument("--trials", type=int, default=20)
    ap.add_argument("--ratios", default="0.1,0.15,0.2,0.25,0.3,0.35,0.4")
    ap.add_argument("--noise-px", type=float, default=1.0)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", type=Path, default=Path("results/success.csv"))
    args = ap.parse_args()

    rows = []
    for kind in BoundKind:
        for otype in (1, 2):
            for ratio in (float(r) for r in args.ratios.split(",")):
                scene = SceneConfig(n_points=args.n, outlier_ratio=ratio, outlier_type=otype,
                                    noise_sigma_px=args.noise_px, random_pose=True)
                res = run_trials(scene, SolverConfig(bound_kind=kind), args.trials, args.seed)
                rows.extend(res)
                print(f"{kind.value:8s} type{otype} ratio {ratio:.2f}: success {success_rate(res):.2f}")
    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_text(results_csv(rows))
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""Seed sweep on the 1-D plateau problem.

For each seed, report which fraction of the final 35-point collection sits on
the flat maximum [0.48, 0.52] and how widely it spreads there.  A healthy
configuration keeps the collection distributed over the whole plateau instead
of collapsing onto a single point.
"""

import argparse

import numpy as np

from budgetbox.testbed import CURVES, default_1d_config, run_1d

PLATEAU = (0.48, 0.52)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seeds", type=int, default=10)
    parser.add_argument("--generations", type=int, default=500)
    parser.add_argument("--population", type=int, default=35)
    args = parser.parse_args()

    print(f"{'seed':>4} {'on-plateau':>10} {'span':>8} {'best F':>8}")
    for seed in range(args.seeds):
        cfg = default_1d_config(seed=seed, generations=args.generations, population=args.population)
        report = run_1d(CURVES["plateau"], cfg)
        xs = np.array([x for x, _ in report.rows])
        fs = np.array([f for _, f in report.rows])
        inside = (xs >= PLATEAU[0]) & (xs <= PLATEAU[1])
        span = xs[inside].max() - xs[inside].min() if inside.any() else 0.0
        print(f"{seed:>4} {inside.mean():>10.1%} {span:>8.4f} {fs.max():>8.4f}")

    cfg = default_1d_config(seed=0, generations=args.generations, population=args.population)
    print("\nfinal collection for seed 0:")
    print(run_1d(CURVES["plateau"], cfg).text_table())


if __name__ == "__main__":
    main()

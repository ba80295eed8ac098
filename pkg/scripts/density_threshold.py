#!/usr/bin/env python3
"""Density-threshold experiment: success rate of the cycle-family search as a
function of average degree on sparsified packings.

Example:
    python3 scripts/density_threshold.py --n 200 --k 2 --points 12 --trials 10
"""

from __future__ import annotations

import argparse
import concurrent.futures
import random

from lincyc.cli import _sweep_trial


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=200)
    ap.add_argument("--r", type=int, default=3)
    ap.add_argument("--k", type=int, default=2)
    ap.add_argument("--mode", choices=["even", "all"], default="even")
    ap.add_argument("--d-from", type=float, default=1.0)
    ap.add_argument("--d-to", type=float, default=24.0)
    ap.add_argument("--points", type=int, default=12)
    ap.add_argument("--trials", type=int, default=10)
    ap.add_argument("--jobs", type=int, default=4)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    step = (args.d_to - args.d_from) / max(1, args.points - 1)
    ds = [args.d_from + i * step for i in range(args.points)]
    jobs = [
        (args.n, args.r, args.k, d, args.mode, rng.getrandbits(32))
        for d in ds
        for _ in range(args.trials)
    ]
    with concurrent.futures.ProcessPoolExecutor(max_workers=args.jobs) as pool:
        results = list(pool.map(_sweep_trial, jobs))

    print(f"# n={args.n} r={args.r} k={args.k} mode={args.mode} trials={args.trials}")
    print(f"{'avg deg':>8}  {'success':>8}  {'mean shortest':>14}")
    for d in ds:
        hits = [s for dd, ok, s, _ in results if dd == d and ok]
        total = sum(1 for dd, *_ in results if dd == d)
        mean = f"{sum(hits) / len(hits):.2f}" if hits else "-"
        bar = "#" * round(20 * len(hits) / total)
        print(f"{d:8.2f}  {len(hits):>3}/{total:<4}  {mean:>14}  {bar}")


if __name__ == "__main__":
    main()

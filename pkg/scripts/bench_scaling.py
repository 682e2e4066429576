"""Rank sweep of amortized ops per update for both backends.

Writes one CSV row per (backend, r, seed) and prints the per-rank means and
the fitted log-log slopes.  Defaults mirror the acceptance sweep; shrink
--t and --seeds for a quick look.

    python scripts/bench_scaling.py --out results/scaling.csv
    python scripts/bench_scaling.py --bias 0.6 --no-full-rank --t 20000
"""
from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from dynhyper.cli import fit_slopes
from dynhyper.instrumentation import stats_to_csv
from dynhyper.replay import RunConfig, replay
from dynhyper.trace import gen_random_trace


def sweep(args: argparse.Namespace) -> list[dict]:
    rows = []
    for r in args.r_list:
        for seed in range(args.seed, args.seed + args.seeds):
            trace = gen_random_trace(args.n, r, args.t, args.bias, seed, min_size=r if args.full_rank else 1)
            for backend in args.backends:
                cfg = RunConfig(
                    backend=backend,
                    seed=seed,
                    alpha_override=args.alpha,
                    test_constants=args.test_constants,
                )
                start = time.perf_counter()
                result = replay(trace, cfg)
                stats = result.stats()
                stats.update(backend=backend, seed=seed, seconds=round(time.perf_counter() - start, 3),
                             notes=len(result.matcher.log.notes))
                rows.append(stats)
                print(f"r={r:<3} seed={seed:<6} {backend}: {stats['ops_per_update']:9.2f} ops/update", file=sys.stderr)
    return rows


def main() -> int:
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--r-list", type=lambda s: [int(x) for x in s.split(",")], default=[2, 4, 8, 16])
    p.add_argument("--backends", type=lambda s: s.split(","), default=["r3", "r2"])
    p.add_argument("--n", type=int, default=64)
    p.add_argument("--t", type=int, default=100_000)
    p.add_argument("--bias", type=float, default=0.5)
    p.add_argument("--seeds", type=int, default=10)
    p.add_argument("--seed", type=int, default=1000)
    p.add_argument("--alpha", type=int, default=16, help="level base override")
    p.add_argument("--full-rank", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--test-constants", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--out", default=None, help="CSV path (default: stdout)")
    args = p.parse_args()

    rows = sweep(args)
    text = stats_to_csv(rows, extra=["backend", "seed", "seconds", "notes"])
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)

    for backend in args.backends:
        means = [np.mean([x["ops_per_update"] for x in rows if x["backend"] == backend and x["r"] == r]) for r in args.r_list]
        print(f"{backend} mean ops/update: " + ", ".join(f"r={r}: {m:.1f}" for r, m in zip(args.r_list, means)), file=sys.stderr)
    for backend, slope in fit_slopes(rows).items():
        print(f"{backend} log-log slope: {slope:.3f}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())

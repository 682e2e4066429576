"""Per-level epoch report for one trace.

Shows how many epochs each level created, how they ended (natural: the
adversary deleted the matched edge; induced: the algorithm evicted it), the
duration histogram and the sample-space sizes seen at each level.

    dynhyper gen --n 40 --r 4 --t 20000 --seed 3 --teardown --out /tmp/t.trace
    python scripts/epoch_report.py /tmp/t.trace --backend r2 --alpha-override 4 --test-constants
"""
from __future__ import annotations

import argparse
import sys
from collections import defaultdict

from dynhyper.replay import RunConfig, replay
from dynhyper.trace import read_trace


def main() -> int:
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("trace")
    p.add_argument("--backend", choices=["r3", "r2"], default="r2")
    p.add_argument("--mode", choices=["online", "offline"], default="online")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--alpha-override", type=int, default=None)
    p.add_argument("--test-constants", action="store_true")
    args = p.parse_args()

    trace = read_trace(args.trace)
    trace.validate()
    cfg = RunConfig(
        backend=args.backend,
        mode=args.mode,
        seed=args.seed,
        alpha_override=args.alpha_override,
        test_constants=args.test_constants,
    )
    result = replay(trace, cfg)
    m = result.matcher
    stats = m.stats()

    print(f"backend={args.backend} r={stats['r']} alpha={stats['alpha']} updates={stats['t']} "
          f"ops/update={stats['ops_per_update']:.2f} epochs={stats['epochs']} evictions={stats['evictions']}")
    print(f"{'level':>5} {'epochs':>8} {'natural':>8} {'induced':>8} {'open':>6} {'samples':>8} {'min |S|':>8} {'alpha^l':>10}")
    spaces = defaultdict(list)
    for rec in m.sampler.records:
        spaces[rec.level].append(rec.space_size)
    levels = sorted(set(stats["epochs_by_level"]) | set(spaces))
    for lvl in levels:
        total = stats["epochs_by_level"].get(lvl, 0)
        nat = stats["natural_by_level"].get(lvl, 0)
        ind = stats["induced_by_level"].get(lvl, 0)
        sizes = spaces.get(lvl, [])
        low = min(sizes) if sizes else "-"
        print(f"{lvl:>5} {total:>8} {nat:>8} {ind:>8} {total - nat - ind:>6} {len(sizes):>8} {low!s:>8} {stats['alpha'] ** lvl:>10}")
    print("duration histogram (bucket: count):",
          ", ".join(f"{b}: {c}" for b, c in stats["duration_histogram"].items()) or "-")
    if args.backend == "r2":
        print("repair cases:", dict(sorted(m.log.cases.items(), key=lambda kv: str(kv[0]))) or "-")
        if m.log.loop_counts:
            print(f"conflict-loop completions: {len(m.log.loop_counts)}, min samples {min(m.log.loop_counts)}")
    for line in result.observation_failures[:10]:
        print("contract:", line)
    return 0 if result.ok else 1


if __name__ == "__main__":
    sys.exit(main())

"""Command line: ``dynhyper {run,verify,gen,compare,bench,cover}``.

Exit codes are stable:

    0  success
    1  audit violation (invariant, maximality or sampling contract)
    2  usage error (bad flags or arguments)
    3  trace or set-system parse/semantic error
    4  precondition error (e.g. offline mode on a trace without teardown)
    5  I/O error

Set ``DYNHYPER_LOG`` to a logging level name (DEBUG, INFO, ...) for more output.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
from typing import Optional, Sequence

import numpy as np

from .core import PreconditionError, UsageError
from .instrumentation import stats_to_csv
from .oracle import is_maximal, naive_maximal_matching, opt_cover_bruteforce
from .replay import BACKENDS, RunConfig, replay
from .setcover import DynamicSetCover, SetSystemError, is_cover, parse_set_system, to_hypergraph
from .trace import TraceError, append_teardown, gen_random_trace, read_trace, write_trace

EXIT_OK = 0
EXIT_AUDIT = 1
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_PRECONDITION = 4
EXIT_IO = 5

log = logging.getLogger("dynhyper")


def _config(args: argparse.Namespace, backend: Optional[str] = None) -> RunConfig:
    return RunConfig(
        backend=backend or args.backend,
        mode=args.mode,
        seed=args.seed,
        alpha_override=args.alpha_override,
        test_constants=args.test_constants,
        audit_every=args.audit_every,
    )


def _write(path: Optional[str], text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def cmd_run(args: argparse.Namespace) -> int:
    trace = read_trace(args.trace)
    trace.validate()
    result = replay(trace, _config(args))
    stats = result.stats()
    _write(args.out, stats_to_csv([stats]))
    status = EXIT_OK
    for step, report in result.failures:
        sys.stderr.write(f"audit failed after update {step}:\n{report.to_text()}")
        status = EXIT_AUDIT
    for line in result.observation_failures:
        sys.stderr.write(f"SAMPLING {line}\n")
        status = EXIT_AUDIT
    if args.verbose_summary:
        sys.stderr.write(
            f"backend={args.backend} updates={stats['t']} audits={result.audits} "
            f"ops/update={stats['ops_per_update']:.2f} matching={len(result.matcher.matching())} "
            f"digest={result.matcher.digest()}\n"
        )
    return status


def cmd_gen(args: argparse.Namespace) -> int:
    trace = gen_random_trace(args.n, args.r, args.t, args.bias, args.seed, min_size=args.min_size)
    if args.teardown:
        trace = append_teardown(trace)
    if args.out is None or args.out == "-":
        from .trace import emit_trace

        sys.stdout.write(emit_trace(trace))
    else:
        write_trace(trace, args.out)
    return EXIT_OK


def cmd_compare(args: argparse.Namespace) -> int:
    trace = read_trace(args.trace)
    trace.validate()
    live = trace.live_after()
    rows = []
    status = EXIT_OK
    greedy = naive_maximal_matching(live)
    greedy_cover = {v for eid in greedy for v in live[eid]}
    for name in args.backends.split(","):
        result = replay(trace, _config(args, backend=name))
        m = result.matcher
        view = m.live_edges()
        maximal = is_maximal(view, m.matching())
        cover = m.cover()
        valid = is_cover(view, cover)
        ok = result.ok and maximal and valid
        if not ok:
            status = EXIT_AUDIT
        rows.append(f"{name}\tmaximal={maximal}\tcover_valid={valid}\tcover={len(cover)}\taudit_ok={result.ok}")
    rows.append(f"oracle\tmaximal={is_maximal(live, greedy)}\tcover_valid={is_cover(live, greedy_cover)}\tcover={len(greedy_cover)}")
    _write(args.out, "\n".join(rows) + "\n")
    return status


def cmd_bench(args: argparse.Namespace) -> int:
    r_list = [int(x) for x in args.r_list.split(",")]
    backends = args.backends.split(",")
    rows = []
    for r in r_list:
        for k in range(args.seeds):
            seed = args.seed + k
            trace = gen_random_trace(args.n, r, args.t, args.bias, seed, min_size=r if args.full_rank else 1)
            for name in backends:
                cfg = RunConfig(
                    backend=name,
                    mode="online",
                    seed=seed,
                    alpha_override=args.alpha_override,
                    test_constants=args.test_constants,
                )
                stats = replay(trace, cfg).stats()
                stats["backend"] = name
                stats["seed"] = seed
                rows.append(stats)
                log.info("backend=%s r=%d seed=%d ops/update=%.2f", name, r, seed, stats["ops_per_update"])
    text = stats_to_csv(rows, extra=["backend", "seed"])
    if args.fit:
        text += "".join(f"# slope {name} {slope:.4f}\n" for name, slope in fit_slopes(rows).items())
    _write(args.out, text)
    return EXIT_OK


def fit_slopes(rows: Sequence[dict]) -> dict[str, float]:
    """Least-squares slope of log(mean ops/update) against log(r), per backend."""
    out = {}
    for name in sorted({row["backend"] for row in rows}):
        by_r: dict[int, list[float]] = {}
        for row in rows:
            if row["backend"] == name:
                by_r.setdefault(row["r"], []).append(row["ops_per_update"])
        rs = sorted(by_r)
        if len(rs) < 2:
            continue
        ys = [float(np.mean(by_r[r])) for r in rs]
        out[name] = float(np.polyfit(np.log(rs), np.log(ys), 1)[0])
    return out


def cmd_cover(args: argparse.Namespace) -> int:
    with open(args.setfile, encoding="utf-8") as fh:
        system = parse_set_system(fh.read())
    graph = to_hypergraph(system)
    cfg = _config(args)
    matcher = BACKENDS[cfg.backend](
        graph.n_vertices,
        graph.r,
        alpha_override=cfg.alpha_override,
        constants=cfg.resolved_constants(),
        faithful=cfg.faithful,
        seed=cfg.seed or 0,
    )
    dyn = DynamicSetCover(matcher)
    for el, sets in graph.edges.items():
        dyn.add_element(el, sets)
    cover = sorted(dyn.cover())
    lines = [f"cover {len(cover)}: " + " ".join(str(s) for s in cover)]
    if args.exact:
        lines.append(f"optimum {opt_cover_bruteforce(graph.edges.values())}")
    _write(args.out, "\n".join(lines) + "\n")
    return EXIT_OK if is_cover(graph.edges, set(cover)) else EXIT_AUDIT


def _add_run_flags(p: argparse.ArgumentParser, audit_default: int) -> None:
    p.add_argument("--backend", choices=sorted(BACKENDS), default="r2")
    p.add_argument("--mode", choices=["online", "offline"], default="online")
    p.add_argument("--seed", type=int, default=None, help="sampler seed (default: trace header seed)")
    p.add_argument("--alpha-override", type=int, default=None, help="level base instead of 4r")
    p.add_argument("--test-constants", action="store_true", help="use the scaled-down case constants")
    p.add_argument("--audit-every", type=int, default=audit_default, metavar="K", help="audit every K updates (0: never)")
    p.add_argument("--out", default=None, help="output path (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dynhyper", description="Dynamic maximal hypergraph matching")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="replay a trace and write stats CSV")
    p.add_argument("trace")
    _add_run_flags(p, audit_default=0)
    p.add_argument("--summary", dest="verbose_summary", action="store_true")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("verify", help="replay a trace auditing every step")
    p.add_argument("trace")
    _add_run_flags(p, audit_default=1)
    p.add_argument("--summary", dest="verbose_summary", action="store_true")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("gen", help="generate a random oblivious trace")
    p.add_argument("--n", type=int, required=True, help="number of vertices")
    p.add_argument("--r", type=int, required=True, help="rank bound")
    p.add_argument("--t", type=int, required=True, help="number of updates")
    p.add_argument("--bias", type=float, default=0.6, help="insert probability")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--min-size", type=int, default=1, help="smallest edge size")
    p.add_argument("--teardown", action="store_true", help="append deletions of all remaining edges")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("compare", help="run several backends and the greedy oracle on one trace")
    p.add_argument("trace")
    _add_run_flags(p, audit_default=0)
    p.add_argument("--backends", default="r3,r2")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("bench", help="sweep the rank and report ops per update")
    p.add_argument("--backends", default="r3,r2")
    p.add_argument("--r-list", default="2,4,8,16")
    p.add_argument("--t", type=int, default=100_000)
    p.add_argument("--n", type=int, default=64)
    p.add_argument("--bias", type=float, default=0.5)
    p.add_argument("--seeds", type=int, default=10)
    p.add_argument("--seed", type=int, default=0, help="first seed")
    p.add_argument("--full-rank", action=argparse.BooleanOptionalAction, default=True,
                   help="every edge has exactly r endpoints")
    p.add_argument("--alpha-override", type=int, default=16)
    p.add_argument("--test-constants", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--fit", action="store_true", help="append fitted log-log slopes as comments")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("cover", help="vertex cover of a set-system file")
    p.add_argument("setfile")
    _add_run_flags(p, audit_default=0)
    p.add_argument("--exact", action="store_true", help="also print the brute-force optimum")
    p.set_defaults(func=cmd_cover)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    level = os.environ.get("DYNHYPER_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (TraceError, SetSystemError) as exc:
        sys.stderr.write(f"parse error: {exc}\n")
        return EXIT_PARSE
    except PreconditionError as exc:
        sys.stderr.write(f"precondition error: {exc}\n")
        return EXIT_PRECONDITION
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except OSError as exc:
        sys.stderr.write(f"I/O error: {exc}\n")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())

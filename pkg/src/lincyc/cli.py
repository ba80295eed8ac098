"""Batch command-line front-end.

Subcommands: gen (instances), find (cycle families), verify (witness check),
spectrum (oracle enumeration), sweep (success rate vs density), mert (tree
inspection).  Exit codes: 0 success, 2 verified failure traces, 1 input
errors.  A JSON config file can mirror any flag; explicit flags win.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import random
import sys
from typing import Optional, Sequence

from .core import LinearHypergraph, verify_cycle
from .engine import consecutive_cycles, even_consecutive_cycles, find_c2k
from .errors import BudgetExceeded, InvalidWitness, LincycError
from .generators import GenSpec, generate, greedy_partial_steiner
from .mert import build_mert
from .oracle import enumerate_cycles
from .reductions import r_partite_reduction


def _read_graph(path: str) -> LinearHypergraph:
    with open(path) as fh:
        text = fh.read()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return LinearHypergraph.from_json(text)
    return LinearHypergraph.from_text(text)


def _apply_config(args: argparse.Namespace, argv: Sequence[str]) -> None:
    if not getattr(args, "config", None):
        return
    with open(args.config) as fh:
        cfg = json.load(fh)
    for key, value in cfg.items():
        dest = key.replace("-", "_")
        flag = "--" + key.replace("_", "-")
        if hasattr(args, dest) and flag not in argv:
            setattr(args, dest, value)


def _seed(args: argparse.Namespace) -> int:
    if args.seed is not None:
        return args.seed
    return random.getrandbits(64)


def cmd_gen(args, argv) -> int:
    spec = GenSpec(
        n=args.n,
        r=args.r,
        mode=args.mode,
        d=args.d,
        girth_floor=args.girth_floor,
        epsilon=args.epsilon,
        seed=_seed(args),
        lengths=[int(x) for x in args.lengths.split(",")] if args.lengths else [],
        background_density=args.background_density,
    )
    g, witnesses = generate(spec)
    text = g.to_text()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if witnesses and args.witnesses_out:
        with open(args.witnesses_out, "w") as fh:
            json.dump([[list(e) for e in c.edges] for c in witnesses], fh)
    print(f"# seed {spec.seed}", file=sys.stderr)
    return 0


def cmd_find(args, argv) -> int:
    g = _read_graph(args.input)
    seed = _seed(args)
    strict = args.strict and not args.best_effort
    if args.mode == "c2k":
        try:
            cycle = find_c2k(g, args.k, seed)
        except LincycError as err:
            print(json.dumps({"outcome": "failure", "reason": str(err), "seed": seed}))
            return 2
        print(json.dumps(
            {"outcome": "success", "length": cycle.length,
             "cycle": [list(e) for e in cycle.edges], "seed": seed},
            sort_keys=True,
        ))
        return 0
    runner = consecutive_cycles if args.mode == "all" else even_consecutive_cycles
    report = runner(g, args.k, seed, strict=strict)
    if args.json:
        print(report.to_json())
    else:
        if report.success:
            fam = report.outcome
            print(f"success lengths={fam.lengths} shortest={fam.shortest} "
                  f"bound={report.bound} seed={seed}")
        else:
            print(f"failure stage={report.outcome.stage} "
                  f"reason={report.outcome.reason} seed={seed}")
    return 0 if report.success else 2


def cmd_verify(args, argv) -> int:
    g = _read_graph(args.input)
    with open(args.cycles) as fh:
        payload = json.load(fh)
    if isinstance(payload, dict):
        payload = payload.get("cycles", [])
    bad = []
    for idx, edges in enumerate(payload):
        try:
            verify_cycle(g, [tuple(e) for e in edges])
        except (LincycError, InvalidWitness) as err:
            bad.append((idx, str(err)))
    for idx, reason in bad:
        print(f"cycle {idx}: {reason}")
    if bad:
        return 2
    print(f"all {len(payload)} cycles verify")
    return 0


def cmd_spectrum(args, argv) -> int:
    g = _read_graph(args.input)
    try:
        spec = enumerate_cycles(g, args.max_len, budget=args.budget)
    except BudgetExceeded as err:
        print(err.partial.to_json())
        return 2
    print(spec.to_json())
    return 0


def _sweep_trial(params: tuple) -> tuple[float, bool, Optional[int], Optional[float]]:
    n, r, k, d, mode, seed = params
    rng = random.Random(seed)
    base = greedy_partial_steiner(n, r, seed=rng.getrandbits(32), effort=1.0)
    p = min(1.0, d * n / max(1, r * base.num_edges()))
    kept = [e for e in base.edges if rng.random() < p]
    g = LinearHypergraph(n, r, kept)
    if g.num_edges() == 0:
        return d, False, None, None
    runner = consecutive_cycles if mode == "all" else even_consecutive_cycles
    report = runner(g, k, seed)
    if report.success:
        return d, True, report.outcome.shortest, report.outcome.bound
    return d, False, None, None


def cmd_sweep(args, argv) -> int:
    seed = _seed(args)
    rng = random.Random(seed)
    points = args.points
    step = (args.d_to - args.d_from) / max(1, points - 1)
    ds = [args.d_from + i * step for i in range(points)]
    jobs: list[tuple] = []
    for d in ds:
        for _ in range(args.trials):
            jobs.append((args.n, args.r, args.k, d, args.mode, rng.getrandbits(32)))
    if args.jobs > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_sweep_trial, jobs))
    else:
        results = [_sweep_trial(j) for j in jobs]
    rows = {}
    for d, ok, shortest, bound in results:
        row = rows.setdefault(d, [0, 0, [], []])
        row[0] += 1
        if ok:
            row[1] += 1
            row[2].append(shortest)
            if bound is not None:
                row[3].append(bound)
    out = ["d,trials,successes,mean_shortest,mean_bound"]
    for d in ds:
        trials, succ, shorts, bounds = rows[d]
        ms = f"{sum(shorts) / len(shorts):.3f}" if shorts else ""
        mb = f"{sum(bounds) / len(bounds):.3f}" if bounds else ""
        out.append(f"{d:g},{trials},{succ},{ms},{mb}")
    text = "\n".join(out) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    print(f"# seed {seed}", file=sys.stderr)
    return 0


def cmd_mert(args, argv) -> int:
    g = _read_graph(args.input)
    sub, partition = r_partite_reduction(g, seed=_seed(args))
    if args.root is not None:
        root = args.root
        if root not in sub.vertices:
            print(f"root {root} not in the partite subgraph", file=sys.stderr)
            return 1
    else:
        _, _, degs = sub.degrees()
        root = min(sub.vertices, key=lambda v: (-degs.get(v, 0), v))
    parts = list(partition.parts)
    idx = next(i for i, p in enumerate(parts) if root in p)
    from .core import RPartition

    rotated = RPartition(tuple([parts[idx]] + [p for i, p in enumerate(parts) if i != idx]))
    m = build_mert(sub, rotated, root)
    print(m.to_json())
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lincyc")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--config", type=str, default=None)

    p = sub.add_parser("gen", help="generate an instance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, default=3)
    p.add_argument("--mode", choices=["steiner", "sparsified", "planted"], default="steiner")
    p.add_argument("--d", type=float, default=4.0)
    p.add_argument("--girth-floor", type=int, default=3)
    p.add_argument("--epsilon", type=float, default=0.5)
    p.add_argument("--lengths", type=str, default="")
    p.add_argument("--background-density", type=float, default=0.0)
    p.add_argument("--out", type=str, default=None)
    p.add_argument("--witnesses-out", type=str, default=None)
    common(p)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("find", help="run a cycle-family engine")
    p.add_argument("--input", type=str, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--mode", choices=["all", "even", "c2k"], default="even")
    p.add_argument("--strict", action="store_true")
    p.add_argument("--best-effort", action="store_true")
    p.add_argument("--json", action="store_true")
    common(p)
    p.set_defaults(func=cmd_find)

    p = sub.add_parser("verify", help="verify a JSON list of cycles")
    p.add_argument("--input", type=str, required=True)
    p.add_argument("--cycles", type=str, required=True)
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("spectrum", help="oracle cycle-length spectrum")
    p.add_argument("--input", type=str, required=True)
    p.add_argument("--max-len", type=int, default=10)
    p.add_argument("--budget", type=int, default=10**8)
    common(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("sweep", help="success rate vs average degree (CSV)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, default=3)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--d-from", type=float, required=True)
    p.add_argument("--d-to", type=float, required=True)
    p.add_argument("--points", type=int, default=10)
    p.add_argument("--trials", type=int, default=5)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--mode", choices=["all", "even"], default="even")
    p.add_argument("--out", type=str, default=None)
    common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("mert", help="build and dump the expanded tree")
    p.add_argument("--input", type=str, required=True)
    p.add_argument("--root", type=int, default=None)
    p.add_argument("--json", action="store_true")
    common(p)
    p.set_defaults(func=cmd_mert)

    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(argv if argv is not None else sys.argv[1:])
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
        _apply_config(args, argv)
        return args.func(args, argv)
    except (OSError, json.JSONDecodeError) as err:
        print(f"input error: {err}", file=sys.stderr)
        return 1
    except LincycError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

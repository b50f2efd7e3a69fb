"""Command-line entry points: ``sim run`` and ``bench run``.

Installed as the ``sim`` and ``bench`` console scripts; ``python -m e2ibs``
takes either word as its first argument.
"""

import argparse
import sys

from . import bench, scheme, sim


def _sim_parser():
    p = argparse.ArgumentParser(prog="sim", description="Run attack-simulator scenarios.")
    sub = p.add_subparsers(dest="cmd", required=True)
    run = sub.add_parser("run", help="run one builtin scenario or a scenario file")
    run.add_argument("scenario", help="builtin name, or a path to a scenario text file")
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--trace", help="write the event trace (TSV) here; '-' for stdout")
    sub.add_parser("list", help="list builtin scenarios")
    return p


def _load_scenario(name):
    try:
        return sim.get_scenario(name)
    except KeyError:
        pass
    try:
        with open(name) as fh:
            return sim.Scenario.from_text(fh.read())
    except OSError:
        names = ", ".join(s.name for s in sim.builtin_scenarios(forge_attempts=1))
        raise SystemExit(f"unknown scenario {name!r}; builtins: {names}")


def sim_main(argv=None):
    args = _sim_parser().parse_args(argv)
    if args.cmd == "list":
        for sc in sim.builtin_scenarios():
            kind = "adversarial" if sc.adversarial else "honest"
            print(f"{sc.name:<20}{kind:<13}{sc.description}")
        return 0

    sc = _load_scenario(args.scenario)
    result = sim.run_scenario(sc, args.seed)
    if args.trace == "-":
        sys.stdout.write(result.trace_tsv())
    elif args.trace:
        with open(args.trace, "w", newline="\n") as fh:
            fh.write(result.trace_tsv())

    ok_corr, witness = sim.assert_correspondence(result.trace)
    leaks = sim.attacker_acceptances(result.trace)
    out = sys.stderr if args.trace == "-" else sys.stdout
    print(f"{sc.name} seed={args.seed} events={len(result.trace)}", file=out)
    print(f"  expectations: {'match' if result.matches_expectations else 'MISMATCH'}", file=out)
    print(f"  correspondence: {'pass' if ok_corr else 'FAIL at ' + witness.to_tsv()}", file=out)
    print(f"  attacker acceptances: {len(leaks)}", file=out)
    return 0 if result.matches_expectations and ok_corr and not leaks else 1


def _bench_parser():
    p = argparse.ArgumentParser(prog="bench", description="Sign/verify microbenchmarks.")
    sub = p.add_subparsers(dest="cmd", required=True)
    run = sub.add_parser("run")
    run.add_argument("--scheme", default="all", choices=("all",) + bench.SCHEMES)
    run.add_argument("--iters", type=int, default=bench.MIN_ITERS)
    run.add_argument("--t", type=int, default=scheme.DEFAULT_T)
    run.add_argument("--k", type=int, default=scheme.DEFAULT_K)
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--csv", help="also write the CSV table here")
    return p


def bench_main(argv=None):
    p = _bench_parser()
    args = p.parse_args(argv)
    if args.iters < bench.MIN_ITERS:
        p.error(f"--iters must be at least {bench.MIN_ITERS}")
    names = bench.SCHEMES if args.scheme == "all" else (args.scheme,)
    reports = bench.bench_all(names, args.iters, args.t, args.k, args.seed)
    print(bench.emit_table(reports, "text"), end="")
    for r in reports:
        if r.extract_per_sec:
            print(f"extraction: {r.extract_per_sec:,.0f} keys/s "
                  f"(reference figure {bench.REFERENCE_KEYS_PER_SEC:,.0f} keys/s)")
    if {"e2ibs", "hier2"} <= set(names):
        print(f"verify e2ibs/hier2 = {bench.verify_ratio(reports):.3f}")
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            fh.write(bench.emit_table(reports, "csv"))
    bad = [r.scheme for r in reports if not r.correct]
    if bad:
        print(f"correctness samples FAILED for: {', '.join(bad)}", file=sys.stderr)
        return 1
    return 0


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    if argv and argv[0] == "sim":
        return sim_main(argv[1:])
    if argv and argv[0] == "bench":
        return bench_main(argv[1:])
    print("usage: python -m e2ibs {sim,bench} ...", file=sys.stderr)
    return 2


def _entry(fn):
    def run():
        sys.exit(fn())
    return run


sim_entry = _entry(sim_main)
bench_entry = _entry(bench_main)

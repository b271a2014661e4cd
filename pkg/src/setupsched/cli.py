"""Command line entry point: solve, validate, gen and bench.

Exit codes: 0 success, 1 validation failure, 2 malformed input, 3 internal
invariant breach.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from . import generators
from .core import Instance
from .generators import CertifiedInstance
from .io import (MalformedInput, certified_to_dict, fmt, instance_to_dict, parse_rational,
                 read_instance, read_schedule, schedule_to_dict, write_json)
from .schedule import validate
from .search import SearchConfig, solve

OK, INVALID, MALFORMED, INTERNAL = 0, 1, 2, 3


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except MalformedInput as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _plain(entry) -> Instance:
    return entry.instance if isinstance(entry, CertifiedInstance) else entry


def cmd_solve(args) -> int:
    entry = read_instance(args.input)
    inst = _plain(entry)
    res = solve(inst, SearchConfig(epsilon=args.eps, matching=args.matching))
    report = validate(res.schedule, inst, Fraction(4, 3) * res.accepted_T)
    write_json(args.output, schedule_to_dict(res.schedule))
    if args.gantt:
        from .gantt import save_gantt
        save_gantt(res.schedule, args.gantt, None if res.fallback else res.accepted_T)
    line = (f"makespan {fmt(report.makespan)} (~{float(report.makespan):.6g}), "
            f"accepted T {fmt(res.accepted_T)}, lower {fmt(res.lower)}, "
            f"{res.decide_calls} decide calls")
    if isinstance(entry, CertifiedInstance):
        line += f", ratio to opt {float(report.makespan / entry.opt):.6f}"
    print(line, file=sys.stderr)
    if res.fallback:
        print("fallback to the sequential schedule fired", file=sys.stderr)
        return INTERNAL
    if not report.ok:
        for v in report.violations[:10]:
            print(f"internal: {v}", file=sys.stderr)
        return INTERNAL
    return OK


def cmd_validate(args) -> int:
    inst = _plain(read_instance(args.input))
    report = validate(read_schedule(args.schedule), inst, args.limit)
    print(f"makespan {fmt(report.makespan)}; setups per class {list(report.census)}")
    for v in report.violations:
        print(v)
    print("valid" if report.ok else f"{len(report.violations)} violation(s)")
    return OK if report.ok else INVALID


def cmd_gen(args) -> int:
    if args.kind == "packed":
        doc = certified_to_dict(generators.packed(args.m, args.opt, seed=args.seed,
                                                  jobs_per_class=args.jobs_per_class))
    elif args.kind == "single_class":
        if args.sizes:
            sizes = [int(x) for x in args.sizes.split(",")]
            cert = generators.single_class(args.m, args.setup, sizes)
        else:
            cert = generators.random_single_class(args.seed)
        doc = certified_to_dict(cert)
    else:
        inst = generators.random_instance(args.seed, classes=args.classes, jobs=args.jobs,
                                          scale=args.scale, machines=args.machines)
        doc = instance_to_dict(inst)
    write_json(args.output, doc)
    return OK


def cmd_bench(args) -> int:
    from .bench import BenchValidationError, bench, load_corpus, rows_to_json, rows_to_text
    corpus = load_corpus(args.corpus)
    try:
        rows = bench(corpus, args.eps or [Fraction(1, 100)], workers=args.workers)
    except BenchValidationError as exc:
        dump = Path(args.triage or ".") / f"failed_{exc.name}.json"
        dump.write_text(exc.dump)
        print(f"internal: {exc}; instance written to {dump}", file=sys.stderr)
        return INTERNAL
    print(rows_to_text(rows), end="")
    if args.json:
        Path(args.json).write_text(rows_to_json(rows) + "\n")
    return INTERNAL if any(r.fallback for r in rows) else OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="setupsched", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="schedule an instance within 4/3 (1+eps) of optimal")
    p.add_argument("--input", required=True)
    p.add_argument("--eps", type=_rational, default=Fraction(1, 100))
    p.add_argument("--output", default="-", help="schedule file (stdout by default)")
    p.add_argument("--gantt", help="write an SVG chart here")
    p.add_argument("--matching", choices=("greedy", "maximum"), default="greedy")
    p.set_defaults(run=cmd_solve)

    p = sub.add_parser("validate", help="check a schedule against an instance")
    p.add_argument("--input", required=True)
    p.add_argument("--schedule", required=True)
    p.add_argument("--limit", type=_rational)
    p.set_defaults(run=cmd_validate)

    p = sub.add_parser("gen", help="generate an instance")
    p.add_argument("--kind", choices=("packed", "single_class", "random"), required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--m", type=int, default=4, help="machines (packed, single_class)")
    p.add_argument("--opt", type=int, default=12, help="optimum of a packed instance")
    p.add_argument("--jobs-per-class", type=int, default=3)
    p.add_argument("--setup", type=int, default=0, help="setup of a single_class instance")
    p.add_argument("--sizes", help="comma separated job sizes of a single_class instance")
    p.add_argument("--classes", type=int, default=12)
    p.add_argument("--jobs", type=int, default=40)
    p.add_argument("--scale", type=int, default=360)
    p.add_argument("--machines", type=int)
    p.add_argument("--output", default="-")
    p.set_defaults(run=cmd_gen)

    p = sub.add_parser("bench", help="solve every *.json instance in a directory")
    p.add_argument("--corpus", required=True)
    p.add_argument("--eps", type=_rational, action="append")
    p.add_argument("--json", help="also write machine-readable rows here")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--triage", help="directory for instances that fail validation")
    p.set_defaults(run=cmd_bench)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.run(args)
    except (MalformedInput, FileNotFoundError, IsADirectoryError) as exc:
        print(f"malformed input: {exc}", file=sys.stderr)
        return MALFORMED
    except ValueError as exc:
        print(f"malformed input: {exc}", file=sys.stderr)
        return MALFORMED
    except (AssertionError, RuntimeError, ArithmeticError) as exc:
        print(f"internal: {type(exc).__name__}: {exc}", file=sys.stderr)
        return INTERNAL


if __name__ == "__main__":
    sys.exit(main())

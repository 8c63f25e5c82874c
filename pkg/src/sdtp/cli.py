"""Command-line entry point: ``sdtp <command> ...`` or ``python3 -m sdtp``.

Exit status: 0 success, 1 infeasible instance or schedule violations,
2 usage or data errors, 3 solver ran out of time.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import bench
from .export import CpForm, ExportSizeError, export_cp, export_ilp
from .generators import GenConfig, GenerationError, SizingError, generate, negcycle_filter, write_manifest
from .io import InstanceFormatError, read_instance, serialize
from .model import ScheduleKind, Status, stats, validate
from .oracle import CapExceeded, check_schedule, cross_check
from .solvers import LATEST_CAPABLE, SOLVERS

EXIT_OK, EXIT_INFEASIBLE, EXIT_USAGE, EXIT_TIMEOUT = 0, 1, 2, 3


class DataError(Exception):
    """Bad input file or option combination; reported with exit status 2."""


def _load(path):
    try:
        inst = read_instance(path)
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror or exc}") from None
    except InstanceFormatError as exc:
        raise DataError(f"{path}: {exc}") from None
    problems = validate(inst)
    if problems:
        raise DataError(f"{path}: " + "; ".join(map(str, problems[:5])))
    return inst


def _seconds(ms):
    return None if ms is None or ms <= 0 else ms / 1000.0


def cmd_solve(args) -> int:
    inst = _load(args.input)
    kind = ScheduleKind(args.schedule)
    if kind is ScheduleKind.LATEST and args.algorithm not in LATEST_CAPABLE:
        raise DataError(f"--schedule latest is not supported by {args.algorithm}; "
                        f"use one of {', '.join(LATEST_CAPABLE)}")
    out, us = bench.timed_solve(inst, args.algorithm, _seconds(args.time_limit), kind)
    if args.output == "json":
        st = stats(inst)
        doc = {
            "solver": args.algorithm,
            "verdict": out.verdict,
            "schedule": None if out.schedule is None else out.schedule[1:].tolist(),
            "schedule_kind": out.kind.value if out.is_feasible else None,
            "elapsed_us": int(us),
            "stats": {"n": st.n, "m1": st.m1, "K": st.K, "omega": st.omega, "t_d": st.t_d},
        }
        print(json.dumps(doc))
    else:
        print(out.verdict)
        if out.is_feasible:
            print("schedule:", " ".join(map(str, out.schedule[1:].tolist())))
        print(f"elapsed_us: {us}")
    if out.status is Status.TIMED_OUT:
        return EXIT_TIMEOUT
    return EXIT_OK if out.is_feasible else EXIT_INFEASIBLE


def cmd_generate(args) -> int:
    cfg = GenConfig(args.family, args.n, args.m1, args.k, args.seed, td_fraction=args.td)
    try:
        gen = generate(cfg)
        inst = gen.instance
        if args.negcycle:
            inst = negcycle_filter(inst, args.negcycle, args.seed)
    except (SizingError, ValueError) as exc:
        raise DataError(str(exc)) from None
    except GenerationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    entry = gen.manifest_entry(args.out)
    entry["name"] = inst.name
    if args.negcycle:
        entry["negcycle"] = args.negcycle
    comments = [f"{k}={entry[k]}" for k in sorted(entry) if k != "path"]
    text = serialize(inst, comments)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if args.manifest:
        write_manifest([entry], args.manifest)
    return EXIT_OK


def _read_schedule(path, n):
    try:
        vals = [int(t) for t in Path(path).read_text().split()]
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror or exc}") from None
    except ValueError:
        raise DataError(f"{path}: schedule must be whitespace-separated integers") from None
    if len(vals) == n:
        return [0] + vals
    if len(vals) == n + 1:
        return vals
    raise DataError(f"{path}: expected {n} values, got {len(vals)}")


def cmd_verify(args) -> int:
    inst = _load(args.input)
    s = _read_schedule(args.schedule, inst.n)
    bad = check_schedule(inst, s)
    for v in bad:
        print(v)
    print("valid" if not bad else f"{len(bad)} violation(s)")
    return EXIT_OK if not bad else EXIT_INFEASIBLE


def cmd_crosscheck(args) -> int:
    inst = _load(args.input)
    solvers = _solver_list(args.solvers)
    try:
        report = cross_check(inst, solvers, _seconds(args.time_limit), oracle=args.oracle)
    except CapExceeded as exc:
        raise DataError(f"oracle: {exc}") from None
    print(report.text())
    return EXIT_OK if report.ok else EXIT_INFEASIBLE


def _solver_list(text):
    if not text:
        return list(SOLVERS)
    names = [t.strip().lower() for t in text.split(",") if t.strip()]
    unknown = [t for t in names if t not in SOLVERS]
    if unknown:
        raise DataError(f"unknown solver(s): {', '.join(unknown)}")
    return names


def cmd_bench(args) -> int:
    if not Path(args.corpus).is_dir():
        raise DataError(f"{args.corpus} is not a directory")
    solvers = _solver_list(args.solvers)
    limit = _seconds(args.time_limit)
    records = bench.run_bench(args.corpus, solvers, limit, args.reps, isolate=args.isolate)
    if args.out:
        bench.write_records(records, args.out)
    rows = bench.summarize(records, limit)
    if args.summary:
        bench.write_summary(rows, args.summary)
    print(bench.format_summary(rows))
    return EXIT_OK


def cmd_export(args) -> int:
    inst = _load(args.input)
    try:
        if args.format == "lp":
            text = export_ilp(inst)
        else:
            form = CpForm.FULL if args.format == "cp" else CpForm.SIMPLIFIED
            text = export_cp(inst, form, args.gap_cap)
    except ExportSizeError as exc:
        raise DataError(str(exc)) from None
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sdtp", description="Simple disjunctive temporal problem toolkit.")
    p.add_argument("-v", "--verbose", action="store_true", help="log diagnostics to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="decide feasibility and print a schedule")
    s.add_argument("--algorithm", choices=SOLVERS, default="bfdc")
    s.add_argument("--schedule", choices=["earliest", "latest"], default="earliest")
    s.add_argument("--time-limit", type=int, default=2000, metavar="MS", help="0 disables the limit")
    s.add_argument("--input", required=True)
    s.add_argument("--output", choices=["text", "json"], default="text")
    s.set_defaults(func=cmd_solve)

    g = sub.add_parser("generate", help="write a random instance")
    g.add_argument("family", choices=["rand", "grid", "seq", "late"])
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--m1", type=int, required=True)
    g.add_argument("--td", type=float, default=0.8, help="fraction of multi-interval time-points")
    g.add_argument("--k", type=int, default=10)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--negcycle", choices=["nc02", "nc03", "nc04", "nc05"])
    g.add_argument("--out", help="instance file (default stdout)")
    g.add_argument("--manifest", help="write a JSON-lines manifest entry here")
    g.set_defaults(func=cmd_generate)

    v = sub.add_parser("verify", help="check a schedule against an instance")
    v.add_argument("--input", required=True)
    v.add_argument("--schedule", required=True, help="file with n (or n+1, origin first) integers")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("crosscheck", help="run several solvers and compare")
    c.add_argument("--input", required=True)
    c.add_argument("--solvers", help="comma-separated list (default all)")
    c.add_argument("--time-limit", type=int, default=2000, metavar="MS")
    c.add_argument("--oracle", action="store_true", help="also enumerate interval assignments")
    c.set_defaults(func=cmd_crosscheck)

    b = sub.add_parser("bench", help="time solvers over a directory of instances")
    b.add_argument("--corpus", required=True)
    b.add_argument("--solvers", help="comma-separated list (default all)")
    b.add_argument("--reps", type=int, default=bench.DEFAULT_REPETITIONS)
    b.add_argument("--time-limit", type=int, default=int(bench.DEFAULT_TIME_LIMIT * 1000), metavar="MS")
    b.add_argument("--out", help="per-run CSV")
    b.add_argument("--summary", help="summary CSV")
    b.add_argument("--isolate", action="store_true", help="run each solve in a child process")
    b.set_defaults(func=cmd_bench)

    e = sub.add_parser("export-model", help="write an LP or CP model")
    e.add_argument("--format", choices=["lp", "cp", "scp"], required=True)
    e.add_argument("--input", required=True)
    e.add_argument("--out")
    e.add_argument("--gap-cap", type=int, default=10**7, help="max forbidden values for scp")
    e.set_defaults(func=cmd_export)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

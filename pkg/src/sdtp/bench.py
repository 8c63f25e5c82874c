"""Benchmark harness: solver x instance x repetition timing runs and summaries.

Only the solve call is timed (``time.perf_counter_ns``); reading instance
files is excluded.  The time limit is enforced cooperatively by the solvers.
With ``isolate=True`` each run happens in a child process that is killed at
three times the limit, as a safety net for a solver that stops polling.
"""
from __future__ import annotations

import csv
import logging
import math
import multiprocessing as mp
import time
from dataclasses import dataclass
from pathlib import Path

from .io import InstanceFormatError, read_instance
from .model import ScheduleKind, SdtpInstance, Status, validate
from .solvers import solve

log = logging.getLogger(__name__)

DEFAULT_TIME_LIMIT = 2.0
DEFAULT_REPETITIONS = 20
WATCHDOG_FACTOR = 3

RECORD_COLUMNS = ("solver", "instance", "rep", "outcome", "elapsed_us", "timed_out", "iterations")
SUMMARY_COLUMNS = ("Method", "Max. time (ms)", "Avg. time (ms)", "Std. time (ms)", "Total time (s)", "Timeouts (%)")


@dataclass(frozen=True)
class BenchRecord:
    solver: str
    instance: str
    rep: int
    outcome: str
    elapsed_us: int
    timed_out: bool
    iterations: int = -1  # tightening rounds (rult, ult); -1 when not reported


@dataclass(frozen=True)
class SummaryRow:
    solver: str
    runs: int
    max_ms: float
    avg_ms: float
    std_ms: float  # population standard deviation
    total_s: float
    timeouts_pct: float
    avg_ms_solved: float  # mean over runs that finished, nan if none did

    def table_row(self) -> tuple:
        return (self.solver, round(self.max_ms, 3), round(self.avg_ms, 3), round(self.std_ms, 3),
                round(self.total_s, 6), round(self.timeouts_pct, 2))


def load_corpus(source) -> list[SdtpInstance]:
    """Instances from a directory of ``*.sdtp`` files, a list of paths, or instances.

    Unreadable or invalid files are skipped with a logged diagnostic.
    """
    if isinstance(source, (str, Path)) and Path(source).is_dir():
        source = sorted(Path(source).glob("*.sdtp"))
    out = []
    for item in source:
        if isinstance(item, SdtpInstance):
            out.append(item)
            continue
        try:
            inst = read_instance(item)
        except (OSError, InstanceFormatError) as exc:
            log.warning("skipping %s: %s", item, exc)
            continue
        problems = validate(inst)
        if problems:
            log.warning("skipping %s: %s", item, problems[0])
            continue
        out.append(inst)
    return out


def timed_solve(instance: SdtpInstance, solver: str, time_limit: float | None,
                kind: ScheduleKind = ScheduleKind.EARLIEST):
    t0 = time.perf_counter_ns()
    out = solve(instance, solver, kind, time_limit)
    return out, (time.perf_counter_ns() - t0) // 1000


def _child(conn, instance, solver, time_limit):
    out, us = timed_solve(instance, solver, time_limit)
    conn.send((out.verdict, us, out.status is Status.TIMED_OUT, out.info.get("iterations", -1)))
    conn.close()


def _isolated(instance, solver, time_limit):
    ctx = mp.get_context("fork")
    parent, child = ctx.Pipe(duplex=False)
    proc = ctx.Process(target=_child, args=(child, instance, solver, time_limit), daemon=True)
    t0 = time.perf_counter_ns()
    proc.start()
    child.close()
    wait = None if time_limit is None else WATCHDOG_FACTOR * time_limit
    if parent.poll(wait):
        result = parent.recv()
        proc.join()
        return result
    proc.kill()
    proc.join()
    return "timed-out", (time.perf_counter_ns() - t0) // 1000, True, -1


_WARMUP = SdtpInstance.from_lists(2, [(2, 1, 5)], {1: [(0, 2), (8, 10)], 2: [(9, 12)]}, name="warmup")


def warm_up(solvers) -> None:
    """Solve a tiny instance once per solver so JIT loading stays out of the timings."""
    for name in solvers:
        solve(_WARMUP, name)


def run_bench(corpus, solvers, time_limit: float | None = DEFAULT_TIME_LIMIT,
              repetitions: int = DEFAULT_REPETITIONS, isolate: bool = False, sink=None) -> list[BenchRecord]:
    """One record per (solver, instance, repetition); ``sink`` sees each as it lands."""
    instances = load_corpus(corpus)
    warm_up(solvers)
    records = []
    for idx, inst in enumerate(instances):
        name = inst.name or f"instance{idx}"
        for solver in solvers:
            for rep in range(repetitions):
                if isolate:
                    verdict, us, to, it = _isolated(inst, solver, time_limit)
                else:
                    out, us = timed_solve(inst, solver, time_limit)
                    verdict, to = out.verdict, out.status is Status.TIMED_OUT
                    it = out.info.get("iterations", -1)
                rec = BenchRecord(solver, name, rep, verdict, int(us), bool(to), int(it))
                records.append(rec)
                if sink is not None:
                    sink(rec)
    return records


def _pstd(xs: list[float]) -> float:
    m = sum(xs) / len(xs)
    return math.sqrt(sum((x - m) ** 2 for x in xs) / len(xs))


def summarize(records, time_limit: float | None = DEFAULT_TIME_LIMIT) -> list[SummaryRow]:
    """Per-solver aggregates; timed-out runs count at the limit value."""
    by_solver: dict[str, list[BenchRecord]] = {}
    for r in records:
        by_solver.setdefault(r.solver, []).append(r)
    rows = []
    for solver, recs in by_solver.items():
        cap_ms = None if time_limit is None else time_limit * 1e3
        ms = [cap_ms if (r.timed_out and cap_ms is not None) else r.elapsed_us / 1e3 for r in recs]
        solved = [r.elapsed_us / 1e3 for r in recs if not r.timed_out]
        rows.append(SummaryRow(
            solver=solver,
            runs=len(recs),
            max_ms=max(ms),
            avg_ms=sum(ms) / len(ms),
            std_ms=_pstd(ms),
            total_s=sum(ms) / 1e3,
            timeouts_pct=100.0 * sum(r.timed_out for r in recs) / len(recs),
            avg_ms_solved=sum(solved) / len(solved) if solved else math.nan,
        ))
    return rows


def format_summary(rows) -> str:
    head = f"{'Method':<8}{'Max(ms)':>12}{'Avg(ms)':>12}{'Std(ms)':>12}{'Total(s)':>12}{'TO(%)':>8}{'Avg solved':>12}"
    lines = [head]
    for r in rows:
        lines.append(f"{r.solver:<8}{r.max_ms:>12.3f}{r.avg_ms:>12.3f}{r.std_ms:>12.3f}{r.total_s:>12.3f}"
                     f"{r.timeouts_pct:>8.2f}{r.avg_ms_solved:>12.3f}")
    return "\n".join(lines)


def write_records(records, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(RECORD_COLUMNS)
        for r in records:
            w.writerow([r.solver, r.instance, r.rep, r.outcome, r.elapsed_us, int(r.timed_out), r.iterations])


def read_records(path) -> list[BenchRecord]:
    with open(path, newline="") as fh:
        return [BenchRecord(row["solver"], row["instance"], int(row["rep"]), row["outcome"],
                            int(row["elapsed_us"]), row["timed_out"] in ("1", "True", "true"),
                            int(row.get("iterations") or -1))
                for row in csv.DictReader(fh)]


def write_summary(rows, path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write("# std: population standard deviation; timed-out runs count at the time limit\n")
        w = csv.writer(fh)
        w.writerow(SUMMARY_COLUMNS)
        for r in rows:
            w.writerow(r.table_row())


# ---------------------------------------------------------------- plot data

SUBSET_AXES = {
    "nodes": "n",
    "density": "density",
    "numdisj": "k",
    "vardisj": "td_fraction",
    "negcycle": "n",
    "vl": "row",
}
PLOT_COLUMNS = ("subset", "group", "x", "solver", "runs", "avg_us", "avg_us_solved", "timeouts")


def _x_value(meta: dict, axis: str):
    if axis == "density":
        n = meta["n"]
        return round(100.0 * meta["m1"] / (n * (n - 1)), 3)
    return meta[axis]


def _axis_key(x):
    return (0, x, "") if isinstance(x, (int, float)) else (1, 0, str(x))


def plot_data(records, manifest: dict[str, dict], subset: str) -> list[dict]:
    """Averages per (family or class, x value, solver) for one experiment subset.

    ``manifest`` maps instance names to their generation entries; instances
    missing from it are ignored.  Both averages are reported: with timeouts
    counted at their measured time and over finished runs only.
    """
    axis = SUBSET_AXES[subset]
    cells: dict[tuple, list[BenchRecord]] = {}
    for r in records:
        meta = manifest.get(r.instance)
        if meta is None:
            continue
        group = meta.get("negcycle") or meta.get("family", "")
        cells.setdefault((group, _x_value(meta, axis), r.solver), []).append(r)
    rows = []
    for (group, x, solver), recs in sorted(cells.items(), key=lambda kv: (kv[0][0], _axis_key(kv[0][1]), kv[0][2])):
        solved = [r.elapsed_us for r in recs if not r.timed_out]
        rows.append({
            "subset": subset,
            "group": group,
            "x": x,
            "solver": solver,
            "runs": len(recs),
            "avg_us": sum(r.elapsed_us for r in recs) / len(recs),
            "avg_us_solved": sum(solved) / len(solved) if solved else "",
            "timeouts": sum(r.timed_out for r in recs),
        })
    return rows


def write_plot_data(rows, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=PLOT_COLUMNS)
        w.writeheader()
        w.writerows(rows)


__all__ = [
    "BenchRecord",
    "SummaryRow",
    "format_summary",
    "load_corpus",
    "plot_data",
    "read_records",
    "run_bench",
    "summarize",
    "timed_solve",
    "warm_up",
    "write_plot_data",
    "write_records",
    "write_summary",
]

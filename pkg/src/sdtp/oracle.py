"""Ground truth: schedule checking, exhaustive solving and solver cross-checks.

The brute-force solver deliberately shares no code with the production
kernels.  It fixes one interval per time-point, which turns the instance
into a plain STP, and solves that with a textbook round-based
Bellman-Ford over Python lists.
"""
from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field

from .model import Cause, ScheduleKind, SdtpInstance, SolveOutcome, Status


@dataclass(frozen=True)
class ScheduleViolation:
    kind: str  # "type1" | "type2"
    detail: tuple
    message: str

    def __str__(self):
        return self.message


def check_schedule(instance: SdtpInstance, s) -> list[ScheduleViolation]:
    """All violated constraints of ``s`` (length ``n + 1``, ``s[0] == 0``)."""
    s = [int(v) for v in s]
    if len(s) != instance.n + 1:
        raise ValueError(f"schedule has {len(s)} entries, expected {instance.n + 1}")
    out = []
    if s[0] != 0:
        out.append(ScheduleViolation("origin", (0, s[0]), f"origin fixed at 0, got {s[0]}"))
    for k, (i, j, w) in enumerate(instance.constraints()):
        if s[i] - s[j] > w:
            out.append(ScheduleViolation(
                "type1", (k, i, j, w), f"constraint {k + 1}: s_{i} - s_{j} = {s[i] - s[j]} > {w}"))
    for i in range(1, instance.n + 1):
        if not any(l <= s[i] <= u for l, u in instance.domains(i)):
            out.append(ScheduleViolation("type2", (i, s[i]), f"time-point {i}: {s[i]} lies in no interval"))
    return out


def stp_earliest(n: int, arcs, lower, upper):
    """Earliest solution of ``s_i - s_j <= w`` with ``lower <= s <= upper``.

    Plain round-based Bellman-Ford on ``tau = -s``; ``None`` if inconsistent.
    Index 0 is the origin in ``lower``/``upper`` and is ignored.
    """
    edges = [(i, j, w) for i, j, w in arcs]
    for i in range(1, n + 1):
        edges.append((0, i, -lower[i]))
        edges.append((i, 0, upper[i]))
    tau = [math.inf] * (n + 1)
    tau[0] = 0
    for _ in range(n + 1):
        changed = False
        for u, v, w in edges:
            if tau[u] + w < tau[v]:
                tau[v] = tau[u] + w
                changed = True
        if not changed:
            return [0] + [-t for t in tau[1:]]
    return None


def stp_latest(n: int, arcs, lower, upper):
    """Latest solution, via the earliest solution of the mirrored problem."""
    mirrored = [(j, i, w) for i, j, w in arcs]
    neg_lo = [-u for u in upper]
    neg_hi = [-l for l in lower]
    s = stp_earliest(n, mirrored, neg_lo, neg_hi)
    return None if s is None else [-v for v in s]


class CapExceeded(ValueError):
    pass


@dataclass
class OracleResult:
    outcome: SolveOutcome
    earliest: list | None
    latest: list | None
    feasible_assignments: list = field(default_factory=list)
    combinations: int = 0


def brute_force_solve(instance: SdtpInstance, cap: int = 10**6) -> OracleResult:
    """Enumerate every interval assignment and solve the resulting STPs."""
    n = instance.n
    doms = [instance.domains(i) for i in range(1, n + 1)]
    combos = math.prod(len(d) for d in doms)
    if combos > cap:
        raise CapExceeded(f"{combos} assignments exceed the cap of {cap}")
    arcs = instance.constraints()
    earliest = latest = None
    feasible = []
    # mixed-radix counter, last time-point fastest
    for choice in itertools.product(*(range(len(d)) for d in doms)):
        lower = [0] + [doms[i][c][0] for i, c in enumerate(choice)]
        upper = [0] + [doms[i][c][1] for i, c in enumerate(choice)]
        s = stp_earliest(n, arcs, lower, upper)
        if s is None:
            continue
        t = stp_latest(n, arcs, lower, upper)
        feasible.append((choice, s))
        earliest = s if earliest is None else [min(a, b) for a, b in zip(earliest, s)]
        latest = t if latest is None else [max(a, b) for a, b in zip(latest, t)]
    if earliest is None:
        # every fixed assignment is an inconsistent STP
        outcome = SolveOutcome.infeasible(Cause.NEGATIVE_CYCLE)
    else:
        outcome = SolveOutcome.feasible(feasible[0][1], ScheduleKind.UNSPECIFIED)
    return OracleResult(outcome, earliest, latest, feasible, combos)


EARLIEST_SOLVERS = ("ult", "cra", "rult", "bfdc")


@dataclass
class SolverRow:
    solver: str
    verdict: str
    schedule_ok: bool | None
    elapsed_us: int
    schedule: list | None = None

    def line(self) -> str:
        ok = "-" if self.schedule_ok is None else ("ok" if self.schedule_ok else "FAIL")
        return f"{self.solver},{self.verdict},{ok},{self.elapsed_us}"


@dataclass
class CrossCheckReport:
    rows: list
    verdicts_agree: bool
    earliest_agree: bool
    schedules_valid: bool
    oracle_verdict: str | None = None
    oracle_agrees: bool | None = None

    @property
    def ok(self) -> bool:
        return self.verdicts_agree and self.earliest_agree and self.schedules_valid and self.oracle_agrees is not False

    def text(self) -> str:
        lines = ["solver,verdict,schedule,elapsed_us"] + [r.line() for r in self.rows]
        lines.append(f"verdicts agree: {self.verdicts_agree}")
        lines.append(f"earliest schedules agree: {self.earliest_agree}")
        lines.append(f"all schedules valid: {self.schedules_valid}")
        if self.oracle_verdict is not None:
            lines.append(f"oracle: {self.oracle_verdict} (agrees: {self.oracle_agrees})")
        return "\n".join(lines)


def _coarse(outcome: SolveOutcome) -> str:
    return outcome.status.value


def cross_check(instance: SdtpInstance, solvers=None, budget: float | None = None, oracle: bool = False,
                oracle_cap: int = 10**6) -> CrossCheckReport:
    """Run several solvers on one instance and compare their answers."""
    from .solvers import SOLVERS, solve

    solvers = list(solvers or SOLVERS)
    rows = []
    outcomes = {}
    for name in solvers:
        t0 = time.perf_counter()
        out = solve(instance, name, ScheduleKind.EARLIEST, budget)
        us = int((time.perf_counter() - t0) * 1e6)
        ok = None
        if out.is_feasible:
            ok = not check_schedule(instance, out.schedule)
        outcomes[name] = out
        rows.append(SolverRow(name, out.verdict, ok, us, None if out.schedule is None else out.schedule.tolist()))
    decided = [o for o in outcomes.values() if o.status is not Status.TIMED_OUT]
    verdicts_agree = len({_coarse(o) for o in decided}) <= 1
    earliest = [tuple(outcomes[s].schedule.tolist()) for s in EARLIEST_SOLVERS
                if s in outcomes and outcomes[s].is_feasible]
    earliest_agree = len(set(earliest)) <= 1
    schedules_valid = all(r.schedule_ok is not False for r in rows)
    report = CrossCheckReport(rows, verdicts_agree, earliest_agree, schedules_valid)
    if oracle:
        res = brute_force_solve(instance, oracle_cap)
        report.oracle_verdict = _coarse(res.outcome)
        report.oracle_agrees = all(_coarse(o) == report.oracle_verdict for o in decided)
        if res.earliest is not None:
            report.oracle_agrees &= all(tuple(res.earliest) == e for e in earliest)
    return report


__all__ = [
    "CapExceeded",
    "CrossCheckReport",
    "OracleResult",
    "ScheduleViolation",
    "brute_force_solve",
    "check_schedule",
    "cross_check",
    "stp_earliest",
    "stp_latest",
]

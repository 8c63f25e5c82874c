"""Comin-Rizzi algorithm.

Phase one solves the STP given by the global bounds.  Its earliest
schedule ``s0`` is then repaired one time-point at a time: a point outside
its intervals jumps to the next interval start and the jump is pushed to
every point that depends on it, using distance rows computed lazily by
Dijkstra on the constraint graph reweighted with ``s0`` (all weights become
non-negative).

A constraint ``s_i - s_j <= w`` is the arc ``i -> j``; with ``d`` the
shortest-path distance over such arcs, every schedule satisfies
``s_j >= s_i - d(i, j)``.
"""
from __future__ import annotations

import numpy as np
from numba import njit

from .._deadline import as_deadline
from ..graph import NEG_CYCLE, RUNNING, DistanceGraph, _BfScratch, _dijkstra_into, bellman_ford_into, build_graph
from ..model import INF, Cause, ScheduleKind, SdtpInstance, SolveOutcome

BOTTOM = None


@njit(cache=True)
def _in_domain(v, a, b, dom_lo, dom_hi):
    # last interval starting at or below v
    lo_i = a
    hi_i = b
    while lo_i < hi_i:
        mid = (lo_i + hi_i) // 2
        if dom_lo[mid] <= v:
            lo_i = mid + 1
        else:
            hi_i = mid
    return lo_i > a and v <= dom_hi[lo_i - 1]


@njit(cache=True)
def _lambda(v, a, b, dom_lo):
    """Index of the first interval with ``v < l``, or -1."""
    lo_i = a
    hi_i = b
    while lo_i < hi_i:
        mid = (lo_i + hi_i) // 2
        if dom_lo[mid] <= v:
            lo_i = mid + 1
        else:
            hi_i = mid
    return lo_i if lo_i < b else -1


def lambda_next(si: int, intervals) -> int | None:
    """Lower bound of the first interval starting strictly above ``si``."""
    for l, _ in intervals:
        if si < l:
            return l
    return BOTTOM


@njit(cache=True)
def _propagate(row, s0, s, i, lam, dom_ptr, dom_lo, dom_hi, in_f, queue, qs):
    cap = queue.shape[0]
    shift = s0[i]
    for j in range(1, row.shape[0]):
        d = row[j]
        if d == INF:
            continue
        need = lam - (d - s0[j] + shift)
        if need > s[j]:
            s[j] = need
            if not in_f[j] and not _in_domain(need, dom_ptr[j], dom_ptr[j + 1], dom_lo, dom_hi):
                in_f[j] = True
                t = qs[0] + qs[1]
                if t >= cap:
                    t -= cap
                queue[t] = j
                qs[1] += 1


@njit(cache=True)
def _seed_queue(s, dom_ptr, dom_lo, dom_hi, in_f, queue, qs):
    for i in range(1, s.shape[0]):
        if not _in_domain(s[i], dom_ptr[i], dom_ptr[i + 1], dom_lo, dom_hi):
            in_f[i] = True
            queue[qs[1]] = i
            qs[1] += 1


class CraState:
    """Run-local state: schedules, worklist and the lazily filled rows."""

    def __init__(self, instance: SdtpInstance, s0: np.ndarray):
        n = instance.n
        self.instance = instance
        self.s0 = s0
        self.s = s0.copy()
        self.in_f = np.zeros(n + 1, dtype=np.bool_)
        self.queue = np.empty(n + 1, dtype=np.int64)
        self.qs = np.zeros(2, dtype=np.int64)
        i, j = instance.c1_i, instance.c1_j
        w = instance.c1_w + s0[j] - s0[i]
        assert len(w) == 0 or w.min() >= 0, "reweighted constraint graph has a negative arc"
        self.graph, _ = DistanceGraph.from_arcs(n + 1, i, j, w)
        self.rows: dict[int, np.ndarray] = {}
        self._heap = np.empty(n + 1, dtype=np.int64)
        self._pos = np.empty(n + 1, dtype=np.int64)
        self.infeasible = False
        _seed_queue(self.s, instance.dom_ptr, instance.dom_lo, instance.dom_hi, self.in_f, self.queue, self.qs)

    def row(self, i: int) -> np.ndarray:
        r = self.rows.get(i)
        if r is None:
            r = np.empty(self.instance.n + 1, dtype=np.int64)
            g = self.graph
            _dijkstra_into(g.head, g.target, g.weight, i, r, self._heap, self._pos)
            self.rows[i] = r
        return r

    def pop(self) -> int | None:
        while self.qs[1] > 0:
            i = int(self.queue[self.qs[0]])
            self.qs[0] = (self.qs[0] + 1) % len(self.queue)
            self.qs[1] -= 1
            self.in_f[i] = False
            inst = self.instance
            if not _in_domain(self.s[i], inst.dom_ptr[i], inst.dom_ptr[i + 1], inst.dom_lo, inst.dom_hi):
                return i
        return None


def update_assignments(state: CraState, i: int, row: np.ndarray) -> None:
    """Move ``s_i`` to the next interval start and push the shift downstream."""
    inst = state.instance
    c = _lambda(state.s[i], inst.dom_ptr[i], inst.dom_ptr[i + 1], inst.dom_lo)
    if c < 0:
        state.infeasible = True
        state.qs[1] = 0
        return
    _propagate(row, state.s0, state.s, i, inst.dom_lo[c], inst.dom_ptr, inst.dom_lo, inst.dom_hi,
               state.in_f, state.queue, state.qs)


def solve_cra(instance: SdtpInstance, kind: ScheduleKind = ScheduleKind.EARLIEST, budget=None) -> SolveOutcome:
    if kind is ScheduleKind.LATEST:
        raise ValueError("cra computes earliest schedules only")
    deadline = as_deadline(budget)
    g = build_graph(instance)
    scratch = _BfScratch(g.node_count)
    st = bellman_ford_into(g, 0, scratch, deadline)
    if st == RUNNING:
        return SolveOutcome.timed_out()
    if st == NEG_CYCLE:
        return SolveOutcome.infeasible(Cause.NEGATIVE_CYCLE, rows=0, pops=0)
    state = CraState(instance, -scratch.tau)
    pops = 0
    while True:
        i = state.pop()
        if i is None:
            break
        pops += 1
        update_assignments(state, i, state.row(i))
        if state.infeasible:
            return SolveOutcome.infeasible(Cause.DOMAIN_EXHAUSTED, rows=len(state.rows), pops=pops)
        if deadline.expired():
            return SolveOutcome.timed_out(rows=len(state.rows), pops=pops)
    return SolveOutcome.feasible(state.s, ScheduleKind.EARLIEST, rows=len(state.rows), pops=pops)

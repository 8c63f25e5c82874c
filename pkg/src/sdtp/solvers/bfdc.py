"""Bellman-Ford with Domain Check.

A FIFO label-correcting pass over the direct graph in which every dequeued
time-point first has its tentative value moved into the earliest interval
that can still hold it.  Domain indices only move forward, so the search
is backtrack-free and the result is the earliest feasible schedule.  The
latest schedule is obtained symmetrically on the reverse graph with
intervals scanned from the top.
"""
from __future__ import annotations

import numpy as np
from numba import njit

from .._deadline import as_deadline
from ..graph import DONE, NEG_CYCLE, RUNNING, STEP_CHUNK, Direction, build_graph
from ..model import INF, Cause, ScheduleKind, SdtpInstance, SolveOutcome

EXHAUSTED = 3


@njit(cache=True)
def domain_check(i, tau, pi, z, dom_ptr, dom_lo, dom_hi):
    """Advance ``z[i]`` until the interval can hold ``s_i = -tau[i]``.

    Returns False when no interval can (the run is infeasible).
    """
    s = -tau[i]
    c = z[i]
    if s <= dom_hi[c]:
        return True
    last = dom_ptr[i + 1] - 1
    while c < last:
        c += 1
        if s <= dom_hi[c]:
            if -dom_lo[c] < tau[i]:
                tau[i] = -dom_lo[c]
            if tau[i] == -dom_lo[c]:
                pi[i] = 1
            break
    z[i] = c
    return s <= dom_hi[last]


@njit(cache=True)
def domain_check_latest(i, tau, pi, z, dom_ptr, dom_lo, dom_hi):
    """Mirror of :func:`domain_check` for ``s_i = tau[i]`` scanning downwards."""
    s = tau[i]
    c = z[i]
    if s >= dom_lo[c]:
        return True
    first = dom_ptr[i]
    while c > first:
        c -= 1
        if s >= dom_lo[c]:
            if dom_hi[c] < tau[i]:
                tau[i] = dom_hi[c]
            if tau[i] == dom_hi[c]:
                pi[i] = 1
            break
    z[i] = c
    return s >= dom_lo[first]


@njit(cache=True)
def _bfdc_run(head, target, weight, dom_ptr, dom_lo, dom_hi, tau, pi, z, inq, queue, qs,
              limit, latest, max_steps, counters):
    cap = queue.shape[0]
    qh = qs[0]
    qn = qs[1]
    steps = 0
    status = DONE
    while qn > 0:
        if steps >= max_steps:
            status = RUNNING
            break
        steps += 1
        u = queue[qh]
        qh += 1
        if qh == cap:
            qh = 0
        qn -= 1
        inq[u] = False
        if u != 0:
            if latest:
                ok = domain_check_latest(u, tau, pi, z, dom_ptr, dom_lo, dom_hi)
            else:
                ok = domain_check(u, tau, pi, z, dom_ptr, dom_lo, dom_hi)
            if not ok:
                status = EXHAUSTED
                break
        du = tau[u]
        counters[0] += head[u + 1] - head[u]
        for k in range(head[u], head[u + 1]):
            v = target[k]
            nd = du + weight[k]
            if nd < tau[v]:
                tau[v] = nd
                pi[v] = pi[u] + 1
                if pi[v] >= limit or v == 0:
                    qs[0] = qh
                    qs[1] = qn
                    return NEG_CYCLE
                if not inq[v]:
                    inq[v] = True
                    t = qh + qn
                    if t >= cap:
                        t -= cap
                    queue[t] = v
                    qn += 1
    qs[0] = qh
    qs[1] = qn
    return status


def solve_bfdc(instance: SdtpInstance, kind: ScheduleKind = ScheduleKind.EARLIEST, budget=None,
               graph=None) -> SolveOutcome:
    """Earliest (or latest) feasible schedule, or a proof of infeasibility.

    ``graph`` may pass a prebuilt distance graph of the matching direction.
    """
    deadline = as_deadline(budget)
    latest = kind is ScheduleKind.LATEST
    direction = Direction.REVERSE if latest else Direction.DIRECT
    g = graph if graph is not None else build_graph(instance, direction)
    assert g.direction is direction
    nc = g.node_count
    tau = np.full(nc, INF, dtype=np.int64)
    pi = np.zeros(nc, dtype=np.int64)
    z = (instance.dom_ptr[1:] - 1 if latest else instance.dom_ptr[:-1]).copy()
    inq = np.zeros(nc, dtype=np.bool_)
    queue = np.empty(nc, dtype=np.int64)
    qs = np.array([0, 1], dtype=np.int64)
    counters = np.zeros(1, dtype=np.int64)
    tau[0] = 0
    queue[0] = 0
    inq[0] = True
    # arc-counter threshold |V| = |T| + 1 (origin included)
    limit = nc
    while True:
        st = _bfdc_run(g.head, g.target, g.weight, instance.dom_ptr, instance.dom_lo, instance.dom_hi,
                       tau, pi, z, inq, queue, qs, limit, latest, STEP_CHUNK, counters)
        if st != RUNNING:
            break
        if deadline.expired():
            return SolveOutcome.timed_out(relaxations=int(counters[0]))
    info = {"relaxations": int(counters[0])}
    if st == NEG_CYCLE:
        return SolveOutcome.infeasible(Cause.NEGATIVE_CYCLE, **info)
    if st == EXHAUSTED:
        return SolveOutcome.infeasible(Cause.DOMAIN_EXHAUSTED, **info)
    s = tau if latest else -tau
    return SolveOutcome.feasible(s, kind, **info)

"""Upper-Lower Tightening over pairwise boundary sets.

Every related pair of nodes carries an interval list bounding ``s_b - s_a``:
the origin pairs ``(0, i)`` start from the time-point's domains, the other
pairs from the (folded) difference constraints.  Each iteration loads the
outer bounds into a dense distance matrix, closes it with Floyd-Warshall
and clips every list to the window the matrix allows.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .._deadline import as_deadline
from ..graph import DistanceGraph, floyd_warshall, potentials
from ..model import INF, Cause, ScheduleKind, SdtpInstance, SolveOutcome
from .rult import BoundarySet, intersect_boundaries

NEG_INF = -INF


@dataclass
class PairBoundaryTable:
    origin: BoundarySet  # pairs (0, i): bounds on s_i
    a: np.ndarray  # pairs (a, b), a < b: bounds on s_b - s_a
    b: np.ndarray
    lo: np.ndarray  # NEG_INF when unbounded
    hi: np.ndarray  # INF when unbounded

    @classmethod
    def from_instance(cls, instance: SdtpInstance) -> "PairBoundaryTable":
        i, j, w = instance.c1_i, instance.c1_j, instance.c1_w
        a = np.minimum(i, j)
        b = np.maximum(i, j)
        keys, inv = np.unique(a * (instance.n + 1) + b, return_inverse=True)
        hi = np.full(len(keys), INF, dtype=np.int64)
        lo = np.full(len(keys), NEG_INF, dtype=np.int64)
        up = i > j  # s_b - s_a <= w
        np.minimum.at(hi, inv[up], w[up])
        np.maximum.at(lo, inv[~up], -w[~up])
        return cls(BoundarySet.from_instance(instance), keys // (instance.n + 1), keys % (instance.n + 1), lo, hi)


def load_matrix(table: PairBoundaryTable, delta: np.ndarray) -> None:
    """Write the current outer bounds of every pair into ``delta``."""
    o = table.origin
    delta[0, 1:] = o.upper[1:]
    delta[1:, 0] = -o.lower[1:]
    delta[table.a, table.b] = table.hi
    delta[table.b, table.a] = np.where(table.lo == NEG_INF, INF, -table.lo)


def sparse_graph(table: PairBoundaryTable) -> DistanceGraph:
    """The finite entries of ``load_matrix`` as an arc list."""
    o = table.origin
    n = len(o.upper)
    idx = np.arange(1, n)
    fwd = table.hi != INF
    back = table.lo != NEG_INF
    src = np.concatenate([np.zeros(n - 1, np.int64), idx, table.a[fwd], table.b[back]])
    dst = np.concatenate([idx, np.zeros(n - 1, np.int64), table.b[fwd], table.a[back]])
    w = np.concatenate([o.upper[1:], -o.lower[1:], table.hi[fwd], -table.lo[back]])
    return DistanceGraph.from_arcs(n, src, dst, w)[0]


def tighten_iteration(table: PairBoundaryTable, delta: np.ndarray, instance: SdtpInstance, deadline=None):
    """One refresh / close / intersect round.

    Returns ``(changed, cause)`` where ``cause`` is None while the table is
    still feasible.  Raises ``TimeoutError`` if the closure runs out of time.
    """
    # a sparse check finds the same cycle far sooner than the dense closure
    if potentials(sparse_graph(table), deadline) is None:
        return False, Cause.NEGATIVE_CYCLE
    load_matrix(table, delta)
    if floyd_warshall(delta, deadline):
        return False, Cause.NEGATIVE_CYCLE
    # origin arcs are always present, so both window sides are finite
    changed, ok = intersect_boundaries(table.origin, instance, -delta[:, 0], delta[0])
    if not ok:
        return changed, Cause.EMPTY_BOUND
    new_hi = np.minimum(table.hi, delta[table.a, table.b])
    back = delta[table.b, table.a]
    new_lo = np.maximum(table.lo, np.where(back == INF, NEG_INF, -back))
    if (new_lo > new_hi).any():
        return changed, Cause.EMPTY_BOUND
    changed = changed or bool((new_hi != table.hi).any() or (new_lo != table.lo).any())
    table.hi, table.lo = new_hi, new_lo
    return changed, None


def solve_ult(instance: SdtpInstance, kind: ScheduleKind = ScheduleKind.EARLIEST, budget=None) -> SolveOutcome:
    deadline = as_deadline(budget)
    table = PairBoundaryTable.from_instance(instance)
    nc = instance.n + 1
    delta = np.full((nc, nc), INF, dtype=np.int64)
    np.fill_diagonal(delta, 0)
    iterations = 0
    changed = True
    try:
        while changed:
            iterations += 1
            changed, cause = tighten_iteration(table, delta, instance, deadline)
            if cause is not None:
                return SolveOutcome.infeasible(cause, iterations=iterations)
            if deadline.expired():
                return SolveOutcome.timed_out(iterations=iterations)
    except TimeoutError:
        return SolveOutcome.timed_out(iterations=iterations)
    if kind is ScheduleKind.LATEST:
        return SolveOutcome.feasible(table.origin.upper, kind, iterations=iterations)
    return SolveOutcome.feasible(table.origin.lower, ScheduleKind.EARLIEST, iterations=iterations)

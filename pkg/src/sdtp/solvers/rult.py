"""Reduced Upper-Lower Tightening.

Alternates an earliest pass on the direct graph and a latest pass on the
reverse graph, each with the current per-time-point bounds installed on the
origin arcs, and clips every interval list to the window the two passes
allow.  Bounds only shrink, so the loop reaches a fixpoint; the schedule is
then read off the surviving lower (or upper) bounds.

The boundary lists are never copied: each one is an index range into the
instance's interval arrays plus the clipped outer bounds.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .._deadline import as_deadline
from ..graph import NEG_CYCLE, RUNNING, Direction, _BfScratch, bellman_ford_into, build_graph, update_alpha_arcs
from ..model import Cause, ScheduleKind, SdtpInstance, SolveOutcome


@dataclass
class BoundarySet:
    first: np.ndarray  # index of the lowest surviving interval
    last: np.ndarray  # index of the highest surviving interval
    lower: np.ndarray  # L(B_i), clipped
    upper: np.ndarray  # U(B_i), clipped

    @classmethod
    def from_instance(cls, instance: SdtpInstance) -> "BoundarySet":
        return cls(
            instance.dom_ptr[:-1].copy(),
            instance.dom_ptr[1:] - 1,
            instance.lower_bounds(),
            instance.upper_bounds(),
        )

    def intervals(self, instance: SdtpInstance, i: int) -> list[tuple[int, int]]:
        f, l = int(self.first[i]), int(self.last[i])
        if f > l:
            return []
        out = list(zip(instance.dom_lo[f : l + 1].tolist(), instance.dom_hi[f : l + 1].tolist()))
        out[0] = (int(self.lower[i]), out[0][1])
        out[-1] = (out[-1][0], int(self.upper[i]))
        return out


@njit(cache=True)
def _intersect(first, last, lower, upper, dom_lo, dom_hi, wlo, whi):
    changed = False
    for i in range(1, first.shape[0]):
        f = first[i]
        l = last[i]
        nl = lower[i]
        nu = upper[i]
        lo_w = wlo[i]
        hi_w = whi[i]
        if lo_w > nl:
            while f <= l and dom_hi[f] < lo_w:
                f += 1
            if f <= l:
                nl = max(dom_lo[f], lo_w)
        if hi_w < nu:
            while l >= f and dom_lo[l] > hi_w:
                l -= 1
            if l >= f:
                nu = min(dom_hi[l], hi_w)
        if f > l or nl > nu:
            first[i] = f
            last[i] = l
            return changed, False
        if nl != lower[i] or nu != upper[i]:
            changed = True
        first[i] = f
        last[i] = l
        lower[i] = nl
        upper[i] = nu
    return changed, True


def intersect_boundaries(b: BoundarySet, instance: SdtpInstance, lo_window, hi_window) -> tuple[bool, bool]:
    """Clip every boundary list to ``[lo_window_i, hi_window_i]``.

    Returns ``(changed, feasible)``; ``feasible`` is False as soon as some
    list empties.
    """
    lo_window = np.asarray(lo_window, dtype=np.int64)
    hi_window = np.asarray(hi_window, dtype=np.int64)
    return _intersect(b.first, b.last, b.lower, b.upper, instance.dom_lo, instance.dom_hi, lo_window, hi_window)


def solve_rult(instance: SdtpInstance, kind: ScheduleKind = ScheduleKind.EARLIEST, budget=None) -> SolveOutcome:
    deadline = as_deadline(budget)
    b = BoundarySet.from_instance(instance)
    gd = build_graph(instance, Direction.DIRECT)
    gr = build_graph(instance, Direction.REVERSE)
    sd = _BfScratch(gd.node_count)
    sr = _BfScratch(gr.node_count)
    window_lo = np.empty(gd.node_count, dtype=np.int64)
    iterations = 0
    changed = True
    while changed:
        iterations += 1
        update_alpha_arcs(gd, b.lower, b.upper)
        update_alpha_arcs(gr, b.lower, b.upper)
        for g, s in ((gd, sd), (gr, sr)):
            st = bellman_ford_into(g, 0, s, deadline)
            if st == RUNNING:
                return SolveOutcome.timed_out(iterations=iterations)
            if st == NEG_CYCLE:
                return SolveOutcome.infeasible(Cause.NEGATIVE_CYCLE, iterations=iterations)
        np.negative(sd.tau, out=window_lo)
        changed, ok = intersect_boundaries(b, instance, window_lo, sr.tau)
        if not ok:
            return SolveOutcome.infeasible(Cause.EMPTY_BOUND, iterations=iterations)
        if deadline.expired():
            return SolveOutcome.timed_out(iterations=iterations)
    if kind is ScheduleKind.LATEST:
        return SolveOutcome.feasible(b.upper, kind, iterations=iterations)
    return SolveOutcome.feasible(b.lower, ScheduleKind.EARLIEST, iterations=iterations)

"""Kumar's algorithm.

All-pairs distances over the reverse graph (with global bounds on the
origin arcs) decide which intervals can never host a value (size-1
conflicts) and which pairs of intervals exclude each other (size-2
conflicts).  A maximum bipartite matching over the conflict arcs yields a
minimum vertex cover; its complement picks at most one interval per
time-point, and the STP restricted to those intervals is solved directly.

In the reverse graph ``delta[i, j]`` bounds ``s_j - s_i`` from above.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from numba import njit

from .._deadline import as_deadline
from ..graph import NEG_CYCLE, RUNNING, Direction, _BfScratch, bellman_ford_into, build_graph, johnson_apsp, \
    repeated_bf_apsp, update_alpha_arcs
from ..model import INF, Cause, ScheduleKind, SdtpInstance, SolveOutcome

DEFAULT_CONFLICT_CAP = 10**8


class Variant(enum.Enum):
    KAB = "kab"
    KAJ = "kaj"


class ConflictCapExceeded(RuntimeError):
    pass


@dataclass
class IntervalSet:
    """Intervals that survived the size-1 test, in (time-point, index) order."""

    owner: np.ndarray
    index: np.ndarray  # position in the instance's interval arrays
    lo: np.ndarray
    hi: np.ndarray

    def __len__(self):
        return len(self.owner)


@njit(cache=True)
def _size2(owner, lo, hi, delta, out_a, out_b, fill, limit):
    count = 0
    m = owner.shape[0]
    for e in range(m):
        row = delta[owner[e]]
        he = hi[e]
        for f in range(m):
            if e == f:
                continue
            d = row[owner[f]]
            if d == INF:
                continue
            if he + d - lo[f] < 0:
                if fill:
                    out_a[count] = e
                    out_b[count] = f
                count += 1
                if not fill and count > limit:
                    return count
    return count


def build_conflicts(delta: np.ndarray, instance: SdtpInstance, cap: int = DEFAULT_CONFLICT_CAP):
    """Intervals free of size-1 conflicts and the size-2 conflict arcs.

    Returns ``None`` when some time-point keeps no interval, otherwise
    ``(intervals, a, b)`` where ``(a[k], b[k])`` index conflicting
    intervals.  Raises ``ConflictCapExceeded`` past ``cap`` arcs.
    """
    counts = np.diff(instance.dom_ptr)
    owner = np.repeat(np.arange(instance.n + 1, dtype=np.int64), counts)
    idx = np.arange(instance.omega, dtype=np.int64)
    lo, hi = instance.dom_lo, instance.dom_hi
    to_alpha = delta[owner, 0]
    from_alpha = delta[0, owner]
    bad = ((to_alpha != INF) & (to_alpha + hi < 0)) | ((from_alpha != INF) & (from_alpha - lo < 0))
    keep = ~bad
    if np.bincount(owner[keep], minlength=instance.n + 1)[1:].min(initial=1) == 0:
        return None
    iv = IntervalSet(owner[keep], idx[keep], lo[keep], hi[keep])
    empty = np.empty(0, dtype=np.int64)
    total = _size2(iv.owner, iv.lo, iv.hi, delta, empty, empty, False, cap)
    if total > cap:
        raise ConflictCapExceeded(f"more than {cap} interval conflicts")
    a = np.empty(total, dtype=np.int64)
    b = np.empty(total, dtype=np.int64)
    _size2(iv.owner, iv.lo, iv.hi, delta, a, b, True, cap)
    return iv, a, b


@dataclass
class FlowNetwork:
    """Unit-capacity network: source 0, left ``1..m``, right ``m+1..2m``, sink ``2m+1``.

    Arc ``k`` and its residual twin ``k ^ 1`` are stored side by side; the
    CSR ``head``/``order`` lists each node's arcs in construction order.
    """

    size: int  # m
    tail: np.ndarray
    to: np.ndarray
    cap: np.ndarray
    head: np.ndarray
    order: np.ndarray

    @property
    def source(self):
        return 0

    @property
    def sink(self):
        return 2 * self.size + 1

    @classmethod
    def build(cls, m: int, a, b) -> "FlowNetwork":
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        left = np.arange(1, m + 1, dtype=np.int64)
        src = np.concatenate([np.zeros(m, np.int64), a + 1, left + m])
        dst = np.concatenate([left, b + 1 + m, np.full(m, 2 * m + 1, np.int64)])
        k = len(src)
        tail = np.empty(2 * k, np.int64)
        to = np.empty(2 * k, np.int64)
        tail[0::2], to[0::2] = src, dst
        tail[1::2], to[1::2] = dst, src
        cap = np.zeros(2 * k, np.int64)
        cap[0::2] = 1
        nodes = 2 * m + 2
        order = np.argsort(tail, kind="stable")
        head = np.zeros(nodes + 1, np.int64)
        np.cumsum(np.bincount(tail, minlength=nodes), out=head[1:])
        return cls(m, tail, to, cap, head, order)


@njit(cache=True)
def _bfs(head, order, to, cap, s, level, queue):
    level[:] = -1
    level[s] = 0
    qh = 0
    qt = 1
    queue[0] = s
    while qh < qt:
        u = queue[qh]
        qh += 1
        for p in range(head[u], head[u + 1]):
            k = order[p]
            v = to[k]
            if cap[k] > 0 and level[v] < 0:
                level[v] = level[u] + 1
                queue[qt] = v
                qt += 1


@njit(cache=True)
def _dinic(head, order, to, cap, s, t, level, it, queue, stack, path):
    flow = 0
    nodes = head.shape[0] - 1
    while True:
        _bfs(head, order, to, cap, s, level, queue)
        if level[t] < 0:
            return flow
        for u in range(nodes):
            it[u] = head[u]
        # iterative blocking-flow DFS; all capacities are 0/1
        while True:
            depth = 0
            stack[0] = s
            found = False
            while depth >= 0:
                u = stack[depth]
                if u == t:
                    found = True
                    break
                advanced = False
                while it[u] < head[u + 1]:
                    k = order[it[u]]
                    v = to[k]
                    if cap[k] > 0 and level[v] == level[u] + 1:
                        path[depth] = k
                        depth += 1
                        stack[depth] = v
                        advanced = True
                        break
                    it[u] += 1
                if not advanced:
                    level[u] = -1  # dead end
                    depth -= 1
                    if depth >= 0:
                        it[stack[depth]] += 1
            if not found:
                break
            for d in range(depth):
                k = path[d]
                cap[k] -= 1
                cap[k ^ 1] += 1
            flow += 1


def dinic_max_flow(net: FlowNetwork) -> tuple[int, np.ndarray]:
    """Maximum flow value and the residual set reachable from the source."""
    nodes = 2 * net.size + 2
    level = np.empty(nodes, np.int64)
    it = np.empty(nodes, np.int64)
    queue = np.empty(nodes, np.int64)
    stack = np.empty(nodes + 1, np.int64)
    path = np.empty(nodes + 1, np.int64)
    flow = _dinic(net.head, net.order, net.to, net.cap, net.source, net.sink, level, it, queue, stack, path)
    _bfs(net.head, net.order, net.to, net.cap, net.source, level, queue)
    return int(flow), level >= 0


def extract_selection(reach: np.ndarray, intervals: IntervalSet, n: int) -> np.ndarray | None:
    """Chosen interval index per time-point (entry 0 unused), or None.

    ``e`` survives the cover when it is reachable from the source while its
    copy is not.  ``None`` means fewer than ``n`` intervals survived.
    """
    m = len(intervals)
    keep = reach[1 : m + 1] & ~reach[m + 1 : 2 * m + 1]
    owners = intervals.owner[keep]
    if len(owners) != n or len(np.unique(owners)) != n:
        return None
    choice = np.full(n + 1, -1, dtype=np.int64)
    choice[owners] = intervals.index[keep]
    return choice


def _outcome_cause(cause, **info):
    return SolveOutcome.infeasible(cause, **info)


def solve_ka(instance: SdtpInstance, variant: Variant | str = Variant.KAB, budget=None,
             conflict_cap: int = DEFAULT_CONFLICT_CAP) -> SolveOutcome:
    variant = Variant(variant)
    deadline = as_deadline(budget)
    g = build_graph(instance, Direction.REVERSE)
    try:
        apsp = repeated_bf_apsp if variant is Variant.KAB else johnson_apsp
        delta = apsp(g, deadline)
    except TimeoutError:
        return SolveOutcome.timed_out(phase="distances")
    if delta is None:
        return _outcome_cause(Cause.NEGATIVE_CYCLE)
    res = build_conflicts(delta, instance, conflict_cap)
    if res is None:
        return _outcome_cause(Cause.EMPTY_BOUND)
    intervals, a, b = res
    if deadline.expired():
        return SolveOutcome.timed_out(phase="conflicts")
    info = {"intervals": len(intervals), "conflicts": len(a)}
    flow, reach = dinic_max_flow(FlowNetwork.build(len(intervals), a, b))
    info["flow"] = flow
    choice = extract_selection(reach, intervals, instance.n)
    if choice is None:
        return _outcome_cause(Cause.COVER_TOO_SMALL, **info)
    lower = np.zeros(instance.n + 1, dtype=np.int64)
    upper = np.zeros(instance.n + 1, dtype=np.int64)
    lower[1:] = instance.dom_lo[choice[1:]]
    upper[1:] = instance.dom_hi[choice[1:]]
    update_alpha_arcs(g, lower, upper)
    scratch = _BfScratch(g.node_count)
    st = bellman_ford_into(g, 0, scratch, deadline)
    if st == RUNNING:
        return SolveOutcome.timed_out(**info)
    if st == NEG_CYCLE:
        # the pairwise-compatible selection is still jointly inconsistent
        return _outcome_cause(Cause.NEGATIVE_CYCLE, **info)
    info["selection"] = choice
    return SolveOutcome.feasible(scratch.tau.copy(), ScheduleKind.UNSPECIFIED, **info)

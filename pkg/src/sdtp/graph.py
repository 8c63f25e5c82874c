"""Distance graphs and shortest-path kernels.

Node 0 is the origin ``alpha``; node ``i`` is time-point ``i``.  A graph is
stored in CSR form (``head``/``target``/``weight``).  In the direct graph a
constraint ``s_i - s_j <= w`` is the arc ``i -> j`` with weight ``w``, so the
distances ``tau`` from the origin give the earliest schedule ``s = -tau``.
The reverse graph flips every arc and yields the latest schedule ``s = tau``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from numba import njit

from ._deadline import as_deadline
from .model import ALPHA, INF, SdtpInstance

# kernel status codes
RUNNING = 0
DONE = 1
NEG_CYCLE = 2

STEP_CHUNK = 1 << 14


class Direction(enum.Enum):
    DIRECT = "direct"
    REVERSE = "reverse"


@dataclass
class DistanceGraph:
    node_count: int
    head: np.ndarray
    target: np.ndarray
    weight: np.ndarray
    direction: Direction = Direction.DIRECT
    alpha_out: np.ndarray | None = None
    alpha_in: np.ndarray | None = None

    @classmethod
    def from_arcs(cls, node_count, src, dst, w, direction=Direction.DIRECT):
        src = np.asarray(src, dtype=np.int64)
        dst = np.asarray(dst, dtype=np.int64)
        w = np.asarray(w, dtype=np.int64)
        order = np.argsort(src, kind="stable")
        head = np.zeros(node_count + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=node_count), out=head[1:])
        return cls(node_count, head, dst[order].copy(), w[order].copy(), direction), order

    @property
    def arc_count(self) -> int:
        return len(self.target)

    def arcs(self):
        """Yield ``(u, v, w)`` in storage order."""
        for u in range(self.node_count):
            for k in range(self.head[u], self.head[u + 1]):
                yield u, int(self.target[k]), int(self.weight[k])

    def to_dot(self) -> str:
        lines = [f"digraph {self.direction.value} {{"]
        for u, v, w in self.arcs():
            lines.append(f"  {u} -> {v} [label={w}];")
        lines.append("}")
        return "\n".join(lines)


def build_graph(instance: SdtpInstance, direction: Direction = Direction.DIRECT) -> DistanceGraph:
    n = instance.n
    tps = np.arange(1, n + 1, dtype=np.int64)
    zeros = np.zeros(n, dtype=np.int64)
    lower = instance.lower_bounds()[1:]
    upper = instance.upper_bounds()[1:]
    # origin->i arcs first, then constraints, then i->origin arcs
    src = np.concatenate([zeros, instance.c1_i, tps])
    dst = np.concatenate([tps, instance.c1_j, zeros])
    w = np.concatenate([-lower, instance.c1_w, upper])
    if direction is Direction.REVERSE:
        src, dst = dst, src
    g, order = DistanceGraph.from_arcs(n + 1, src, dst, w, direction)
    where = np.empty_like(order)
    where[order] = np.arange(len(order))
    m1 = instance.m1
    g.alpha_out = np.full(n + 1, -1, dtype=np.int64)
    g.alpha_in = np.full(n + 1, -1, dtype=np.int64)
    down = where[:n]  # origin->i in the direct graph
    up = where[n + m1 :]  # i->origin in the direct graph
    if direction is Direction.DIRECT:
        g.alpha_out[1:], g.alpha_in[1:] = down, up
    else:
        g.alpha_out[1:], g.alpha_in[1:] = up, down
    return g


def update_alpha_arcs(g: DistanceGraph, lower, upper) -> None:
    """Install per-time-point bounds ``[lower_i, upper_i]`` on the origin arcs.

    ``lower``/``upper`` are indexed by node (entry 0 ignored).
    """
    lower = np.asarray(lower, dtype=np.int64)[1:]
    upper = np.asarray(upper, dtype=np.int64)[1:]
    if g.direction is Direction.DIRECT:
        g.weight[g.alpha_out[1:]] = -lower
        g.weight[g.alpha_in[1:]] = upper
    else:
        g.weight[g.alpha_out[1:]] = upper
        g.weight[g.alpha_in[1:]] = -lower


# ---------------------------------------------------------------- Bellman-Ford


@njit(cache=True)
def _bf_run(head, target, weight, tau, pi, inq, queue, qs, limit, max_steps):
    """FIFO label-correcting relaxation; resumable.

    ``qs`` = [queue head, queue size]. A node whose arc counter reaches
    ``limit`` proves a negative cycle.
    """
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
        du = tau[u]
        for k in range(head[u], head[u + 1]):
            v = target[k]
            nd = du + weight[k]
            if nd < tau[v]:
                tau[v] = nd
                pi[v] = pi[u] + 1
                if pi[v] >= limit:
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


@dataclass
class SsspResult:
    negative_cycle: bool
    tau: np.ndarray | None = None
    pi: np.ndarray | None = None


class _BfScratch:
    __slots__ = ("tau", "pi", "inq", "queue", "qs")

    def __init__(self, node_count):
        self.tau = np.empty(node_count, dtype=np.int64)
        self.pi = np.empty(node_count, dtype=np.int64)
        self.inq = np.empty(node_count, dtype=np.bool_)
        self.queue = np.empty(node_count, dtype=np.int64)
        self.qs = np.zeros(2, dtype=np.int64)


def _bf_drive(g, scratch, limit, deadline):
    while True:
        st = _bf_run(g.head, g.target, g.weight, scratch.tau, scratch.pi, scratch.inq,
                     scratch.queue, scratch.qs, limit, STEP_CHUNK)
        if st != RUNNING:
            return st
        if deadline is not None and deadline.expired():
            return RUNNING


def bellman_ford_into(g: DistanceGraph, source: int, scratch: _BfScratch, deadline=None) -> int:
    """Run Bellman-Ford into caller-owned scratch; returns a status code.

    ``RUNNING`` is returned when the deadline expired first.
    """
    scratch.tau.fill(INF)
    scratch.pi.fill(0)
    scratch.inq.fill(False)
    scratch.tau[source] = 0
    scratch.queue[0] = source
    scratch.inq[source] = True
    scratch.qs[0] = 0
    scratch.qs[1] = 1
    return _bf_drive(g, scratch, g.node_count, deadline)


def bellman_ford(g: DistanceGraph, source: int = ALPHA, budget=None) -> SsspResult | None:
    """Single-source shortest paths with negative-cycle detection.

    Returns ``None`` if ``budget`` (seconds or a Deadline) runs out.
    """
    deadline = None if budget is None else as_deadline(budget)
    scratch = _BfScratch(g.node_count)
    st = bellman_ford_into(g, source, scratch, deadline)
    if st == RUNNING:
        return None
    if st == NEG_CYCLE:
        return SsspResult(True)
    return SsspResult(False, scratch.tau, scratch.pi)


def potentials(g: DistanceGraph, budget=None) -> np.ndarray | None:
    """Feasible potentials from a virtual zero-weight source.

    Returns ``None`` on a negative cycle anywhere in ``g``.
    """
    deadline = None if budget is None else as_deadline(budget)
    s = _BfScratch(g.node_count)
    s.tau.fill(0)
    s.pi.fill(1)
    s.inq.fill(True)
    s.queue[:] = np.arange(g.node_count)
    s.qs[0] = 0
    s.qs[1] = g.node_count
    st = _bf_drive(g, s, g.node_count + 1, deadline)
    if st == RUNNING:
        raise TimeoutError
    if st == NEG_CYCLE:
        return None
    return s.tau


# -------------------------------------------------------------------- Dijkstra

D = 4  # heap arity


@njit(cache=True)
def _heap_sift_up(heap, pos, key, idx):
    v = heap[idx]
    kv = key[v]
    while idx > 0:
        parent = (idx - 1) // D
        p = heap[parent]
        if key[p] <= kv:
            break
        heap[idx] = p
        pos[p] = idx
        idx = parent
    heap[idx] = v
    pos[v] = idx


@njit(cache=True)
def _heap_pop(heap, pos, key, size):
    top = heap[0]
    pos[top] = -2
    size -= 1
    if size == 0:
        return top, size
    v = heap[size]
    kv = key[v]
    idx = 0
    while True:
        first = D * idx + 1
        if first >= size:
            break
        best = first
        kb = key[heap[first]]
        last = first + D
        if last > size:
            last = size
        for c in range(first + 1, last):
            kc = key[heap[c]]
            if kc < kb:
                best = c
                kb = kc
        if kb >= kv:
            break
        heap[idx] = heap[best]
        pos[heap[idx]] = idx
        idx = best
    heap[idx] = v
    pos[v] = idx
    return top, size


@njit(cache=True)
def _dijkstra_into(head, target, weight, source, dist, heap, pos):
    """4-ary-heap Dijkstra; ``pos`` is -1 (unseen), -2 (settled) or heap slot."""
    dist[:] = INF
    pos[:] = -1
    dist[source] = 0
    heap[0] = source
    pos[source] = 0
    size = 1
    while size > 0:
        u, size = _heap_pop(heap, pos, dist, size)
        du = dist[u]
        for k in range(head[u], head[u + 1]):
            v = target[k]
            if pos[v] == -2:
                continue
            nd = du + weight[k]
            if nd < dist[v]:
                dist[v] = nd
                if pos[v] == -1:
                    heap[size] = v
                    pos[v] = size
                    size += 1
                _heap_sift_up(heap, pos, dist, pos[v])


def dijkstra(g: DistanceGraph, source: int, out: np.ndarray | None = None) -> np.ndarray:
    """Shortest distances from ``source``; all weights must be non-negative."""
    assert g.arc_count == 0 or g.weight.min() >= 0, "dijkstra requires non-negative weights"
    n = g.node_count
    dist = np.empty(n, dtype=np.int64) if out is None else out
    _dijkstra_into(g.head, g.target, g.weight, source, dist, np.empty(n, np.int64), np.empty(n, np.int64))
    return dist


# ---------------------------------------------------------------- All pairs


@njit(cache=True)
def _fw_range(d, k0, k1):
    n = d.shape[0]
    for k in range(k0, k1):
        for i in range(n):
            dik = d[i, k]
            if dik == INF:
                continue
            row_i = d[i]
            row_k = d[k]
            for j in range(n):
                dkj = row_k[j]
                if dkj == INF:
                    continue
                nd = dik + dkj
                if nd < row_i[j]:
                    row_i[j] = nd
            if row_i[i] < 0:
                return True
    return False


def floyd_warshall(delta: np.ndarray, budget=None) -> bool:
    """In-place all-pairs closure; returns True on a negative cycle.

    Raises ``TimeoutError`` if the budget runs out.
    """
    deadline = None if budget is None else as_deadline(budget)
    n = delta.shape[0]
    if n == 0:
        return False
    chunk = max(1, int(2e7 // (n * n)) or 1)
    for k0 in range(0, n, chunk):
        if _fw_range(delta, k0, min(n, k0 + chunk)):
            return True
        if deadline is not None and deadline.expired():
            raise TimeoutError
    return bool((np.diagonal(delta) < 0).any())


def edges_matrix(g: DistanceGraph) -> np.ndarray:
    """Arc-weight matrix with 0 diagonal (parallel arcs keep the minimum)."""
    n = g.node_count
    m = np.full((n, n), INF, dtype=np.int64)
    src = np.repeat(np.arange(n), np.diff(g.head))
    np.minimum.at(m, (src, g.target), g.weight)
    d = np.arange(n)
    m[d, d] = np.minimum(m[d, d], 0)
    return m


def johnson_apsp(g: DistanceGraph, budget=None) -> np.ndarray | None:
    """All-pairs distances via potentials + one Dijkstra per source.

    Returns ``None`` on a negative cycle; raises ``TimeoutError`` on budget.
    """
    deadline = None if budget is None else as_deadline(budget)
    h = potentials(g, deadline)
    if h is None:
        return None
    n = g.node_count
    src = np.repeat(np.arange(n), np.diff(g.head))
    rw = g.weight + h[src] - h[g.target]
    out = np.empty((n, n), dtype=np.int64)
    heap = np.empty(n, np.int64)
    pos = np.empty(n, np.int64)
    for u in range(n):
        row = out[u]
        _dijkstra_into(g.head, g.target, rw, u, row, heap, pos)
        fin = row != INF
        row[fin] += h[fin] - h[u]
        if deadline is not None and deadline.expired():
            raise TimeoutError
    return out


def repeated_bf_apsp(g: DistanceGraph, budget=None) -> np.ndarray | None:
    """All-pairs distances via one Bellman-Ford per source."""
    deadline = None if budget is None else as_deadline(budget)
    n = g.node_count
    out = np.empty((n, n), dtype=np.int64)
    scratch = _BfScratch(n)
    for u in range(n):
        st = bellman_ford_into(g, u, scratch, deadline)
        if st == NEG_CYCLE:
            return None
        if st == RUNNING or (deadline is not None and deadline.expired()):
            raise TimeoutError
        out[u] = scratch.tau
    return out

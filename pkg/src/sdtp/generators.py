"""Seeded instance generators for the benchmark families.

Base graphs (``rand``, ``grid``, ``seq``) become the Type 1 constraints
unchanged: an arc ``(i, j, w)`` is the constraint ``s_i - s_j <= w``.
Intervals are then attached around the schedule ``s0 = -tau``, where
``tau`` holds shortest distances from a virtual source with a zero-weight
arc to every node (so ``s0`` is the earliest schedule with ``s >= 0``).

All randomness comes from ``numpy``'s counter-based Philox generator keyed
by a ``SeedSequence`` built from the seed plus a purpose tag, so retries and
sub-streams are reproducible without sharing state.
"""
from __future__ import annotations

import enum
import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np
from numba import njit

from .model import InstanceStats, SdtpInstance

GRID_LANES = 16
RAND_WEIGHTS = (0, 10_000)
SEQ_WEIGHTS = (500, 20_000)
PHI_MAX = 2000
GAP_MAX = 200
LATE_OFFSET = 5
# potential spread per family; seq keeps its unit path, late needs slack arcs
DEFAULT_POTENTIAL = {"rand": 1_000_000, "grid": 1_000_000, "seq": 0, "late": 0}


class Family(enum.Enum):
    RAND = "rand"
    GRID = "grid"
    SEQ = "seq"
    LATE = "late"


class NegCycleClass(enum.Enum):
    NC02 = "nc02"
    NC03 = "nc03"
    NC04 = "nc04"
    NC05 = "nc05"


class GenerationError(RuntimeError):
    """Raised when no attempt produced an instance passing the acceptance rule."""


class SizingError(ValueError):
    pass


def rng(seed: int, *keys: int) -> np.random.Generator:
    """Independent stream for ``(seed, *keys)``."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed) & (2**64 - 1), *keys])))


# stream tags
_GRAPH, _DOMAINS, _NEGCYCLE, _POTENTIAL = 1, 2, 3, 4


@dataclass
class BaseGraph:
    """Weighted digraph on nodes ``1..n``."""

    n: int
    src: np.ndarray
    dst: np.ndarray
    w: np.ndarray
    family: str = ""

    @property
    def m(self) -> int:
        return len(self.src)


def _random_arcs(g: np.random.Generator, n: int, count: int):
    src = g.integers(1, n + 1, size=count)
    # shift by 1..n-1 so no arc is a self-loop
    dst = (src - 1 + g.integers(1, n, size=count)) % n + 1
    return src, dst


def gen_rand(n: int, m1: int, seed: int, weights=RAND_WEIGHTS) -> BaseGraph:
    """Random graph: a Hamiltonian cycle for connectivity plus random arcs."""
    if n < 2 or m1 < n:
        raise SizingError(f"rand needs n >= 2 and m1 >= n (got n={n}, m1={m1})")
    g = rng(seed, _GRAPH)
    perm = g.permutation(n) + 1
    cyc_src, cyc_dst = perm, np.roll(perm, -1)
    extra_src, extra_dst = _random_arcs(g, n, m1 - n)
    src = np.concatenate([cyc_src, extra_src])
    dst = np.concatenate([cyc_dst, extra_dst])
    w = g.integers(weights[0], weights[1] + 1, size=m1)
    return BaseGraph(n, src, dst, w, "rand")


def gen_grid(n: int, m1: int, seed: int, weights=RAND_WEIGHTS) -> BaseGraph:
    """Layered grid: ``n / 16`` layers of 16 nodes.

    Each layer is a directed cycle, node ``(x, y)`` feeds ``(x + 1, y)``, and
    the remaining arcs jump forward to a random node of a later layer.
    """
    y = GRID_LANES
    if n % y or n < 2 * y:
        raise SizingError(f"grid needs n to be a multiple of {y} with at least two layers (got {n})")
    x = n // y
    base = n + (x - 1) * y
    if m1 < base:
        raise SizingError(f"grid with n={n} needs m1 >= {base}")
    g = rng(seed, _GRAPH)
    node = np.arange(n).reshape(x, y) + 1
    src = [node.ravel(), node[:-1].ravel()]
    dst = [np.roll(node, -1, axis=1).ravel(), node[1:].ravel()]
    extra = m1 - base
    layer = g.integers(0, x - 1, size=extra)
    to_layer = layer + 1 + (g.random(extra) * (x - 1 - layer)).astype(np.int64)
    src.append(layer * y + g.integers(0, y, size=extra) + 1)
    dst.append(to_layer * y + g.integers(0, y, size=extra) + 1)
    w = g.integers(weights[0], weights[1] + 1, size=m1)
    return BaseGraph(n, np.concatenate(src), np.concatenate(dst), w, "grid")


def gen_seq(n: int, m1: int, seed: int, weights=SEQ_WEIGHTS) -> BaseGraph:
    """Random graph hiding a unit-weight Hamiltonian path among heavy arcs."""
    if n < 2 or m1 < n - 1:
        raise SizingError(f"seq needs n >= 2 and m1 >= n - 1 (got n={n}, m1={m1})")
    g = rng(seed, _GRAPH)
    perm = g.permutation(n) + 1
    extra_src, extra_dst = _random_arcs(g, n, m1 - n + 1)
    src = np.concatenate([perm[:-1], extra_src])
    dst = np.concatenate([perm[1:], extra_dst])
    w = np.concatenate([np.ones(n - 1, np.int64), g.integers(weights[0], weights[1] + 1, size=m1 - n + 1)])
    return BaseGraph(n, src, dst, w, "seq")


def gen_base_graph(family: Family | str, n: int, m1: int, seed: int) -> BaseGraph:
    family = Family(family)
    if family is Family.GRID:
        return gen_grid(n, m1, seed)
    if family is Family.SEQ:
        return gen_seq(n, m1, seed)
    return gen_rand(n, m1, seed)


def apply_potential(graph: BaseGraph, spread: int, seed: int) -> BaseGraph:
    """Reweight ``w_ij + p_i - p_j`` with ``p ~ U[0, spread]``.

    Cycle weights are unchanged, so no negative cycle appears, but arcs may
    turn negative and distances from the virtual source become non-trivial.
    """
    if spread <= 0:
        return graph
    p = rng(seed, _POTENTIAL).integers(0, spread + 1, size=graph.n + 1)
    w = graph.w + p[graph.src] - p[graph.dst]
    return BaseGraph(graph.n, graph.src, graph.dst, w, graph.family)


# ---------------------------------------------------------------- distances


@njit(cache=True)
def _relax_from(head, target, weight, tau, seeds, inq, queue, limit):
    """FIFO label correcting from every node in ``seeds``; False on a negative cycle."""
    nc = tau.shape[0]
    pi = np.zeros(nc, np.int64)
    qh = 0
    qn = 0
    for s in seeds:
        if not inq[s]:
            inq[s] = True
            queue[(qh + qn) % nc] = s
            qn += 1
    while qn > 0:
        u = queue[qh]
        qh = (qh + 1) % nc
        qn -= 1
        inq[u] = False
        for k in range(head[u], head[u + 1]):
            v = target[k]
            nd = tau[u] + weight[k]
            if nd < tau[v]:
                tau[v] = nd
                pi[v] = pi[u] + 1
                if pi[v] >= limit:
                    return False
                if not inq[v]:
                    inq[v] = True
                    queue[(qh + qn) % nc] = v
                    qn += 1
    return True


class SourceDistances:
    """``tau`` from a virtual source whose arc weights can be lowered later."""

    def __init__(self, graph: BaseGraph):
        nc = graph.n + 1
        order = np.argsort(graph.src, kind="stable")
        self.head = np.zeros(nc + 1, np.int64)
        np.cumsum(np.bincount(graph.src, minlength=nc), out=self.head[1:])
        self.target = graph.dst[order].astype(np.int64)
        self.weight = graph.w[order].astype(np.int64)
        self.tau = np.zeros(nc, np.int64)
        self._inq = np.zeros(nc, np.bool_)
        self._queue = np.empty(nc, np.int64)
        self._limit = nc + 1
        self._run(np.arange(1, nc, dtype=np.int64))

    def _run(self, seeds):
        if not _relax_from(self.head, self.target, self.weight, self.tau, seeds, self._inq, self._queue,
                           self._limit):
            raise GenerationError("base graph contains a negative cycle")

    def lower(self, j: int, value: int) -> None:
        """Set the source arc to ``j`` to ``value`` (never raises a distance)."""
        if value < self.tau[j]:
            self.tau[j] = value
            self._run(np.array([j], np.int64))

    @property
    def schedule(self) -> np.ndarray:
        return -self.tau


# ---------------------------------------------------------------- domains


def _assemble(n, graph, counts, fill, name) -> SdtpInstance:
    ptr = np.zeros(n + 2, np.int64)
    np.cumsum(counts, out=ptr[2:])
    lo = np.empty(ptr[-1], np.int64)
    hi = np.empty(ptr[-1], np.int64)
    fill(ptr, lo, hi)
    return SdtpInstance(n, graph.src, graph.dst, graph.w, ptr, lo, hi, name=name)


def _anchors(g, s0):
    phi = g.integers(0, PHI_MAX + 1, size=(len(s0), 2))
    return s0 - phi[:, 0], s0 + phi[:, 1]


def attach_domains_rand(graph: BaseGraph, td_fraction: float, k: int, seed: int, attempt: int = 0,
                        s0: np.ndarray | None = None, name: str = "") -> SdtpInstance:
    """Interval lists around ``s0``; ``floor(td_fraction * n)`` points get ``k`` intervals.

    For a multi-interval point the ``kappa``-th interval (``kappa ~ U[1, k]``)
    is the anchor ``[s0 - phi1, s0 + phi2]``; the others keep its width and
    are spaced by ``a + 1`` with ``a ~ U[0, 200]``.
    """
    n = graph.n
    if s0 is None:
        s0 = SourceDistances(graph).schedule
    g = rng(seed, _DOMAINS, attempt)
    a_lo, a_hi = _anchors(g, s0[1:])
    td = int(math.floor(td_fraction * n)) if k > 1 else 0
    members = np.sort(g.choice(n, size=td, replace=False)) + 1
    counts = np.ones(n, np.int64)
    counts[members - 1] = k
    kappa = g.integers(1, k + 1, size=td)
    width = a_hi[members - 1] - a_lo[members - 1]
    steps = width[:, None] + g.integers(0, GAP_MAX + 1, size=(td, max(k - 1, 0))) + 1
    offs = np.zeros((td, k), np.int64)
    np.cumsum(steps, axis=1, out=offs[:, 1:])
    offs -= offs[np.arange(td), kappa - 1][:, None]

    def fill(ptr, lo, hi):
        start = ptr[1:-1]
        lo[start] = a_lo
        hi[start] = a_hi
        idx = start[members - 1][:, None] + np.arange(k)
        lo[idx] = a_lo[members - 1][:, None] + offs
        hi[idx] = lo[idx] + width[:, None]

    return _assemble(n, graph, counts, fill, name)


def late_member_count(n: int, td_fraction: float, k: int) -> int:
    """Multi-interval points of a late instance with ``n`` time-points (the source excluded)."""
    return min(int(math.floor(td_fraction * n)), n - 1) if k > 1 else 0


def attach_domains_late(graph: BaseGraph, td_fraction: float, k: int, seed: int, attempt: int = 0,
                        name: str = "") -> SdtpInstance:
    """Append intervals just above the current earliest values.

    The result has ``graph.n + 1`` time-points: the last one is the source
    ``z``, pinned to ``[0, 0]``.  Every other point starts with one anchor
    interval.  Then, one interval at a time in random order, a member ``j``
    receives ``[-tau_j + 5, -tau_j + 6]``; its earlier intervals are shifted
    down if they would touch the new one, and the arc ``z -> j`` is set to
    ``-l`` before distances are updated.  Those arcs stay in the instance as
    ``s_z - s_j <= -l``, which is what pushes the earliest schedule into the
    last intervals.
    """
    n = graph.n + 1
    z = n
    dist = SourceDistances(graph)
    g = rng(seed, _DOMAINS, attempt)
    a_lo, a_hi = _anchors(g, dist.schedule[1:])
    td = late_member_count(n, td_fraction, k)
    members = np.sort(g.choice(graph.n, size=td, replace=False)) + 1
    lists = {int(j): [[int(a_lo[j - 1]), int(a_hi[j - 1])]] for j in members}
    for j in g.permutation(np.repeat(members, k - 1)):
        j = int(j)
        l = int(-dist.tau[j]) + LATE_OFFSET
        d = lists[j]
        overlap = d[-1][1] - l + 1
        if overlap > 0:
            for iv in d:
                iv[0] -= overlap
                iv[1] -= overlap
        d.append([l, l + 1])
        dist.lower(j, -l)
    counts = np.ones(n, np.int64)
    counts[members - 1] = k

    def fill(ptr, lo, hi):
        start = ptr[1:-1]
        lo[start[:-1]] = a_lo
        hi[start[:-1]] = a_hi
        lo[start[-1]] = hi[start[-1]] = 0
        for j, d in lists.items():
            arr = np.array(d, np.int64)
            lo[start[j - 1] : start[j - 1] + k] = arr[:, 0]
            hi[start[j - 1] : start[j - 1] + k] = arr[:, 1]

    last_lo = np.array([lists[int(j)][-1][0] for j in members], np.int64)
    src = np.concatenate([graph.src, np.full(td, z, np.int64)])
    dst = np.concatenate([graph.dst, members])
    w = np.concatenate([graph.w, -last_lo])
    return _assemble(n, BaseGraph(n, src, dst, w, graph.family), counts, fill, name)


# ---------------------------------------------------------------- acceptance


def domain_positions(instance: SdtpInstance, s) -> np.ndarray:
    """1-based index of the interval holding ``s_i`` (0 if none), per time-point."""
    s = np.asarray(s, np.int64)
    counts = np.diff(instance.dom_ptr)
    owner = np.repeat(np.arange(instance.n + 1), counts)
    below = instance.dom_lo <= s[owner]
    pos = np.zeros(instance.n + 1, np.int64)
    np.add.at(pos, owner, below)
    has = pos > 0
    inside = np.zeros(instance.n + 1, bool)
    idx = instance.dom_ptr[:-1] + pos - 1
    inside[has] = s[has] <= instance.dom_hi[idx[has]]
    pos[~inside] = 0
    return pos[1:]


@dataclass
class AcceptanceReport:
    feasible: bool
    fraction: float
    threshold: float
    rule: str  # "non-first" | "last"

    @property
    def accepted(self) -> bool:
        return self.feasible and self.fraction >= self.threshold


def check_acceptance(instance: SdtpInstance, rule: str, threshold: float = 0.6,
                     earliest: np.ndarray | None = None) -> AcceptanceReport:
    """Share of earliest-schedule entries in a non-first (or the last) interval."""
    if earliest is None:
        from .solvers.bfdc import solve_bfdc

        out = solve_bfdc(instance)
        if not out.is_feasible:
            return AcceptanceReport(False, 0.0, threshold, rule)
        earliest = out.schedule
    pos = domain_positions(instance, earliest)
    if rule == "last":
        hit = pos == np.diff(instance.dom_ptr)[1:]
    else:
        hit = pos > 1
    return AcceptanceReport(True, float(hit.mean()) if instance.n else 0.0, threshold, rule)


# ---------------------------------------------------------------- configs


@dataclass
class GenConfig:
    family: str
    n: int
    m1: int
    k: int
    seed: int
    td_fraction: float = 0.8
    acceptance: float = 0.6
    retries: int = 25
    late_base: str = "rand"
    potential: int | None = None  # None picks the family default

    def resolved_potential(self) -> int:
        if self.potential is not None:
            return self.potential
        return DEFAULT_POTENTIAL.get(self.family, 0)

    def name(self) -> str:
        return f"{self.family}-n{self.n}-m{self.m1}-k{self.k}-s{self.seed}"


@dataclass
class Generated:
    instance: SdtpInstance
    config: GenConfig
    attempt: int
    report: AcceptanceReport | None
    extra: dict = field(default_factory=dict)

    def manifest_entry(self, path: str | None = None) -> dict:
        entry = {"name": self.instance.name, **asdict(self.config), "attempt": self.attempt}
        if self.report is not None:
            entry["acceptance_fraction"] = round(self.report.fraction, 6)
        if path is not None:
            entry["path"] = path
        entry.update(self.extra)
        return entry


def generate(config: GenConfig) -> Generated:
    """Build one instance, regenerating the intervals until the acceptance rule holds."""
    family = Family(config.family)
    if family is Family.LATE:
        # one time-point and one arc per member are reserved for the source
        td = late_member_count(config.n, config.td_fraction, config.k)
        graph = gen_base_graph(config.late_base, config.n - 1, config.m1 - td, config.seed)
    else:
        graph = gen_base_graph(family, config.n, config.m1, config.seed)
    graph = apply_potential(graph, config.resolved_potential(), config.seed)
    rule = "last" if family is Family.LATE else "non-first"
    s0 = None if family is Family.LATE else SourceDistances(graph).schedule
    for attempt in range(config.retries):
        if family is Family.LATE:
            inst = attach_domains_late(graph, config.td_fraction, config.k, config.seed, attempt, config.name())
        else:
            inst = attach_domains_rand(graph, config.td_fraction, config.k, config.seed, attempt, s0,
                                       config.name())
        if config.k == 1 or config.td_fraction == 0:
            return Generated(inst, config, attempt, None)
        report = check_acceptance(inst, rule, config.acceptance)
        if report.accepted:
            return Generated(inst, config, attempt, report)
    raise GenerationError(f"{config.name()}: no accepted instance after {config.retries} attempts")


# ---------------------------------------------------------------- negative cycles


def icbrt(n: int) -> int:
    """Integer cube root (floor)."""
    r = int(round(n ** (1 / 3)))
    while r**3 > n:
        r -= 1
    while (r + 1) ** 3 <= n:
        r += 1
    return r


def _cycle_shape(cls: NegCycleClass, n: int) -> tuple[int, int]:
    """``(number of cycles, arcs per cycle)``."""
    if cls is NegCycleClass.NC02:
        return 1, 3
    if cls is NegCycleClass.NC03:
        return math.isqrt(n), 3
    if cls is NegCycleClass.NC04:
        return icbrt(n), math.isqrt(n)
    return 1, n


def negcycle_filter(instance: SdtpInstance, cls: NegCycleClass | str, seed: int) -> SdtpInstance:
    """Append negative-weight cycles over random time-points to ``C1``.

    Arc weights are ``U[-100, 100]`` except the closing arc, chosen so that
    each cycle totals ``-1 - U[0, 50]``.
    """
    cls = NegCycleClass(cls)
    count, length = _cycle_shape(cls, instance.n)
    if count < 1 or length < 2 or length > instance.n:
        raise SizingError(f"{cls.value} cannot be built on {instance.n} time-points")
    from .solvers.bfdc import solve_bfdc

    if not solve_bfdc(instance).is_feasible:
        raise ValueError("negcycle_filter expects a feasible instance")
    g = rng(seed, _NEGCYCLE)
    extra = []
    for _ in range(count):
        nodes = g.choice(instance.n, size=length, replace=False) + 1
        w = g.integers(-100, 101, size=length)
        w[-1] = -1 - int(g.integers(0, 51)) - int(w[:-1].sum())
        extra.extend(zip(nodes.tolist(), np.roll(nodes, -1).tolist(), w.tolist()))
    return instance.with_extra_constraints(extra, name=f"{instance.name}-{cls.value}" if instance.name else cls.value)


# ---------------------------------------------------------------- very large rows


@dataclass(frozen=True)
class VlConfig:
    row: str
    family: str  # base family of the row
    n: int
    m1: int
    k: int
    omega: int

    @property
    def t_d(self) -> int:
        # omega = n + t_d (k - 1)
        t, r = divmod(self.omega - self.n, self.k - 1)
        assert r == 0
        return t

    @property
    def td_fraction(self) -> float:
        return self.t_d / self.n

    def stats(self) -> InstanceStats:
        return InstanceStats(n=self.n, m1=self.m1, K=self.k, omega=self.omega, t_d=self.t_d)


VL_CONFIGS = {
    "vl3": VlConfig("Vl-3", "seq", 200_000, 2_000_000, 100, 16_040_000),
    "vl4": VlConfig("Vl-4", "late", 400_000, 4_000_000, 180, 57_680_000),
    "vl5": VlConfig("Vl-5", "rand", 1_000_000, 10_000_000, 500, 400_200_000),
}


def _vl_key(row: str) -> str:
    return row.lower().replace("-", "").replace("_", "")


def vl_config(row: str) -> VlConfig:
    try:
        return VL_CONFIGS[_vl_key(row)]
    except KeyError:
        raise ValueError(f"unknown VL row {row!r}; choose from Vl-3, Vl-4, Vl-5") from None


def make_vl(row: str, seed: int, retries: int = 5) -> Generated:
    """Generate a very large instance; Vl-4 and Vl-5 need tens of GB."""
    cfg = vl_config(row)
    return generate(GenConfig(cfg.family, cfg.n, cfg.m1, cfg.k, seed, td_fraction=cfg.td_fraction,
                              retries=retries))


# ---------------------------------------------------------------- manifests


def write_manifest(entries, path) -> None:
    """One JSON object per line."""
    with open(path, "w") as fh:
        for e in entries:
            fh.write(json.dumps(e, sort_keys=True) + "\n")


def read_manifest(path) -> list[dict]:
    return [json.loads(line) for line in Path(path).read_text().splitlines() if line.strip()]


__all__ = [
    "AcceptanceReport",
    "BaseGraph",
    "Family",
    "GenConfig",
    "Generated",
    "GenerationError",
    "NegCycleClass",
    "SizingError",
    "SourceDistances",
    "VL_CONFIGS",
    "VlConfig",
    "apply_potential",
    "attach_domains_late",
    "attach_domains_rand",
    "check_acceptance",
    "domain_positions",
    "gen_base_graph",
    "gen_grid",
    "gen_rand",
    "gen_seq",
    "late_member_count",
    "generate",
    "make_vl",
    "negcycle_filter",
    "read_manifest",
    "rng",
    "vl_config",
    "write_manifest",
]

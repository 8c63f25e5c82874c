"""Instance model for simple disjunctive temporal problems.

An instance holds ``n`` time-points (1-based; index 0 is the time origin),
a list of difference constraints ``s_i - s_j <= w`` and, for every
time-point, an ascending list of disjoint closed integer intervals.

All data is stored in flat ``int64`` arrays so that the numba kernels in
:mod:`sdtp.graph` and :mod:`sdtp.solvers` can consume it without copies.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

#: Sentinel for "+infinity" in distance arrays and matrices.
INF = np.iinfo(np.int64).max

#: Half-width of the box given to time-points without an explicit domain list.
DEFAULT_HORIZON = 2**40

ALPHA = 0


class ScheduleKind(enum.Enum):
    EARLIEST = "earliest"
    LATEST = "latest"
    UNSPECIFIED = "unspecified"


class Status(enum.Enum):
    FEASIBLE = "feasible"
    INFEASIBLE = "infeasible"
    TIMED_OUT = "timed-out"


class Cause(enum.Enum):
    NEGATIVE_CYCLE = "negative-cycle"
    DOMAIN_EXHAUSTED = "domain-exhausted"
    EMPTY_BOUND = "empty-bound"
    COVER_TOO_SMALL = "cover-too-small"


def _frozen(a, dtype=np.int64):
    a = np.ascontiguousarray(a, dtype=dtype)
    a.setflags(write=False)
    return a


class SdtpInstance:
    """Immutable SDTP network.

    Attributes
    ----------
    n : int
        Number of time-points.
    c1_i, c1_j, c1_w : ndarray
        Type 1 constraints ``s_i - s_j <= w`` (1-based time-points).
    dom_ptr : ndarray, shape (n + 2,)
        Intervals of time-point ``i`` are ``dom_lo[dom_ptr[i]:dom_ptr[i+1]]``
        and ``dom_hi[...]``. The origin (index 0) owns no interval.
    dom_lo, dom_hi : ndarray, shape (omega,)
    """

    __slots__ = ("n", "c1_i", "c1_j", "c1_w", "dom_ptr", "dom_lo", "dom_hi", "name")

    def __init__(self, n, c1_i, c1_j, c1_w, dom_ptr, dom_lo, dom_hi, name=""):
        self.n = int(n)
        self.c1_i = _frozen(c1_i)
        self.c1_j = _frozen(c1_j)
        self.c1_w = _frozen(c1_w)
        self.dom_ptr = _frozen(dom_ptr)
        self.dom_lo = _frozen(dom_lo)
        self.dom_hi = _frozen(dom_hi)
        self.name = name
        if not (len(self.c1_i) == len(self.c1_j) == len(self.c1_w)):
            raise ValueError("constraint arrays differ in length")
        if len(self.dom_ptr) != self.n + 2:
            raise ValueError("dom_ptr must have n + 2 entries")
        if len(self.dom_lo) != len(self.dom_hi) or self.dom_ptr[-1] != len(self.dom_lo):
            raise ValueError("domain arrays are inconsistent with dom_ptr")

    @classmethod
    def from_lists(
        cls,
        n: int,
        c1: Iterable[tuple[int, int, int]] = (),
        domains: Mapping[int, Sequence[tuple[int, int]]] | None = None,
        name: str = "",
    ) -> "SdtpInstance":
        """Build an instance from plain Python data.

        Time-points missing from ``domains`` get ``[-H, H]`` with
        ``H = DEFAULT_HORIZON``.
        """
        c1 = list(c1)
        domains = dict(domains or {})
        ptr = [0, 0]
        lo: list[int] = []
        hi: list[int] = []
        for i in range(1, n + 1):
            ivs = domains.get(i)
            if ivs is None:
                ivs = [(-DEFAULT_HORIZON, DEFAULT_HORIZON)]
            for l, u in ivs:
                lo.append(int(l))
                hi.append(int(u))
            ptr.append(len(lo))
        arr = np.array(c1, dtype=np.int64).reshape(-1, 3)
        return cls(n, arr[:, 0], arr[:, 1], arr[:, 2], ptr, lo, hi, name=name)

    @property
    def m1(self) -> int:
        return len(self.c1_w)

    @property
    def omega(self) -> int:
        return len(self.dom_lo)

    @property
    def node_count(self) -> int:
        return self.n + 1

    def domain_count(self, i: int) -> int:
        return int(self.dom_ptr[i + 1] - self.dom_ptr[i])

    def domains(self, i: int) -> list[tuple[int, int]]:
        a, b = self.dom_ptr[i], self.dom_ptr[i + 1]
        return list(zip(self.dom_lo[a:b].tolist(), self.dom_hi[a:b].tolist()))

    def constraints(self) -> list[tuple[int, int, int]]:
        return list(zip(self.c1_i.tolist(), self.c1_j.tolist(), self.c1_w.tolist()))

    def lower_bounds(self) -> np.ndarray:
        """``L(D_i)`` for every time-point, index 0 holds 0 for the origin."""
        out = np.zeros(self.n + 1, dtype=np.int64)
        counts = np.diff(self.dom_ptr)[1:]
        has = counts > 0
        out[1:][has] = self.dom_lo[self.dom_ptr[1:-1][has]]
        return out

    def upper_bounds(self) -> np.ndarray:
        """``U(D_i)`` for every time-point, index 0 holds 0 for the origin."""
        out = np.zeros(self.n + 1, dtype=np.int64)
        counts = np.diff(self.dom_ptr)[1:]
        has = counts > 0
        out[1:][has] = self.dom_hi[self.dom_ptr[2:][has] - 1]
        return out

    def with_extra_constraints(self, extra: Iterable[tuple[int, int, int]], name=None) -> "SdtpInstance":
        extra = np.array(list(extra), dtype=np.int64).reshape(-1, 3)
        return SdtpInstance(
            self.n,
            np.concatenate([self.c1_i, extra[:, 0]]),
            np.concatenate([self.c1_j, extra[:, 1]]),
            np.concatenate([self.c1_w, extra[:, 2]]),
            self.dom_ptr,
            self.dom_lo,
            self.dom_hi,
            name=self.name if name is None else name,
        )

    def __eq__(self, other):
        if not isinstance(other, SdtpInstance):
            return NotImplemented
        return self.n == other.n and all(
            np.array_equal(getattr(self, a), getattr(other, a))
            for a in ("c1_i", "c1_j", "c1_w", "dom_ptr", "dom_lo", "dom_hi")
        )

    __hash__ = None

    def __repr__(self):
        return f"SdtpInstance(name={self.name!r}, n={self.n}, m1={self.m1}, omega={self.omega})"


@dataclass(frozen=True)
class InstanceStats:
    n: int
    m1: int
    K: int
    omega: int
    t_d: int


def stats(instance: SdtpInstance) -> InstanceStats:
    counts = np.diff(instance.dom_ptr)[1:]
    return InstanceStats(
        n=instance.n,
        m1=instance.m1,
        K=int(counts.max()) if len(counts) else 0,
        omega=int(counts.sum()),
        t_d=int((counts > 1).sum()),
    )


def global_bounds(intervals: Sequence[tuple[int, int]]) -> tuple[int, int]:
    """Outermost bounds ``[L, U]`` of an ascending interval list."""
    return intervals[0][0], intervals[-1][1]


@dataclass(frozen=True)
class Violation:
    rule: str
    time_point: int | None
    index: int | None
    message: str

    def __str__(self):
        return self.message


def validate(instance: SdtpInstance) -> list[Violation]:
    """Check well-formedness; returns an empty list for a valid instance."""
    out = []
    n = instance.n
    for k, (i, j, w) in enumerate(instance.constraints()):
        for tp in (i, j):
            if not 1 <= tp <= n:
                out.append(Violation("range", tp, k, f"constraint {k + 1}: time-point {tp} out of range [1,{n}]"))
        if i == j:
            kind = "vacuous" if w >= 0 else "infeasible"
            out.append(Violation("self-loop", i, k, f"constraint {k + 1}: self-constraint on {i} ({kind})"))
    ptr, lo, hi = instance.dom_ptr, instance.dom_lo, instance.dom_hi
    for i in range(1, n + 1):
        a, b = int(ptr[i]), int(ptr[i + 1])
        if a == b:
            out.append(Violation("empty", i, None, f"empty domain list at time-point {i}"))
            continue
        for c in range(a, b):
            if lo[c] > hi[c]:
                out.append(Violation("l>u", i, c - a + 1, f"l > u at time-point {i}, interval {c - a + 1}"))
            if c + 1 < b and hi[c] >= lo[c + 1]:
                out.append(
                    Violation(
                        "overlap",
                        i,
                        c - a + 1,
                        f"overlap/adjacency: u_{c - a + 1} >= l_{c - a + 2} at time-point {i}",
                    )
                )
    return out


@dataclass
class SolveOutcome:
    """Result of a solver run.

    ``schedule`` has length ``n + 1`` with ``schedule[0] == 0`` when the
    status is feasible, otherwise it is ``None``.
    """

    status: Status
    schedule: np.ndarray | None = None
    kind: ScheduleKind = ScheduleKind.UNSPECIFIED
    cause: Cause | None = None
    info: dict = field(default_factory=dict)

    @classmethod
    def feasible(cls, schedule, kind=ScheduleKind.UNSPECIFIED, **info):
        s = np.asarray(schedule, dtype=np.int64).copy()
        s[0] = 0
        return cls(Status.FEASIBLE, s, kind, None, info)

    @classmethod
    def infeasible(cls, cause: Cause, **info):
        return cls(Status.INFEASIBLE, None, ScheduleKind.UNSPECIFIED, cause, info)

    @classmethod
    def timed_out(cls, **info):
        return cls(Status.TIMED_OUT, info=info)

    @property
    def is_feasible(self) -> bool:
        return self.status is Status.FEASIBLE

    @property
    def is_infeasible(self) -> bool:
        return self.status is Status.INFEASIBLE

    @property
    def verdict(self) -> str:
        if self.status is Status.INFEASIBLE:
            return f"infeasible({self.cause.value})"
        return self.status.value

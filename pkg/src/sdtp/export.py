"""Text exports of the ILP and constraint-programming formulations.

Nothing is solved here.  Both exporters first build a small in-memory model
(which can also evaluate an assignment, handy for testing) and then render
it deterministically.

LP output follows the common CPLEX "LP file" grammar.  The ``.cpm`` grammar
is line based::

    var s<i> int
    diff-leq s<i> s<j> <w>          # s_i - s_j <= w
    or s<i> [l,u] [l,u] ...         # full model: s_i in one of the intervals
    bound s<i> <L> <U>              # simplified model: global bounds
    not-in s<i> {v v ...}           # simplified model: forbidden gap values
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .model import SdtpInstance

DEFAULT_GAP_CAP = 10**7


class CpForm(enum.Enum):
    FULL = "full"
    SIMPLIFIED = "simplified"


class ExportSizeError(ValueError):
    pass


def big_m(instance: SdtpInstance) -> tuple[np.ndarray, np.ndarray]:
    """Tightened ``(ML, MU)`` per time-point, index 0 unused."""
    ml = np.zeros(instance.n + 1, dtype=np.int64)
    mu = np.zeros(instance.n + 1, dtype=np.int64)
    ptr = instance.dom_ptr
    for i in range(1, instance.n + 1):
        lo = instance.dom_lo[ptr[i] : ptr[i + 1]]
        hi = instance.dom_hi[ptr[i] : ptr[i + 1]]
        ml[i] = lo.max() - lo.min()
        mu[i] = hi.max() - hi.min()
    return ml, mu


def gap_values(intervals) -> list[int]:
    """Integers strictly between consecutive intervals."""
    out = []
    for (_, u), (l, _) in zip(intervals, intervals[1:]):
        out.extend(range(u + 1, l))
    return out


def gap_volume(instance: SdtpInstance) -> int:
    starts = np.zeros(instance.omega, dtype=bool)
    ptr = instance.dom_ptr[:-1]
    starts[ptr[ptr < instance.omega]] = True
    gaps = instance.dom_lo[1:] - instance.dom_hi[:-1] - 1
    # pairs (k, k + 1) that straddle two time-points are not gaps
    return int(gaps[~starts[1:]].sum())


# ---------------------------------------------------------------- ILP


@dataclass
class Row:
    name: str
    coeffs: list  # (coefficient, variable)
    sense: str  # "<=", ">=", "="
    rhs: int

    def holds(self, values: dict) -> bool:
        lhs = sum(c * values[v] for c, v in self.coeffs)
        return {"<=": lhs <= self.rhs, ">=": lhs >= self.rhs, "=": lhs == self.rhs}[self.sense]

    def render(self) -> str:
        terms = []
        for k, (c, v) in enumerate((c, v) for c, v in self.coeffs if c):
            mag = "" if abs(c) == 1 else f"{abs(c)} "
            if k == 0:
                terms.append(f"{'-' if c < 0 else ''}{mag}{v}")
            else:
                terms.append(f"{'-' if c < 0 else '+'} {mag}{v}")
        return f" {self.name}: {' '.join(terms)} {self.sense} {self.rhs}"


@dataclass
class IlpModel:
    name: str
    continuous: list
    binaries: list
    rows: list = field(default_factory=list)

    def count(self, prefix: str) -> int:
        return sum(r.name.startswith(prefix) for r in self.rows)

    def satisfied(self, values: dict) -> bool:
        if any(values[b] not in (0, 1) for b in self.binaries):
            return False
        return all(r.holds(values) for r in self.rows)

    def to_lp(self) -> str:
        # feasibility model: the objective is a zero multiple of one variable
        out = [f"\\ {self.name}", "Minimize", f" obj: 0 {self.continuous[0]}" if self.continuous else " obj:",
               "Subject To"]
        out.extend(r.render() for r in self.rows)
        out.append("Bounds")
        out.extend(f" {v} free" for v in self.continuous)
        out.append("Binary")
        out.extend(f" {b}" for b in self.binaries)
        out.append("End")
        return "\n".join(out) + "\n"


def build_ilp(instance: SdtpInstance) -> IlpModel:
    n = instance.n
    ml, mu = big_m(instance)
    svar = [f"s{i}" for i in range(n + 1)]
    model = IlpModel(instance.name or "sdtp", svar[1:], [])
    for k, (i, j, w) in enumerate(instance.constraints()):
        model.rows.append(Row(f"t{k + 1}", [(1, svar[i]), (-1, svar[j])], "<=", w))
    for i in range(1, n + 1):
        xs = []
        for c, (l, u) in enumerate(instance.domains(i), start=1):
            x = f"x_{i}_{c}"
            xs.append(x)
            # l - ML (1 - x) <= s  and  s <= u + MU (1 - x)
            model.rows.append(Row(f"lo_{i}_{c}", [(1, svar[i]), (-int(ml[i]), x)], ">=", l - int(ml[i])))
            model.rows.append(Row(f"up_{i}_{c}", [(1, svar[i]), (int(mu[i]), x)], "<=", u + int(mu[i])))
        model.rows.append(Row(f"one_{i}", [(1, x) for x in xs], "=", 1))
        model.binaries.extend(xs)
    return model


def export_ilp(instance: SdtpInstance) -> str:
    return build_ilp(instance).to_lp()


# ---------------------------------------------------------------- CP


@dataclass
class CpModel:
    form: CpForm
    lines: list
    diffs: list  # (i, j, w)
    disjunctions: dict  # i -> intervals (full)
    bounds: dict  # i -> (L, U) (simplified)
    forbidden: dict  # i -> set of gap values (simplified)

    def satisfied(self, s) -> bool:
        if any(s[i] - s[j] > w for i, j, w in self.diffs):
            return False
        if self.form is CpForm.FULL:
            return all(any(l <= s[i] <= u for l, u in d) for i, d in self.disjunctions.items())
        return all(lo <= s[i] <= hi for i, (lo, hi) in self.bounds.items()) and \
            all(s[i] not in g for i, g in self.forbidden.items())

    def text(self) -> str:
        return "\n".join(self.lines) + "\n"


def build_cp(instance: SdtpInstance, form: CpForm | str = CpForm.FULL, gap_cap: int = DEFAULT_GAP_CAP) -> CpModel:
    form = CpForm(form)
    if form is CpForm.SIMPLIFIED:
        vol = gap_volume(instance)
        if vol > gap_cap:
            raise ExportSizeError(f"gap sets hold {vol} values, above the cap of {gap_cap}")
    n = instance.n
    lines = [f"# cpm 1 {form.value} {instance.name or 'sdtp'}"]
    lines.extend(f"var s{i} int" for i in range(1, n + 1))
    diffs = instance.constraints()
    lines.extend(f"diff-leq s{i} s{j} {w}" for i, j, w in diffs)
    model = CpModel(form, lines, diffs, {}, {}, {})
    for i in range(1, n + 1):
        d = instance.domains(i)
        if form is CpForm.FULL:
            model.disjunctions[i] = d
            lines.append(f"or s{i} " + " ".join(f"[{l},{u}]" for l, u in d))
        else:
            model.bounds[i] = (d[0][0], d[-1][1])
            lines.append(f"bound s{i} {d[0][0]} {d[-1][1]}")
            gaps = gap_values(d)
            if gaps:
                model.forbidden[i] = set(gaps)
                lines.append(f"not-in s{i} {{{' '.join(map(str, gaps))}}}")
    return model


def export_cp(instance: SdtpInstance, form: CpForm | str = CpForm.FULL, gap_cap: int = DEFAULT_GAP_CAP) -> str:
    return build_cp(instance, form, gap_cap).text()


def write_models(instance: SdtpInstance, directory, form: CpForm | str = CpForm.FULL,
                 gap_cap: int = DEFAULT_GAP_CAP) -> tuple[Path, Path]:
    """Write ``<name>.lp`` and ``<name>.cpm`` into ``directory``."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    stem = instance.name or "sdtp"
    lp = directory / f"{stem}.lp"
    cpm = directory / f"{stem}.cpm"
    lp.write_text(export_ilp(instance))
    cpm.write_text(export_cp(instance, form, gap_cap))
    return lp, cpm

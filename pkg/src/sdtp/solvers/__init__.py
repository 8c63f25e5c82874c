"""Solver registry with a common ``solve(instance, name, kind, budget)`` entry point."""
from __future__ import annotations

from ..model import ScheduleKind, SdtpInstance, SolveOutcome
from .bfdc import solve_bfdc
from .cra import solve_cra
from .ka import Variant, solve_ka
from .rult import solve_rult
from .ult import solve_ult

SOLVERS = ("bfdc", "rult", "ult", "cra", "kab", "kaj")
LATEST_CAPABLE = ("bfdc", "rult", "ult")


def solve(instance: SdtpInstance, name: str, kind: ScheduleKind = ScheduleKind.EARLIEST,
          budget=None) -> SolveOutcome:
    """Dispatch to a solver by name.

    ``kind`` is honoured by bfdc, rult and ult; cra always returns the
    earliest schedule and ka an unspecified one, so for those only
    ``EARLIEST`` is accepted.
    """
    name = name.lower()
    if name not in SOLVERS:
        raise ValueError(f"unknown solver {name!r}; choose from {', '.join(SOLVERS)}")
    kind = ScheduleKind(kind)
    if kind is ScheduleKind.LATEST and name not in LATEST_CAPABLE:
        raise ValueError(f"{name} cannot compute latest schedules")
    if name == "bfdc":
        return solve_bfdc(instance, kind, budget)
    if name == "rult":
        return solve_rult(instance, kind, budget)
    if name == "ult":
        return solve_ult(instance, kind, budget)
    if name == "cra":
        return solve_cra(instance, budget=budget)
    return solve_ka(instance, Variant(name), budget)


__all__ = ["LATEST_CAPABLE", "SOLVERS", "solve", "solve_bfdc", "solve_cra", "solve_ka", "solve_rult", "solve_ult"]

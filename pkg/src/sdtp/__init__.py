"""Solvers, generators and tooling for simple disjunctive temporal problems."""
from .io import InstanceFormatError, parse, read_instance, serialize, write_instance
from .model import (
    ALPHA,
    INF,
    Cause,
    InstanceStats,
    ScheduleKind,
    SdtpInstance,
    SolveOutcome,
    Status,
    Violation,
    stats,
    validate,
)
from .oracle import brute_force_solve, check_schedule, cross_check
from .solvers import LATEST_CAPABLE, SOLVERS, solve

__version__ = "0.1.0"

__all__ = [
    "ALPHA",
    "INF",
    "Cause",
    "InstanceFormatError",
    "InstanceStats",
    "LATEST_CAPABLE",
    "SOLVERS",
    "ScheduleKind",
    "SdtpInstance",
    "SolveOutcome",
    "Status",
    "Violation",
    "brute_force_solve",
    "check_schedule",
    "cross_check",
    "parse",
    "read_instance",
    "serialize",
    "solve",
    "stats",
    "validate",
    "write_instance",
]

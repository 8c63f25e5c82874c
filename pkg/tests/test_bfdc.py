import numpy as np
import pytest

from helpers import EX1, EX2, EX3
from sdtp.generators import GenConfig, generate
from sdtp.model import Cause, ScheduleKind, SdtpInstance, Status
from sdtp.oracle import brute_force_solve, check_schedule
from sdtp.solvers.bfdc import domain_check, solve_bfdc

# oracle values for EX1, computed by enumerating both interval choices of
# time-point 1 and frozen here
EX1_EARLIEST = [0, 8, 9]
EX1_LATEST = [0, 10, 12]


def test_frozen_ex1_values_match_oracle():
    res = brute_force_solve(EX1)
    assert res.earliest == EX1_EARLIEST
    assert res.latest == EX1_LATEST


def test_ex1_earliest():
    out = solve_bfdc(EX1)
    assert out.is_feasible and out.kind is ScheduleKind.EARLIEST
    assert out.schedule.tolist() == EX1_EARLIEST


def test_ex1_latest():
    out = solve_bfdc(EX1, ScheduleKind.LATEST)
    assert out.schedule.tolist() == EX1_LATEST


def test_ex2_domain_exhausted():
    assert brute_force_solve(EX2).outcome.is_infeasible
    out = solve_bfdc(EX2)
    assert out.cause is Cause.DOMAIN_EXHAUSTED


def test_ex3_negative_cycle():
    assert solve_bfdc(EX3).cause is Cause.NEGATIVE_CYCLE
    assert solve_bfdc(EX3, ScheduleKind.LATEST).cause is Cause.NEGATIVE_CYCLE


def test_path_threshold_counts_the_origin():
    # a shortest path alpha -> 1 -> 2 uses two arcs with n = 2; a threshold
    # of |T| would misreport this feasible instance as a negative cycle
    inst = SdtpInstance.from_lists(2, [(1, 2, -1)], {1: [(5, 5)], 2: [(0, 100)]})
    assert brute_force_solve(inst).earliest == [0, 5, 6]
    assert solve_bfdc(inst).schedule.tolist() == [0, 5, 6]


def dc_arrays(intervals):
    lo = np.array([l for l, _ in intervals], dtype=np.int64)
    hi = np.array([u for _, u in intervals], dtype=np.int64)
    ptr = np.array([0, 0, len(intervals)], dtype=np.int64)
    return ptr, lo, hi


def test_domain_check_advances():
    ptr, lo, hi = dc_arrays([(0, 2), (8, 10)])
    tau = np.array([0, -5], dtype=np.int64)
    pi = np.array([0, 3], dtype=np.int64)
    z = np.array([0, 0], dtype=np.int64)
    assert domain_check(1, tau, pi, z, ptr, lo, hi)
    assert (z[1], tau[1], pi[1]) == (1, -8, 1)  # second interval, 0-based


def test_domain_check_inside_is_noop():
    ptr, lo, hi = dc_arrays([(0, 2), (8, 10)])
    tau = np.array([0, -1], dtype=np.int64)
    pi = np.array([0, 2], dtype=np.int64)
    z = np.array([0, 0], dtype=np.int64)
    assert domain_check(1, tau, pi, z, ptr, lo, hi)
    assert (z[1], tau[1], pi[1]) == (0, -1, 2)


def test_domain_check_past_last_interval():
    ptr, lo, hi = dc_arrays([(0, 2)])
    tau = np.array([0, -7], dtype=np.int64)
    z = np.zeros(2, dtype=np.int64)
    assert not domain_check(1, tau, np.zeros(2, dtype=np.int64), z, ptr, lo, hi)


def test_prebuilt_graph_direction_is_checked():
    from sdtp.graph import Direction, build_graph

    with pytest.raises(AssertionError):
        solve_bfdc(EX1, ScheduleKind.LATEST, graph=build_graph(EX1, Direction.DIRECT))


def test_timeout_reports_timed_out():
    inst = generate(GenConfig("rand", 20000, 120000, 10, 3)).instance
    out = solve_bfdc(inst, budget=1e-9)
    assert out.status is Status.TIMED_OUT
    full = solve_bfdc(inst)
    assert full.is_feasible and not check_schedule(inst, full.schedule)

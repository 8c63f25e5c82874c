import numpy as np

from helpers import EX1, EX2, EX3
from sdtp.model import INF, Cause, ScheduleKind, Status
from sdtp.solvers.bfdc import solve_bfdc
from sdtp.solvers.ult import NEG_INF, PairBoundaryTable, load_matrix, solve_ult, tighten_iteration


def fresh(inst):
    d = np.full((inst.n + 1, inst.n + 1), INF, dtype=np.int64)
    np.fill_diagonal(d, 0)
    return PairBoundaryTable.from_instance(inst), d


def test_ex1_matches_bfdc():
    for kind in (ScheduleKind.EARLIEST, ScheduleKind.LATEST):
        assert solve_ult(EX1, kind).schedule.tolist() == solve_bfdc(EX1, kind).schedule.tolist()


def test_ex2_infeasible():
    # s_2 <= s_1 + 5 <= 15 < 20: with global bounds on the origin arcs the
    # first shortest-path pass already closes a negative cycle through the origin
    assert solve_ult(EX2).cause is Cause.NEGATIVE_CYCLE


def test_ex3_negative_cycle():
    assert solve_ult(EX3).cause is Cause.NEGATIVE_CYCLE


def test_first_iteration_removes_low_interval():
    table, d = fresh(EX1)
    changed, cause = tighten_iteration(table, d, EX1)
    assert changed and cause is None
    assert table.origin.intervals(EX1, 1) == [(8, 10)]


def test_fixpoint_reports_no_change():
    table, d = fresh(EX1)
    while tighten_iteration(table, d, EX1)[0]:
        pass
    assert tighten_iteration(table, d, EX1) == (False, None)


def test_one_sided_pair_keeps_sentinel_inert():
    table, d = fresh(EX1)
    # only s_2 - s_1 <= 5 is stated; the reverse side starts unbounded
    assert table.hi.tolist() == [5] and table.lo.tolist() == [NEG_INF]
    load_matrix(table, d)
    assert d[1, 2] == 5 and d[2, 1] == INF
    tighten_iteration(table, d, EX1)
    assert table.hi[0] <= 5


def test_timeout():
    from sdtp.generators import GenConfig, generate

    inst = generate(GenConfig("rand", 800, 4800, 10, 2)).instance
    assert solve_ult(inst, budget=1e-3).status is Status.TIMED_OUT

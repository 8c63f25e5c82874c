import numpy as np
import pytest

from helpers import EX1, EX2, EX3
from sdtp.graph import Direction, build_graph, johnson_apsp
from sdtp.model import Cause, ScheduleKind, SdtpInstance
from sdtp.oracle import check_schedule
from sdtp.solvers.ka import (
    ConflictCapExceeded,
    FlowNetwork,
    Variant,
    build_conflicts,
    dinic_max_flow,
    extract_selection,
    solve_ka,
)


def delta_of(inst):
    return johnson_apsp(build_graph(inst, Direction.REVERSE))


@pytest.mark.parametrize("variant", list(Variant))
def test_ex1_feasible(variant):
    out = solve_ka(EX1, variant)
    assert out.is_feasible and out.kind is ScheduleKind.UNSPECIFIED
    assert check_schedule(EX1, out.schedule) == []
    # tp1 takes its second interval, tp2 its only one
    assert out.info["selection"].tolist() == [-1, 1, 2]


@pytest.mark.parametrize("variant", list(Variant))
def test_ex3_negative_cycle(variant):
    assert solve_ka(EX3, variant).cause is Cause.NEGATIVE_CYCLE


def test_ex2_infeasible():
    assert solve_ka(EX2).is_infeasible


def test_same_time_point_intervals_conflict():
    inst = SdtpInstance.from_lists(1, [], {1: [(0, 2), (8, 10)]})
    iv, a, b = build_conflicts(delta_of(inst), inst)
    assert (0, 1) in set(zip(a.tolist(), b.tolist()))


def test_ex1_cross_conflict_without_size1_pruning():
    # a low interval on tp2 keeps tp1's [0,2] alive; 2 + 5 - 9 < 0 then
    # puts an arc from it to tp2's [9,12]
    inst = SdtpInstance.from_lists(2, [(2, 1, 5)], {1: [(0, 2), (8, 10)], 2: [(3, 4), (9, 12)]})
    iv, a, b = build_conflicts(delta_of(inst), inst)
    names = {(int(iv.owner[e]), int(iv.index[e])) for e in range(len(iv))}
    assert (1, 0) in names
    pairs = {(int(iv.index[x]), int(iv.index[y])) for x, y in zip(a, b)}
    assert (0, 3) in pairs


def test_ex1_size1_removes_low_interval():
    iv, a, b = build_conflicts(delta_of(EX1), EX1)
    assert iv.index.tolist() == [1, 2]
    assert len(a) == 0


def test_far_apart_points_have_no_cross_conflicts():
    inst = SdtpInstance.from_lists(2, [], {1: [(0, 2), (8, 10)], 2: [(0, 1), (5, 6)]})
    iv, a, b = build_conflicts(delta_of(inst), inst)
    assert all(iv.owner[x] == iv.owner[y] for x, y in zip(a, b))


def test_conflict_cap():
    inst = SdtpInstance.from_lists(1, [], {1: [(0, 2), (8, 10), (20, 30)]})
    with pytest.raises(ConflictCapExceeded):
        build_conflicts(delta_of(inst), inst, cap=1)


def test_flow_empty():
    flow, reach = dinic_max_flow(FlowNetwork.build(3, [], []))
    assert flow == 0 and reach[1:4].all()


def test_flow_single_pair():
    assert dinic_max_flow(FlowNetwork.build(2, [0], [1]))[0] == 1


def brute_matching(m, pairs):
    best = 0
    for mask in range(1 << len(pairs)):
        chosen = [p for k, p in enumerate(pairs) if mask >> k & 1]
        if len({a for a, _ in chosen}) == len({b for _, b in chosen}) == len(chosen):
            best = max(best, len(chosen))
    return best


def test_flow_complete_three_by_three():
    pairs = [(a, b) for a in range(3) for b in range(3)]
    assert brute_matching(3, pairs) == 3
    a, b = zip(*pairs)
    assert dinic_max_flow(FlowNetwork.build(3, a, b))[0] == 3


def test_flow_matches_brute_force_on_random_graphs():
    g = np.random.default_rng(5)
    for _ in range(40):
        m = int(g.integers(1, 6))
        pairs = sorted({(int(x), int(y)) for x, y in g.integers(0, m, size=(int(g.integers(0, 9)), 2))})
        a = [p[0] for p in pairs]
        b = [p[1] for p in pairs]
        assert dinic_max_flow(FlowNetwork.build(m, a, b))[0] == brute_matching(m, pairs)


def test_selection_for_ex1():
    iv, a, b = build_conflicts(delta_of(EX1), EX1)
    _, reach = dinic_max_flow(FlowNetwork.build(len(iv), a, b))
    assert extract_selection(reach, iv, EX1.n).tolist() == [-1, 1, 2]


def test_fully_conflicted_cover_too_small():
    # each time-point keeps two intervals; every interval conflicts with
    # every other, so the cover leaves fewer than one per time-point
    iv_owner = np.array([1, 1, 2, 2])
    from sdtp.solvers.ka import IntervalSet

    iv = IntervalSet(iv_owner, np.arange(4), np.zeros(4, np.int64), np.zeros(4, np.int64))
    pairs = [(x, y) for x in range(4) for y in range(4) if x != y]
    a, b = zip(*pairs)
    _, reach = dinic_max_flow(FlowNetwork.build(4, a, b))
    assert extract_selection(reach, iv, 2) is None

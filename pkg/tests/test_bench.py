import math

import pytest

from helpers import EX1, EX3
from sdtp.bench import (
    SUMMARY_COLUMNS,
    BenchRecord,
    load_corpus,
    plot_data,
    read_records,
    run_bench,
    summarize,
    write_plot_data,
    write_records,
    write_summary,
)
from sdtp.generators import GenConfig, generate
from sdtp.io import write_instance
from sdtp.model import SdtpInstance


def rec(solver, us, timed_out=False, instance="i", rep=0):
    return BenchRecord(solver, instance, rep, "timed-out" if timed_out else "feasible", us, timed_out)


def test_record_count_is_a_product():
    inst3 = SdtpInstance.from_lists(1, [], {1: [(0, 1)]}, name="one")
    recs = run_bench([EX1, EX3, inst3], ["bfdc", "rult"], repetitions=20)
    assert len(recs) == 120
    assert {(r.solver, r.instance, r.rep) for r in recs} == {
        (s, i, k) for s in ("bfdc", "rult") for i in ("ex1", "ex3", "one") for k in range(20)
    }


def test_verdicts_repeat():
    a = run_bench([EX1, EX3], ["cra", "kaj"], repetitions=2)
    b = run_bench([EX1, EX3], ["cra", "kaj"], repetitions=2)
    assert [r.outcome for r in a] == [r.outcome for r in b]


def test_timeouts_are_recorded():
    big = generate(GenConfig("rand", 800, 4800, 10, seed=1)).instance
    (r,) = run_bench([big], ["ult"], time_limit=1e-3, repetitions=1)
    assert r.timed_out and r.outcome == "timed-out"


def test_isolated_runs(tmp_path):
    recs = run_bench([EX1], ["bfdc"], repetitions=2, isolate=True)
    assert [r.outcome for r in recs] == ["feasible", "feasible"]


def test_bad_files_are_skipped(tmp_path, caplog):
    write_instance(EX1, tmp_path / "good.sdtp")
    (tmp_path / "bad.sdtp").write_text("p sdtp x\n")
    (tmp_path / "invalid.sdtp").write_text("p sdtp 1 0 1\nd 1 1 5 3\n")
    insts = load_corpus(tmp_path)
    assert [i.name for i in insts] == ["good"]
    assert "bad.sdtp" in caplog.text and "invalid.sdtp" in caplog.text


def test_single_record_summary():
    (row,) = summarize([rec("bfdc", 5000)])
    assert (row.max_ms, row.avg_ms, row.std_ms, row.timeouts_pct) == (5.0, 5.0, 0.0, 0.0)


def test_population_std():
    (row,) = summarize([rec("bfdc", 2000), rec("bfdc", 4000, rep=1)])
    assert row.avg_ms == 3.0 and row.std_ms == 1.0


def test_all_timeouts_count_at_limit():
    recs = [rec("ult", 2_345_000, True, rep=k) for k in range(4)]
    (row,) = summarize(recs, time_limit=2.0)
    assert row.total_s == pytest.approx(8.0) and row.timeouts_pct == 100.0
    assert math.isnan(row.avg_ms_solved)


def test_average_without_timeouts():
    (row,) = summarize([rec("x", 1000), rec("x", 3_000_000, True, rep=1)], time_limit=2.0)
    assert row.avg_ms == pytest.approx(1000.5) and row.avg_ms_solved == 1.0


def test_empty_summary():
    assert summarize([]) == []


def test_csv_files(tmp_path):
    recs = [rec("bfdc", 10), rec("rult", 20, True)]
    write_records(recs, tmp_path / "r.csv")
    assert read_records(tmp_path / "r.csv") == recs
    assert (tmp_path / "r.csv").read_text().splitlines()[0] == "solver,instance,rep,outcome,elapsed_us,timed_out,iterations"
    write_summary(summarize(recs), tmp_path / "s.csv")
    lines = (tmp_path / "s.csv").read_text().splitlines()
    assert lines[0].startswith("# std: population")
    assert lines[1] == ",".join(SUMMARY_COLUMNS)
    assert lines[1] == "Method,Max. time (ms),Avg. time (ms),Std. time (ms),Total time (s),Timeouts (%)"


def test_plot_data_groups_by_axis(tmp_path):
    manifest = {
        "a": {"family": "rand", "n": 100, "m1": 600},
        "b": {"family": "rand", "n": 200, "m1": 1200},
    }
    recs = [rec("bfdc", 10, instance="a"), rec("bfdc", 30, instance="a", rep=1), rec("bfdc", 50, instance="b"),
            rec("bfdc", 70, instance="zzz")]
    rows = plot_data(recs, manifest, "nodes")
    assert [(r["x"], r["avg_us"], r["runs"]) for r in rows] == [(100, 20.0, 2), (200, 50.0, 1)]
    dens = plot_data(recs, manifest, "density")
    assert [r["x"] for r in dens] == [round(100 * 1200 / 39800, 3), round(100 * 600 / 9900, 3)]
    write_plot_data(rows, tmp_path / "p.csv")
    assert (tmp_path / "p.csv").read_text().startswith("subset,group,x,solver")


def test_records_carry_tightening_rounds(tmp_path):
    recs = run_bench([EX1], ["rult", "bfdc"], time_limit=None, repetitions=1)
    by = {r.solver: r for r in recs}
    assert by["rult"].iterations >= 1 and by["bfdc"].iterations == -1
    path = tmp_path / "r.csv"
    write_records(recs, path)
    assert read_records(path) == recs

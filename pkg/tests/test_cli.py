import json

import pytest

from helpers import EX1_TEXT, EX3_TEXT
from sdtp.cli import main


@pytest.fixture
def files(tmp_path):
    (tmp_path / "ex1.sdtp").write_text(EX1_TEXT)
    (tmp_path / "ex3.sdtp").write_text(EX3_TEXT)
    return tmp_path


def test_solve_feasible(files, capsys):
    assert main(["solve", "--algorithm", "bfdc", "--input", str(files / "ex1.sdtp")]) == 0
    out = capsys.readouterr().out
    assert out.startswith("feasible\nschedule: 8 9\n")


def test_solve_infeasible(files, capsys):
    assert main(["solve", "--algorithm", "bfdc", "--input", str(files / "ex3.sdtp")]) == 1
    assert capsys.readouterr().out.startswith("infeasible(negative-cycle)")


def test_solve_json(files, capsys):
    assert main(["solve", "--input", str(files / "ex1.sdtp"), "--schedule", "latest", "--output", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["verdict"] == "feasible" and doc["schedule"] == [10, 12] and doc["solver"] == "bfdc"
    assert doc["stats"] == {"n": 2, "m1": 1, "K": 2, "omega": 3, "t_d": 1}
    assert isinstance(doc["elapsed_us"], int)


@pytest.mark.parametrize("algo", ["cra", "kab", "kaj"])
def test_latest_rejected(files, capsys, algo):
    assert main(["solve", "--algorithm", algo, "--schedule", "latest", "--input", str(files / "ex1.sdtp")]) == 2
    assert "not supported" in capsys.readouterr().err


def test_timeout_exit_code(tmp_path, capsys):
    out = tmp_path / "big.sdtp"
    assert main(["generate", "rand", "--n", "800", "--m1", "4800", "--seed", "1", "--out", str(out)]) == 0
    assert main(["solve", "--algorithm", "ult", "--time-limit", "1", "--input", str(out)]) == 3
    assert "timed-out" in capsys.readouterr().out


def test_usage_errors(files, capsys):
    assert main(["solve", "--bogus"]) == 2
    assert main([]) == 2
    assert main(["solve", "--input", str(files / "missing.sdtp")]) == 2
    (files / "bad.sdtp").write_text("p sdtp 2 0 0\nq\n")
    assert main(["solve", "--input", str(files / "bad.sdtp")]) == 2
    assert "unknown line type" in capsys.readouterr().err


def test_generate_twice_is_identical(tmp_path):
    args = ["generate", "rand", "--n", "100", "--m1", "600", "--td", "0.8", "--k", "10", "--seed", "7"]
    main(args + ["--out", str(tmp_path / "a.sdtp")])
    main(args + ["--out", str(tmp_path / "b.sdtp")])
    assert (tmp_path / "a.sdtp").read_bytes() == (tmp_path / "b.sdtp").read_bytes()


def test_generate_negcycle_with_manifest(tmp_path, capsys):
    out = tmp_path / "nc.sdtp"
    man = tmp_path / "m.jsonl"
    rc = main(["generate", "seq", "--n", "100", "--m1", "600", "--seed", "3", "--negcycle", "nc04",
               "--out", str(out), "--manifest", str(man)])
    assert rc == 0
    entry = json.loads(man.read_text())
    assert entry["negcycle"] == "nc04" and entry["family"] == "seq"
    assert main(["solve", "--input", str(out)]) == 1


def test_generate_sizing_error(capsys):
    assert main(["generate", "grid", "--n", "30", "--m1", "200"]) == 2


def test_verify(files, capsys):
    (files / "good.txt").write_text("8 9\n")
    (files / "full.txt").write_text("0 8 9\n")
    (files / "bad.txt").write_text("5 9\n")
    (files / "short.txt").write_text("5\n")
    ex1 = str(files / "ex1.sdtp")
    assert main(["verify", "--input", ex1, "--schedule", str(files / "good.txt")]) == 0
    assert main(["verify", "--input", ex1, "--schedule", str(files / "full.txt")]) == 0
    assert main(["verify", "--input", ex1, "--schedule", str(files / "bad.txt")]) == 1
    assert "5 lies in no interval" in capsys.readouterr().out
    assert main(["verify", "--input", ex1, "--schedule", str(files / "short.txt")]) == 2


def test_crosscheck(files, capsys):
    assert main(["crosscheck", "--input", str(files / "ex1.sdtp"), "--oracle"]) == 0
    out = capsys.readouterr().out
    assert "verdicts agree: True" in out and "oracle: feasible" in out
    assert main(["crosscheck", "--input", str(files / "ex1.sdtp"), "--solvers", "bfdc,nope"]) == 2


def test_bench(files, capsys):
    rc = main(["bench", "--corpus", str(files), "--solvers", "bfdc,cra", "--reps", "3",
               "--out", str(files / "r.csv"), "--summary", str(files / "s.csv")])
    assert rc == 0
    assert len((files / "r.csv").read_text().splitlines()) == 1 + 2 * 2 * 3
    assert (files / "s.csv").read_text().splitlines()[1].startswith("Method,Max. time (ms)")
    assert main(["bench", "--corpus", str(files / "nothing")]) == 2


@pytest.mark.parametrize("fmt, needle", [("lp", "Subject To"), ("cp", "or s1 [0,2] [8,10]"),
                                         ("scp", "not-in s1 {3 4 5 6 7}")])
def test_export(files, capsys, fmt, needle):
    assert main(["export-model", "--format", fmt, "--input", str(files / "ex1.sdtp")]) == 0
    assert needle in capsys.readouterr().out


def test_export_to_file(files):
    out = files / "m.lp"
    assert main(["export-model", "--format", "lp", "--input", str(files / "ex1.sdtp"), "--out", str(out)]) == 0
    assert out.read_text().endswith("End\n")

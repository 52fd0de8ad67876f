import json
import os

import pytest

from qtetra.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_r_elem_json(capsys):
    code, out, _ = run(capsys, "r-elem", "--in", "3,1,4", "--out", "0,4,1")
    assert code == EXIT_OK
    d = json.loads(out)
    assert d["details"][0]["value"] == [[2, "-1"], [6, "1"], [8, "1"], [10, "1"],
                                        [12, "-1"], [14, "-1"], [16, "-1"], [20, "1"]]


def test_k_elem_slice_text(capsys):
    code, out, _ = run(capsys, "k-elem", "--in", "2110", "--format", "text")
    assert code == EXIT_OK and len(out.splitlines()) == 6
    assert "2110 -> 4003: q^4" in out


def test_k_elem_reversed(capsys):
    code, out, _ = run(capsys, "k-elem", "--in", "0,1,1,2", "--out", "3,0,0,4", "--reversed")
    assert json.loads(out)["details"][0]["value"] == [[4, "1"]]


def test_comb(capsys):
    assert run(capsys, "comb-r", "--state", "314", "--format", "text")[1].strip() == "1 3 2"
    assert run(capsys, "comb-k", "--state", "3,0,1,1", "--format", "text")[1].strip() == "2 1 1 0"


def test_verify_te_comb(capsys):
    code, out, _ = run(capsys, "verify", "te", "--state", "3,1,4,5,1,6", "--mode", "comb")
    d = json.loads(out)
    assert code == EXIT_OK and d["pass"] and d["details"][-1]["final"] == "515327"


def test_verify_f4_csv_and_plot(capsys, tmp_path):
    code, out, _ = run(capsys, "verify", "f4", "--trunc", "6", "--format", "csv",
                       "--plot-dir", str(tmp_path))
    assert code == EXIT_OK
    row = out.splitlines()[1].split(",")
    assert "533" in row
    files = os.listdir(tmp_path)
    assert "report.csv" in files and any(f.endswith(".png") for f in files)


def test_usage_errors_are_distinct(capsys):
    assert run(capsys, "verify", "te", "--state", "3,1,4")[0] == EXIT_USAGE
    assert run(capsys, "r-elem", "--in", "3,-1,4")[0] == EXIT_USAGE
    assert run(capsys, "verify", "suites", "--trunc", "3")[0] == EXIT_USAGE
    assert run(capsys, "verify", "te", "--state", "000000", "--mode", "comb", "--trunc", "2")[0] == EXIT_USAGE
    assert run(capsys, "verify", "intertwining", "--rel", "19")[0] == EXIT_USAGE
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == EXIT_USAGE


def test_verification_failure_exit(capsys, monkeypatch):
    from qtetra import tensorop
    left, right = tensorop.INTERTWINING[(2, 3)]
    monkeypatch.setitem(tensorop.INTERTWINING, (2, 3), (left, right[:-1]))
    code, out, _ = run(capsys, "verify", "intertwining", "--rel", "23", "--bound", "1", "--format", "text")
    assert code == EXIT_FAIL and out.startswith("FAIL")


def test_deterministic_output(capsys):
    args = ("verify", "birational", "--seed", "5", "--samples", "32", "--bound", "3", "--no-timing")
    a = run(capsys, *args)
    b = run(capsys, *args)
    assert a[0] == EXIT_OK and a[1] == b[1]


def test_jobs_do_not_change_results(capsys):
    base = ("verify", "rb", "--state", "0,1,1,1,0,1,0,0,1", "--no-timing")
    a = run(capsys, *base, "--jobs", "1")[1]
    b = run(capsys, *base, "--jobs", "2")[1]
    assert a == b


def test_suites_text(capsys):
    code, out, _ = run(capsys, "verify", "suites", "--bound", "1", "--format", "text")
    assert code == EXIT_OK and out.count("PASS") == 15

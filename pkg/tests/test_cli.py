"""Command line client: output formats, spec'd example values, exit codes."""

import csv
import io
import json

import pytest

from smoothfq.cli import main


def run(capsys, *argv):
    try:
        code = main(list(argv))
    except SystemExit as e:
        code = e.code
    out = capsys.readouterr()
    return code, out.out, out.err


def test_count_json_and_cross_method(capsys):
    code, out, _ = run(
        capsys, "count", "--q", "2", "--n", "8", "--m", "3",
        "--prescribe", "0=1", "--method", "both",
    )
    assert code == 0
    body = json.loads(out)
    assert body["exact"] == 17 and body["parseval"] == 17 and body["agree"]
    assert body["schema"] == 1


def test_rho_prints_value(capsys):
    code, out, _ = run(capsys, "rho", "--u", "2")
    assert code == 0
    assert out.strip() == "0.306852819440"


def test_rho_json_flag(capsys):
    code, out, _ = run(capsys, "rho", "--u", "7.5", "--json")
    body = json.loads(out)
    assert code == 0
    assert body["value"] == pytest.approx(1.7178674920339722e-07, rel=1e-9)


def test_verify_gauss_example(capsys):
    code, out, _ = run(capsys, "verify", "gauss", "--q", "2", "--l", "1", "--g", "0,1")
    assert code == 0
    body = json.loads(out)
    assert body["passed"] and body["lhs"] == 2.0 and body["rhs"] == 2.0


def test_verify_suite_pass_and_fail_codes(capsys):
    code, out, _ = run(capsys, "verify", "dickman", "--small")
    assert code == 0
    assert out.startswith("PASS dickman")
    # char_bound asserts the displayed lemma bound, which has counterexamples
    code, out, _ = run(capsys, "verify", "char_bound", "--small")
    assert code == 2
    assert out.startswith("FAIL char_bound")


def test_scan_csv(capsys):
    code, out, _ = run(
        capsys, "scan", "--q", "3", "--ns", "12", "--ms", "4,6", "--prescribe", "1=0"
    )
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0][:4] == ["q", "n", "m", "prescription"]
    assert len(rows) == 3
    assert rows[1][rows[0].index("exact")] == "18369"


def test_predict_command(capsys):
    code, out, _ = run(
        capsys, "predict", "--q", "2", "--n", "24", "--m", "12", "--prescribe", "0=1",
        "--variant", "thm1",
    )
    body = json.loads(out)
    assert code == 0
    assert body["variant"] == "thm1"
    assert body["lambda0"] == 0.0 and body["corrected"] == body["main"]


def test_charsum_and_lpoly(capsys):
    code, out, _ = run(
        capsys, "charsum", "--q", "2", "--l", "0", "--g", "1,1,1", "--chi", "1",
        "--kind", "irreducibles", "--n", "6",
    )
    assert code == 0
    assert json.loads(out)["magnitude"] < 1e-9
    code, out, _ = run(capsys, "lpoly", "--q", "2", "--l", "1", "--g", "1,1", "--chi", "1")
    assert code == 0
    assert json.loads(out)["unit_root_count"] == 1


def test_domain_error_exit_code(capsys):
    code, out, err = run(capsys, "count", "--q", "2", "--n", "10", "--m", "0")
    assert code == 1
    assert "error" in err.lower()
    # delta on the boundary is rejected by the predictor
    code, _, err = run(capsys, "predict", "--q", "2", "--n", "10", "--m", "4",
                       "--prescribe", "0=1")
    assert code == 1


def test_usage_error_exit_code(capsys):
    code, _, _ = run(capsys, "count", "--q", "2", "--n", "8")  # missing --m
    assert code == 1
    code, _, _ = run(capsys, "frobnicate")
    assert code == 1


def test_budget_error_exit_code(capsys):
    code, _, err = run(
        capsys, "count", "--q", "2", "--n", "12", "--m", "3",
        "--method", "enumeration", "--table-budget", "4", "--budget", "4",
    )
    assert code == 1
    assert "budget" in err.lower()


def test_determinism_byte_identical(capsys):
    args = ("scan", "--q", "2", "--ns", "12,14", "--ms", "3", "--prescribe", "1=1")
    _, out1, _ = run(capsys, *args)
    _, out2, _ = run(capsys, *args)
    assert out1 == out2

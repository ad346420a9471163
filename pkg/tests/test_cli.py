import io
import json
import subprocess
import sys

import pytest

from hermiq.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def test_table_json():
    code, out, _ = call("table", "--max-m", "1", "--max-n", "1")
    assert code == EXIT_OK
    data = json.loads(out)
    assert {"m": 1, "n": 1, "terms": [[1, 1, 1, 1], [0, 0, -1, 1]]} in data
    assert len(data) == 4


def test_table_text():
    code, out, _ = call("table", "--max-m", "2", "--max-n", "1", "--format", "text")
    assert code == EXIT_OK
    assert "H[2,1] = q^2*qb - 2*q" in out.splitlines()


def test_eval_constant():
    code, out, _ = call("eval", "--m", "0", "--n", "0", "--q", "1,2,3,4")
    data = json.loads(out)
    assert code == EXIT_OK and data["value"] == [1.0, 0.0, 0.0, 0.0]
    assert set(data["routes"]) == {"explicit", "laguerre", "realhermite"}


@pytest.mark.parametrize("via", ["explicit", "laguerre", "realhermite"])
def test_eval_routes_agree(via):
    code, out, _ = call("eval", "--m", "3", "--n", "2", "--q", "0.5,1,-1,0.3", "--via", via)
    data = json.loads(out)
    assert code == EXIT_OK and data["status"] == "pass" and data["via"] == via


def test_check_nielsen():
    code, out, _ = call("check", "--suite", "nielsen", "--max", "3")
    data = json.loads(out)
    assert code == EXIT_OK and data["failed"] == 0 and data["checks"] > 0


@pytest.mark.parametrize("suite", ["lowering", "recurrence", "eigen", "burchnall", "opcor", "linearize", "runge"])
def test_check_suites(suite):
    code, out, _ = call("check", "--suite", suite, "--max", "2", "--seed", "4")
    assert code == EXIT_OK, out[:500]


def test_ortho_csv():
    code, out, _ = call("ortho", "--measure", "slice", "--max", "2")
    lines = out.strip().splitlines()
    assert code == EXIT_OK
    assert lines[0] == "m,n,j,k,re,im1,im2,im3,expected,rel_err"
    assert len(lines) == 1 + 9 * 9


def test_ortho_with_too_few_nodes_fails():
    code, out, _ = call("ortho", "--measure", "slice", "--max", "4", "--nodes", "3")
    assert code == EXIT_FAIL and out.startswith("m,n,j,k")


def test_ortho_lebesgue_has_no_expected_column():
    code, out, _ = call("ortho", "--measure", "lebesgue", "--max", "1", "--nodes", "8")
    assert code == EXIT_OK
    assert out.splitlines()[1].endswith(",,")


@pytest.mark.parametrize(
    "which", ["diagonal", "slice", "xu", "ubaru", "star", "realhermite", "bilinear", "ga", "heat"]
)
def test_genfun_default_arguments_pass(which):
    code, out, _ = call("genfun", "--which", which)
    data = json.loads(out)
    assert code == EXIT_OK and data["status"] == "pass", data


def test_genfun_truncated_too_early_fails():
    code, out, _ = call("genfun", "--which", "ga", "--order", "2")
    assert code == EXIT_FAIL and json.loads(out)["status"] == "fail"


@pytest.mark.parametrize(
    "argv",
    [
        ["genfun", "--which", "diagonal", "--lam", "1.5"],
        ["genfun", "--which", "slice", "--u", "0,1,0,0"],
        ["bogus"],
        ["table", "--max-m", "-1", "--max-n", "1"],
        ["eval", "--m", "1", "--n", "1", "--q", "1,2,3"],
        ["check", "--suite", "unknown"],
        ["ortho", "--measure", "slice", "--nodes", "0"],
        ["witness"],
        [],
    ],
)
def test_usage_errors(argv):
    code, _, _ = call(*argv)
    assert code == EXIT_USAGE


def test_bad_thread_setting(monkeypatch):
    monkeypatch.setenv("HERMIQ_THREADS", "many")
    code, _, err = call("table", "--max-m", "0", "--max-n", "0")
    assert code == EXIT_USAGE and "HERMIQ_THREADS" in err


def test_witness_reports():
    code, out, _ = call("witness", "--lebesgue")
    data = json.loads(out)
    assert code == EXIT_OK and data["lebesgue_rel_err"] <= 1e-8
    code, out, _ = call("witness", "--runge")
    data = json.loads(out)
    assert code == EXIT_OK and data["slice_ok"]
    assert data["witness"]["discrepancy"] == pytest.approx([0.0, 0.0, 0.0, 2.0], abs=1e-12)


def test_output_is_deterministic():
    a = call("witness", "--runge", "--seed", "7")[1]
    b = call("witness", "--runge", "--seed", "7")[1]
    assert a == b
    a = call("genfun", "--which", "star", "--side", "left")[1]
    assert a == call("genfun", "--which", "star", "--side", "left")[1]


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "hermiq", "eval", "--m", "1", "--n", "1", "--q", "2,0,0,0"],
        capture_output=True,
        text=True,
        env={"HERMIQ_THREADS": "1", "PATH": ""},
    )
    assert proc.returncode == 0, proc.stderr
    assert json.loads(proc.stdout)["value"] == [3.0, 0.0, 0.0, 0.0]

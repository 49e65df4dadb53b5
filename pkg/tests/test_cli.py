# tests/test_cli.py
import json

import pytest

from pntap.cli import ZERO_COLS, dispatch
from pntap.model.report import PREDICTION_COLS


def test_usage_errors(capsys):
    assert dispatch([]) == 2
    assert dispatch(["bogus"]) == 2
    assert dispatch(["primes"]) == 2


def test_toolkit_error_exit_code(capsys):
    assert dispatch(["primes", "theta", "--x", "100", "--q", "0", "--quiet"]) == 1
    assert "[error] InvalidModulusError" in capsys.readouterr().err


def test_primes_theta_json(capsys):
    assert dispatch(["primes", "theta", "--x", "100", "--h", "10", "--q", "3", "--a", "1", "--quiet"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["kind"] == "primes.theta"
    assert doc["result"]["theta"] == pytest.approx(4.574710978503383)


def test_primes_digits(capsys):
    argv = ["primes", "digits", "--N", "3", "--low", "3", "--high", "1", "--quiet"]
    assert dispatch(argv) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["result"]["count"] == 5


def test_aconst_optimize_writes_file(tmp_path):
    out = tmp_path / "opt.json"
    assert dispatch(["aconst", "optimize", "--out", str(out), "--quiet", "--threads", "1"]) == 0
    doc = json.loads(out.read_text())
    assert doc["schema_version"] == 1
    assert doc["result"]["objective"] == pytest.approx(1110.817286401673, rel=1e-9)
    assert doc["result"]["alpha0"] == pytest.approx(26.354133491747653, abs=1e-9)
    assert "threads" not in doc["config"]


def test_aconst_audit_is_reproducible(capsys):
    assert dispatch(["aconst", "audit", "--quiet"]) == 0
    first = capsys.readouterr().out
    assert dispatch(["aconst", "audit", "--quiet"]) == 0
    assert capsys.readouterr().out == first
    assert json.loads(first)["result"]["pass"] is True


def test_zeros_scan_csv_columns(tmp_path):
    out = tmp_path / "zeros.csv"
    argv = ["zeros", "scan", "--q", "4", "--T", "10", "--format", "csv", "--out", str(out),
            "--quiet", "--threads", "1"]
    assert dispatch(argv) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == ",".join(ZERO_COLS)
    assert any(line.split(",")[1].startswith("6.0209") for line in lines[1:])


def test_pnt_predict_batch_csv(tmp_path):
    batch = tmp_path / "queries.csv"
    batch.write_text("x,h,q,a\n1e5,1e5,1,1\n1e5,5e4,3,2\n")
    out = tmp_path / "pred.csv"
    argv = ["pnt", "predict", "--batch", str(batch), "--format", "csv", "--out", str(out), "--quiet"]
    assert dispatch(argv) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == ",".join(PREDICTION_COLS)
    assert len(lines) == 3


def test_pnt_predict_needs_a_query(capsys):
    assert dispatch(["pnt", "predict", "--x", "1e5", "--quiet"]) == 1


def test_pnt_envelope(capsys):
    assert dispatch(["pnt", "envelope", "--x", "1e8", "--h", "1e6", "--q", "7", "--quiet"]) == 0
    res = json.loads(capsys.readouterr().out)["result"]
    assert res["envelope"] > 0
    assert res["theta"] == pytest.approx(7 / 12)

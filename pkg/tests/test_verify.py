# tests/test_verify.py
import math
from fractions import Fraction

import numpy as np
import pytest

from pntap.analysis import verify
from pntap.analysis.report import check_table, make_markdown_report, render_verify
from pntap.config import merge_config
from pntap.engine.primes import DigitCount
from pntap.errors import DomainError
from pntap.io import emit, envelope, load_queries
from pntap.io.summaries import _plain, dumps
from pntap.model.report import ExplicitFormulaAudit
from pntap.model.zero import ZeroSet

FAST = ["alpha0", "constant_chain", "power_sums", "jk_decay"]


@pytest.fixture
def cfg():
    return merge_config(overrides={"quiet": True, "threads": 1})


def test_run_verify_subset_is_deterministic(cfg):
    first = verify.run_verify(cfg, only=FAST)
    second = verify.run_verify(cfg, only=FAST)
    assert first["passed"], [c["summary"] for c in first["checks"]]
    assert [c["name"] for c in first["checks"]] == ["constant_chain", "alpha0", "power_sums", "jk_decay"]
    assert first["mode"] == "quick"
    assert first["events"] == []
    assert dumps(first) == dumps(second)


def test_failing_check_is_contained(cfg, monkeypatch):
    def boom(ctx):
        ctx.events.emit({"event": "boom", "step": 1})
        raise DomainError("no good")

    monkeypatch.setattr(verify, "CHECKS", (("boom", boom), ("alpha0", verify.check_alpha0)))
    res = verify.run_verify(cfg)
    assert not res["passed"]
    bad, good = res["checks"]
    assert bad["summary"] == "DomainError: no good"
    assert good["passed"]
    assert res["events"] == [{"event": "boom", "step": 1}]


def test_markdown_report(cfg, tmp_path):
    res = verify.run_verify(cfg, only=["alpha0"])
    text = render_verify(res)
    assert text.startswith("# pntap verify (quick, seed 42)")
    assert "PASS" in text and "all checks passed" in text
    assert list(check_table(res).columns) == ["check", "status", "summary"]
    out = make_markdown_report(res, str(tmp_path / "verify.md"))
    assert (tmp_path / "verify.md").read_text() == text
    assert out.endswith("verify.md")


def test_plain_values():
    assert _plain(math.inf) == "inf"
    assert _plain(np.int64(3)) == 3 and isinstance(_plain(np.int64(3)), int)
    assert _plain(Fraction(71, 75)) == "71/75"
    assert _plain(1 + 2j) == [1.0, 2.0]
    assert _plain({"a": (np.float64(0.5), np.bool_(True))}) == {"a": [0.5, True]}


def test_envelope_and_csv(tmp_path):
    doc = envelope("demo", {"v": 1}, seed=5, config={"format": "csv"})
    assert doc["schema_version"] == 1 and doc["kind"] == "demo" and doc["seed"] == 5
    path = tmp_path / "rows.csv"
    emit(doc, "csv", str(path), rows=[{"b": 2, "a": 1}], cols=["a", "b", "c"])
    assert path.read_text().splitlines() == ["a,b,c", "1,2,"]


def test_load_queries(tmp_path):
    p = tmp_path / "q.csv"
    p.write_text("x,h,q,a,note\n1e6,1e5,7,3,first\n100, 10, 3, 1,\n")
    qs = load_queries(str(p))
    assert [(q.x, q.h, q.q, q.a) for q in qs] == [(1000000, 100000, 7, 3), (100, 10, 3, 1)]
    p.write_text("x,h,q,a\n1e6,1e5,7,3\n1e6,,7,3\n")
    with pytest.raises(DomainError, match=":3:"):
        load_queries(str(p))


def _explicit_with(monkeypatch, cfg, deviation_at):
    def fake_zero_set(chi, T, settings=None):
        return ZeroSet(chi, float(T), ())

    def fake_audit(x, T, q, a, sets, exc, settings, **kwargs):
        assert kwargs.get("correct_prime_powers")
        return ExplicitFormulaAudit(q, a, x, T, 1000.0 + deviation_at[T], 1000.0, 0)

    monkeypatch.setattr(verify.zeros, "zero_set", fake_zero_set)
    monkeypatch.setattr(verify.pnt, "explicit_formula_audit", fake_audit)
    return verify.run_verify(cfg, only=["explicit_formula"])


def test_explicit_formula_gate_needs_monotone_medians(cfg, monkeypatch):
    res = _explicit_with(monkeypatch, cfg, {10.0: 40.0, 20.0: 30.0, 40.0: 20.0, 50.0: 18.0, 80.0: 10.0})
    (check,) = res["checks"]
    assert check["passed"] and check["details"]["medians_non_increasing"]
    assert sum(1 for r in check["details"]["rows"] if r["T"] == 80.0) == 10
    assert res["events"] == []


def test_explicit_formula_gate_fails_on_late_rise(cfg, monkeypatch):
    # last below first, but 40 -> 80 goes up
    res = _explicit_with(monkeypatch, cfg, {10.0: 40.0, 20.0: 30.0, 40.0: 20.0, 50.0: 18.0, 80.0: 25.0})
    (check,) = res["checks"]
    assert not check["passed"]
    assert not check["details"]["medians_non_increasing"]
    assert check["details"]["medians"] == {"10": 40.0, "20": 30.0, "40": 20.0, "80": 25.0}
    assert [e["event"] for e in res["events"]] == ["explicit_median_increase"]


def test_digits_gate_uses_stated_prediction(cfg, monkeypatch):
    real = verify.primes.count_prescribed_digits

    def skewed(c, **kwargs):
        if c.total_digits == 3:
            return real(c, **kwargs)
        # li ratio 1.0, stated ratio 0.1
        return DigitCount(100, 1.0, 1000.0, 1.0, 100.0, ())

    monkeypatch.setattr(verify.primes, "count_prescribed_digits", skewed)
    (check,) = verify.run_verify(cfg, only=["digits"])["checks"]
    assert not check["passed"]
    assert all(r["li_ratio"] == 1.0 for r in check["details"]["rows"])


def test_digits_check_quick(cfg):
    (check,) = verify.run_verify(cfg, only=["digits"])["checks"]
    assert check["passed"], check["summary"]
    assert all(0.5 <= r["ratio"] <= 1.5 for r in check["details"]["rows"])
    assert len(check["details"]["rows"]) == 36

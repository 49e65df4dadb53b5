# tests/test_aconst.py
import math

import pytest

from pntap import constants as K
from pntap.engine import aconst
from pntap.errors import DomainError, InvariantError
from pntap.model.chain import ConstantChain, PowerSumInstance


def test_power_sum_bound_value():
    assert aconst.power_sum_bound(1, 0) == pytest.approx(1.007 / (4 * math.e))
    assert aconst.power_sum_bound(2, 2) == pytest.approx(1.007 / (8 * math.e) ** 2)
    with pytest.raises(DomainError):
        aconst.power_sum_bound(0, 1)


def test_power_sum_single_point():
    k, value = aconst.power_sum_min_k(PowerSumInstance.of([0.5j], M=2))
    assert k == 3
    assert value == pytest.approx(0.125)
    assert aconst.power_sum_ratio(PowerSumInstance.of([1.0])) == pytest.approx(4 * math.e / 1.007)


def test_power_sum_violation_raises(monkeypatch):
    monkeypatch.setattr(aconst, "power_sum_bound", lambda N, M: 1e9)
    with pytest.raises(InvariantError) as info:
        aconst.power_sum_min_k(PowerSumInstance.of([0.5j], M=2))
    assert info.value.details["k"] == 3
    assert info.value.details["bound"] == 1e9


def test_power_sum_instance_orders_by_modulus():
    inst = PowerSumInstance.of([0.1, -0.9, 0.5j])
    assert inst.points[0] == -0.9
    with pytest.raises(DomainError):
        PowerSumInstance((0.1, 0.9))


def test_power_sum_suite_has_no_violations():
    suite = aconst.power_sum_suite(500, seed=1)
    assert suite.violations == 0
    assert suite.min_ratio >= 1
    again = aconst.power_sum_suite(500, seed=1)
    assert again.min_ratio == suite.min_ratio


def test_objective_at_published_chain():
    assert aconst.objective(K.ALPHA_CHAIN, K.A_CHAIN, K.B_CHAIN) == pytest.approx(1110.817286401682, rel=1e-10)
    assert aconst.contraction(K.ALPHA_CHAIN, K.A_CHAIN, K.B_CHAIN) == pytest.approx(1.0, abs=1e-12)
    assert aconst.boundary_A(K.ALPHA_CHAIN, 0.0) == pytest.approx(1.239475274727765, rel=1e-12)


def test_alpha0_root():
    a0 = aconst.alpha0_root()
    assert a0 == pytest.approx(26.354133491747653, abs=1e-9)
    assert abs(aconst.alpha_equation(a0)) < 1e-10


def test_optimizer_lands_on_boundary(monkeypatch):
    a0 = aconst.alpha0_root()

    def closed_form_not_allowed(*args, **kwargs):
        raise AssertionError("optimizer must not solve the closed-form alpha equation")

    monkeypatch.setattr(aconst, "alpha_equation", closed_form_not_allowed)
    monkeypatch.setattr(aconst, "bisect", closed_form_not_allowed)
    monkeypatch.setattr(aconst, "brentq", closed_form_not_allowed)
    res = aconst.optimize_constants()
    assert res.boundary_active
    assert res.B == 0.0
    assert abs(res.alpha - a0) <= 1e-6
    assert res.objective == pytest.approx(K.OBJECTIVE_INFIMUM, rel=1e-9)
    assert res.converged >= 1


@pytest.mark.parametrize("start", [26.0, 26.35, 26.8])
def test_boundary_polish_matches_alpha0(start):
    assert aconst.polish_on_boundary(start) == pytest.approx(aconst.alpha0_root(), abs=1e-9)


def test_chain_audit_passes():
    audit = aconst.verify_constant_chain()
    assert audit.passed, audit.checks
    assert audit.residuals["density_slack"] == pytest.approx(0.0490500043, abs=1e-8)
    assert audit.theta == pytest.approx(1 - 1 / audit.exponent)
    assert any("K left free" in n for n in audit.notes)


def test_chain_audit_convexity_phi():
    audit = aconst.verify_constant_chain(ConstantChain(phi=K.PHI_CONVEXITY))
    assert "exponent_within_75_4" not in audit.checks
    assert any("no 75/4 claim" in n for n in audit.notes)


def test_chain_rejects_bad_constants():
    with pytest.raises(DomainError):
        ConstantChain(A=0.5)
    with pytest.raises(DomainError):
        ConstantChain(phi=0.0)


def test_theta_from_exponent():
    assert aconst.theta_from_exponent(75 / 4) == pytest.approx(71 / 75)
    assert aconst.theta_from_exponent(12 / 5) == pytest.approx(7 / 12)
    with pytest.raises(DomainError):
        aconst.theta_from_exponent(1.0)
    assert aconst.final_exponent(K.PHI_HYBRID_WEYL) < 75 / 4


def test_mollifier_decay_constants():
    a0, a1 = aconst.root_A0_A1()
    assert a0 == pytest.approx(1 / (1.26 * math.e))
    assert a0 == pytest.approx(K.A0_PUBLISHED, abs=1e-4)
    assert a1 == pytest.approx(K.A1_PUBLISHED, rel=1e-3)


@pytest.mark.parametrize("k", [3, 4, 5, 6])
def test_jk_decay(k):
    a0, a1 = aconst.root_A0_A1()
    out = aconst.jk_decay_check(k, K.B_CHAIN, a0, a1, M=3, eta=0.1)
    assert out["small_n"] and out["large_n"]


def test_jk_decay_errors():
    with pytest.raises(DomainError):
        aconst.jk_decay_check(7, K.B_CHAIN, 0.29, 1.7e18, M=3, eta=0.1)
    with pytest.raises(DomainError):
        aconst.jk_decay_check(3, K.B_CHAIN, 0.29, 1.7e18, M=3, eta=0.5)
    assert aconst.j_k(0, 0.0, 1.0) == 1.0
    assert aconst.j_k(2, 0.0, 1.0) == 0.0

# tests/test_pnt.py
import math
from fractions import Fraction

import pytest

from pntap.engine import chars, pnt, zeros
from pntap.errors import DomainError, InvalidResidueError, StaleInputError
from pntap.model.profile import ZeroFreeRegionProfile
from pntap.model.zero import ZeroSet

EXC5 = zeros.inject_exceptional(5, 0.9)


def test_lambda_without_exceptional_zero_is_one():
    assert pnt.lambda_(1e6, 7, 3, 1e5) == 1.0
    assert pnt.lambda_(1e6, 5, 1, 1e5, EXC5, ignore_exceptional=True) == 1.0
    with pytest.raises(InvalidResidueError):
        pnt.lambda_(1e6, 6, 3, 1e5)
    with pytest.raises(DomainError):
        pnt.lambda_(100, 5, 1, 200)


def test_lambda_full_interval_closed_form():
    x, b = 1e6, 0.9
    assert pnt.chi1_at(EXC5, 1) == 1 and pnt.chi1_at(EXC5, 2) == -1
    assert pnt.lambda_(x, 5, 1, x, EXC5) == pytest.approx(1 - x ** (b - 1) / b, rel=1e-13)
    assert pnt.lambda_(x, 5, 2, x, EXC5) == pytest.approx(1 + x ** (b - 1) / b, rel=1e-13)


@pytest.mark.parametrize("x,h,b,s", [
    (1e4, 100.0, 0.98, 1),
    (1e6, 1e6, 0.6, -1),
    (1e8, 3e5, 0.999, 1),
    (1e12, 1e9, 0.75, -1),
    (50.0, 50.0, 0.5, 1),
])
def test_lambda_matches_quadrature(x, h, b, s):
    exc = zeros.inject_exceptional(5, b)
    a = 1 if s == 1 else 2
    assert pnt.lambda_(x, 5, a, h, exc) == pytest.approx(pnt.lambda_quadrature(x, h, b, s), abs=1e-10)


def test_xi_lies_in_interval_and_reproduces_lambda():
    x, h, b = 1e6, 1e5, 0.95
    xi = pnt.lambda_mvt_xi(x, h, b)
    assert x - h < xi < x
    assert 1 - xi ** (b - 1) == pytest.approx(pnt.lambda_(x, 5, 1, h, zeros.inject_exceptional(5, b)), rel=1e-10)


def test_lambda_bounds():
    assert pnt.lambda_bounds_check(1e6, 1e4, 0.99, 1)
    assert pnt.lambda_bounds_check(1e10, 1e5, 0.9999999, 1)
    assert pnt.lambda_bounds_check(1e6, 1e6, 0.98, -1)
    with pytest.raises(DomainError):
        pnt.lambda_bounds_check(1e6, 1e4, 0.9, 1)
    with pytest.raises(DomainError):
        pnt.lambda_bounds_check(1e6, 10.0, 0.99, 1)


def test_theta_constants_and_siegel():
    assert pnt.theta_constant(True) == Fraction(71, 75)
    assert pnt.theta_constant(False) == Fraction(7, 12)
    assert pnt.theta_constant(True, ignore_exceptional=True) == Fraction(7, 12)
    assert pnt.siegel_floor_ok(0.99, 100, 0.01)
    assert not pnt.siegel_floor_ok(0.9999, 100, 0.01)
    with pytest.raises(DomainError):
        pnt.check_siegel(zeros.inject_exceptional(5, 0.999), b=0.01)


def test_range_condition():
    x, h, q = 1e12, 1e11, 10
    met, margin = pnt.range_condition(x, h, q, 7 / 12, 0.1)
    d1 = 1 - 11 / 12
    d2 = 1 / 12
    assert margin == pytest.approx(1 - 7 / 12 - 0.1 - d1 - d2)
    assert met
    _, margin_exc = pnt.range_condition(x, h, q, 7 / 12, 0.1, exc_exists=True)
    assert margin_exc == pytest.approx(margin - 0.5 * d2)


def test_zero_free_region_shapes():
    t, q = 100.0, 7
    vk = pnt.zfr_delta(t, q, ZeroFreeRegionProfile("VK", c_vk=0.05))
    lt = math.log(t)
    assert vk == pytest.approx(0.05 / (math.log(q) + lt ** (2 / 3) * math.log(lt) ** (1 / 3)))
    iw = pnt.zfr_delta(t, 8, ZeroFreeRegionProfile("IWANIEC", squarefree_part=2))
    assert iw > 0
    dh_near = pnt.zfr_delta(t, q, ZeroFreeRegionProfile("DH", beta1=1 - 1e-6))
    dh_far = pnt.zfr_delta(t, q, ZeroFreeRegionProfile("DH", beta1=0.99))
    assert dh_near > dh_far
    with pytest.raises(DomainError):
        pnt.zfr_delta(1.0, q, ZeroFreeRegionProfile("VK"))
    with pytest.raises(DomainError):
        ZeroFreeRegionProfile("DH")


@pytest.mark.parametrize("flavor", ["VK", "POWERFUL", "LONG_INTERVAL"])
def test_envelopes_shrink_with_x(flavor):
    small = pnt.error_envelope(1e6, 1e6, 7, 0.05, flavor)
    big = pnt.error_envelope(1e12, 1e12, 7, 0.05, flavor)
    assert 0 < big < small


def test_flexible_envelope():
    env = pnt.error_envelope(1e6, 1e6, 7, 0.05, "FLEXIBLE")
    assert 0 < env < math.inf
    with pytest.raises(DomainError):
        pnt.error_envelope(1e6, 1e6, 1, 0.05, "FLEXIBLE")


def test_envelope_errors():
    with pytest.raises(DomainError):
        pnt.error_envelope(1e6, 1e5, 7, 0.05, "NOPE")
    with pytest.raises(DomainError):
        pnt.error_envelope(1e6, 1e5, 7, 0.05, "GALLAGHER")
    g = pnt.error_envelope(1e6, 1e5, 7, 0.05, "GALLAGHER", beta1=0.99)
    assert g == pytest.approx(0.01 * math.log(7) * pnt.error_envelope(1e6, 1e5, 7, 0.05, "VK"))


def test_prime_power_mass():
    assert pnt.prime_power_mass(100, 1, 0) == pytest.approx(sum(100 ** (1 / k) for k in range(2, 7)))
    # only odd powers land in the non-square class mod 3
    assert pnt.prime_power_mass(100, 3, 2) == pytest.approx((100 ** (1 / 3) + 100 ** (1 / 5)) / 2)


def _empty_sets(q, T):
    return {chars.primitive_of(c): ZeroSet(chars.primitive_of(c), T, ()) for c in chars.character_group(q)}


def test_explicit_formula_without_zeros_is_main_term():
    assert pnt.explicit_formula_theta(1e4, 50.0, 5, 2, _empty_sets(5, 50.0)) == pytest.approx(1e4 / 4)


def test_explicit_formula_rejects_short_zero_sets():
    with pytest.raises(StaleInputError):
        pnt.explicit_formula_theta(1e4, 50.0, 5, 2, _empty_sets(5, 10.0))


def test_explicit_formula_audit(sieve):
    aud = pnt.explicit_formula_audit(1e4, 50.0, 4, 1, sieve=sieve)
    assert aud.ratio < 5
    assert aud.zeros_used > 0
    psi = pnt.explicit_formula_audit(1e4, 50.0, 4, 1, prime_powers=True, sieve=sieve)
    assert psi.actual > aud.actual


def test_predict_full_interval(sieve):
    rep = pnt.predict_and_compare(1e5, 1e5, 1, 1, sieve=sieve)
    assert rep.lambda_ == 1.0
    assert rep.theta_exponent == Fraction(7, 12)
    assert rep.relative_error < 0.01
    assert rep.implied_constant > 0
    row = rep.to_row()
    assert list(row) == ["x", "h", "q", "a", "lambda", "theta_exponent", "actual", "predicted",
                         "relative_error", "envelope", "implied_constant", "range_condition_met"]


def test_predict_with_synthetic_zero(sieve):
    rep = pnt.predict_and_compare(1e6, 1e6, 5, 1, exc=EXC5, sieve=sieve)
    assert rep.exceptional
    assert rep.theta_exponent == Fraction(71, 75)
    assert rep.predicted == pytest.approx(rep.lambda_ * 1e6 / 4)
    assert rep.secondary_term < 0


def test_brun_titchmarsh(sieve):
    rep = pnt.brun_titchmarsh_audit(1e5, 1e4, 7, 1.0, sieve=sieve)
    assert rep.passed
    assert rep.bound == 2.0
    assert rep.min_ratio <= rep.max_ratio
    with pytest.raises(DomainError):
        pnt.brun_titchmarsh_audit(1e5, 1e4, 7, 0.0, sieve=sieve)

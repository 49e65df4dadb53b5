# tests/test_lfunc.py
import math

import mpmath
import pytest

from pntap.config import EvalSettings
from pntap.engine import chars, lfunc
from pntap.errors import DomainError, PoleError, PreconditionError, ResourceError


def _mp_l(s, chi):
    return complex(mpmath.dirichlet(s, [complex(v) for v in chars.value_table(chi)]))


def test_hurwitz_against_mpmath():
    assert lfunc.hurwitz_zeta(2, 1.0) == pytest.approx(math.pi ** 2 / 6, abs=1e-12)
    for s, a in [(0.5 + 14j, 0.3), (0.2 - 3j, 0.75), (3.0, 0.125), (0.5 + 40j, 1.0)]:
        assert lfunc.hurwitz_zeta(s, a) == pytest.approx(complex(mpmath.zeta(s, a)), abs=1e-9)


def test_hurwitz_regular_is_finite_at_one():
    # zeta(s, a) - 1/(s-1) -> -digamma(a) at s = 1
    val = lfunc.hurwitz_regular(1.0, 0.5)[0, 0]
    assert val == pytest.approx(-complex(mpmath.digamma(0.5)), abs=1e-10)


@pytest.mark.parametrize("q", [3, 4, 5, 7, 8, 12])
def test_l_values_against_mpmath(q):
    for chi in chars.character_group(q):
        if chi.is_trivial:
            continue
        for s in (0.5 + 10j, 0.8 - 2j, 2.0):
            assert lfunc.l_value(s, chi) == pytest.approx(_mp_l(s, chi), abs=1e-9)


def test_known_values():
    (chi4,) = chars.real_nontrivial(4)
    assert lfunc.l_value(1.0, chi4) == pytest.approx(math.pi / 4, abs=1e-12)
    (chi3,) = chars.real_nontrivial(3)
    assert lfunc.l_value(1.0, chi3) == pytest.approx(math.pi / (3 * math.sqrt(3)), abs=1e-12)
    trivial5 = chars.character_group(5).trivial
    assert lfunc.l_value(2.0, trivial5) == pytest.approx(math.pi ** 2 / 6 * (1 - 1 / 25), abs=1e-12)


def test_pole_guard():
    with pytest.raises(PoleError):
        lfunc.l_value(1.0, chars.character_group(1).trivial)
    with pytest.raises(PoleError):
        lfunc.hurwitz_zeta(1.0, 0.5)


def test_caps():
    with pytest.raises(ResourceError):
        lfunc.l_value(0.5 + 300j, chars.character_group(5)[1])
    with pytest.raises(ResourceError):
        lfunc.l_value(0.5, chars.character_group(211)[1], EvalSettings(q_cap=200))


@pytest.mark.parametrize("q", [1, 3, 4, 5, 7, 8, 11])
def test_functional_equation(q):
    for chi in chars.character_group(q).primitive_characters():
        assert abs(lfunc.root_number(chi)) == pytest.approx(1.0, abs=1e-12)
        if chi.is_real:
            assert lfunc.root_number(chi) == pytest.approx(1.0, abs=1e-12)
        assert lfunc.functional_equation_residual(0.3 + 5j, chi) < 1e-8


def test_root_number_needs_primitive():
    with pytest.raises(PreconditionError):
        lfunc.root_number(chars.character_group(12)[1])


@pytest.mark.parametrize("q,idx", [(1, 0), (5, 1), (7, 2)])
def test_hardy_z_is_real_with_modulus_of_l(q, idx):
    chi = chars.character_group(q)[idx]
    for t in (3.0, 10.5, 27.25):
        z, im = lfunc.hardy_z(t, chi, return_imag=True)
        assert im < 1e-8
        assert abs(z) == pytest.approx(abs(lfunc.l_value(0.5 + 1j * t, chi)), rel=1e-10)


def test_log_derivative_against_mpmath():
    settings = EvalSettings(dirichlet_cutoff=10**5, target_abs_error=1e-5)
    (chi4,) = chars.real_nontrivial(4)
    vals = [0, 1, 0, -1]
    with mpmath.workdps(30):
        ref = -mpmath.diff(lambda s: mpmath.dirichlet(s, vals), 2) / mpmath.dirichlet(2, vals)
    assert lfunc.log_derivative(2.0, chi4, settings=settings) == pytest.approx(complex(ref), abs=1e-4)


def test_log_derivative_trivial_uses_tail():
    settings = EvalSettings(dirichlet_cutoff=10**5, target_abs_error=5e-3)
    triv = chars.character_group(1).trivial
    with mpmath.workdps(30):
        ref = -mpmath.zeta(1.5, derivative=1) / mpmath.zeta(1.5)
    val, tail = lfunc.log_derivative(1.5, triv, settings=settings, return_tail=True)
    assert val == pytest.approx(complex(ref), abs=5e-3)
    assert tail > 0
    with pytest.raises(DomainError):
        lfunc.log_derivative(1.0, triv)


def test_log_derivative_grows_cutoff_to_meet_target():
    settings = EvalSettings(dirichlet_cutoff=1000, target_abs_error=1e-5)
    assert lfunc.series_cutoff(2.0, 0, settings) == 64_000
    (chi4,) = chars.real_nontrivial(4)
    vals = [0, 1, 0, -1]
    with mpmath.workdps(30):
        ref = -mpmath.diff(lambda s: mpmath.dirichlet(s, vals), 2) / mpmath.dirichlet(2, vals)
    val, tail = lfunc.log_derivative(2.0, chi4, settings=settings, return_tail=True)
    assert tail <= settings.target_abs_error
    assert val == pytest.approx(complex(ref), abs=1e-4)


def test_log_derivative_tail_over_target_raises():
    (chi4,) = chars.real_nontrivial(4)
    with pytest.raises(ResourceError) as info:
        lfunc.log_derivative(2.0, chi4)
    assert info.value.details["tail"] > EvalSettings().target_abs_error
    assert info.value.details["cutoff"] <= EvalSettings().max_dirichlet_cutoff


def test_euler_product_oracle():
    (chi4,) = chars.real_nontrivial(4)
    assert lfunc.euler_product(2.0, chi4) == pytest.approx(lfunc.l_value(2.0, chi4), abs=1e-5)

# tests/test_zeros.py
import math

import pytest

from pntap.engine import chars, zeros
from pntap.errors import DomainError, PreconditionError, ResourceError
from pntap.model.zero import ExceptionalZero

ZETA = chars.character_group(1).trivial
(CHI4,) = chars.real_nontrivial(4)


def test_first_zeta_zeros():
    zs = zeros.zero_set(ZETA, 30.0)
    pos = [g for g in zs.gammas if g > 0]
    assert pos == pytest.approx([14.134725142, 21.022039639, 25.010857580], abs=1e-7)
    # real characters are scanned on t >= 0 and reflected
    assert len(zs) == 6
    assert sorted(-g for g in zs.gammas if g < 0) == pytest.approx(pos)


def test_first_zero_mod_4():
    pos = [g for g in zeros.zero_set(CHI4, 10.0).gammas if g > 0]
    assert pos[0] == pytest.approx(6.020948905, abs=1e-7)


@pytest.mark.parametrize("q", [1, 3, 4, 5, 7])
def test_contour_count_matches_sign_changes(q):
    for chi in chars.character_group(q).primitive_characters():
        rect, line = zeros.cross_validate(chi, 20.0, require=True)
        assert rect == line


def test_complex_character_conjugate_pairing():
    chi = chars.character_group(5)[1]
    ok, dev = zeros.conjugate_pairing_check(chi, 20.0)
    assert ok and dev < 1e-6


def test_no_zeros_right_of_critical_line():
    assert zeros.rectangle_zero_count(ZETA, 0.6, 30.0) == 0
    assert zeros.rectangle_zero_count(chars.character_group(5)[2], 0.75, 20.0) == 0


def test_pole_corrected_for_zeta():
    det = zeros.rectangle_zero_count_detail(ZETA, 0.5 - 1e-6, 10.0)
    assert det.pole_correction == 1
    assert det.count == 0


def test_scan_needs_primitive_and_caps():
    with pytest.raises(PreconditionError):
        zeros.critical_line_zeros(chars.character_group(12)[1], 10.0)
    with pytest.raises(ResourceError):
        zeros.critical_line_zeros(CHI4, 500.0)


def test_scan_modulus_orders_primitive_characters():
    sets = zeros.scan_modulus(5, 10.0)
    assert [zs.character.index for zs in sets] == [1, 2, 3]
    every = zeros.scan_modulus(12, 10.0, primitive_only=False)
    assert sorted(zs.character.modulus for zs in every) == [1, 3, 4, 12]


@pytest.mark.parametrize("q", range(2, 16))
def test_no_exceptional_zero_for_small_moduli(q):
    exc = zeros.exceptional_zero_search(q)
    assert not exc.exists
    if q >= 3:
        assert exc.search_floor == pytest.approx(1 - 1 / (50 * math.log(q)))


def test_inject_exceptional():
    exc = zeros.inject_exceptional(5, 0.95)
    assert exc.exists and exc.synthetic and exc.chi1.is_real
    with pytest.raises(DomainError):
        zeros.inject_exceptional(5, 1.0)
    with pytest.raises(DomainError):
        zeros.inject_exceptional(5, 0.9, chars.character_group(5)[1])


def test_nu():
    assert zeros.nu(100.0, 0.95) == pytest.approx(0.05 * math.log(100))
    assert zeros.nu(1e9, 0.5) == 1.0
    with pytest.raises(DomainError):
        zeros.nu(0.5, 0.9)


def test_density_bound_value():
    tab = zeros.density_stats(5, 20.0, [0.75], 0.1, exc=zeros.no_exceptional(5))
    row = tab.rows[0]
    assert row.bound_huxley == pytest.approx(100 ** 0.625, rel=1e-12)
    assert row.bound_huxley == pytest.approx(17.78, abs=0.01)
    assert row.Nq == 0 and row.Nq_star == 0 and row.nu == 1.0


@pytest.mark.slow
def test_density_table_monotone():
    sig = [0.5, 0.6, 0.75, 0.9, 1.0]
    tab = zeros.density_stats(4, 20.0, sig, 0.1)
    assert tab.monotone
    assert [r.sigma for r in tab.rows] == sig
    assert tab.rows[-1].Nq == 0
    assert all(r.Nq == r.Nq_star for r in tab.rows)
    assert tab.max_ratio <= 10


def test_density_with_synthetic_zero():
    exc = zeros.inject_exceptional(5, 0.95)
    tab = zeros.density_stats(5, 20.0, [0.9, 1.0], 0.1, exc=exc)
    lo, hi = tab.rows
    assert lo.Nq == lo.Nq_star + 1
    assert hi.Nq == hi.Nq_star == 0
    assert lo.nu == pytest.approx(0.05 * math.log(100))
    assert isinstance(tab.exceptional, ExceptionalZero)
    assert list(tab.to_frame().columns) == ["sigma", "Nq", "Nq_star", "bound_huxley",
                                            "bound_repulsive", "nu", "ratio"]


def test_zeros_in_disc():
    assert zeros.zeros_in_disc(ZETA, 14.134725, 0.75) == 1
    assert zeros.zeros_in_disc(ZETA, 14.134725, 0.4) == 0
    with pytest.raises(DomainError):
        zeros.zeros_in_disc(ZETA, 14.0, 0.8)


def test_disc_count_audit():
    rep = zeros.disc_count_audit(ZETA, 14.134725, [0.3, 0.55, 0.75])
    assert [row["n"] for row in rep["rows"]] == [0, 1, 1]
    assert rep["monotone"]
    assert rep["C_max"] > 0

# tests/test_chars.py
import cmath
import math

import numpy as np
import pytest
from sympy import legendre_symbol, totient

from pntap.engine import chars
from pntap.errors import DomainError, InvalidModulusError


@pytest.mark.parametrize("q", range(1, 31))
def test_group_has_phi_characters(q):
    g = chars.character_group(q)
    assert len(g) == int(totient(q))
    assert g.trivial.is_trivial
    assert len({c.component_exponents for c in g}) == len(g)


@pytest.mark.parametrize("q", [5, 8, 12, 15, 16, 21])
def test_orthogonality(q):
    g = chars.character_group(q)
    phi = len(g)
    table = np.array([chars.value_table(c) for c in g])
    for row, c in zip(table, g):
        assert abs(row.sum()) == pytest.approx(phi if c.is_trivial else 0.0, abs=1e-9)
    gram = table @ table.conj().T
    assert np.allclose(gram, phi * np.eye(phi), atol=1e-9)


@pytest.mark.parametrize("q,expected", [
    (8, [1, 4, 8, 8]),
    (9, [1, 3, 9, 9, 9, 9]),
    (12, [1, 3, 4, 12]),
])
def test_conductors(q, expected):
    assert sorted(c.conductor for c in chars.character_group(q)) == expected


def test_multiplicative_and_periodic():
    chi = chars.character_group(15)[3]
    for m in range(1, 40):
        for n in range(1, 40):
            assert chars.evaluate(chi, m * n) == pytest.approx(chars.evaluate(chi, m) * chars.evaluate(chi, n))
        assert chars.evaluate(chi, m + 15) == chars.evaluate(chi, m)
    assert chars.evaluate(chi, 5) == 0


def test_real_character_is_legendre_symbol():
    (chi,) = chars.real_nontrivial(7)
    for n in range(1, 7):
        assert chars.evaluate(chi, n).real == legendre_symbol(n, 7)


@pytest.mark.parametrize("q", [3, 4, 5, 7, 8, 9, 11, 13])
def test_gauss_sum_modulus(q):
    for chi in chars.character_group(q).primitive_characters():
        assert abs(chars.gauss_sum(chi)) ** 2 == pytest.approx(q, rel=1e-12)


def test_primitive_of_induced_character():
    g12 = chars.character_group(12)
    for chi in g12:
        prim = chars.primitive_of(chi)
        assert prim.modulus == chi.conductor
        assert prim.is_primitive
        for n in range(1, 12):
            if math.gcd(n, 12) == 1:
                assert chars.evaluate(chi, n) == pytest.approx(chars.evaluate(prim, n))


def test_induced_product_of_minus4_and_minus3():
    (chi4,) = chars.real_nontrivial(4)
    (chi3,) = chars.real_nontrivial(3)
    prod = chars.induced_product(chi4, chi3)
    assert prod.modulus == 12 and prod.is_primitive and prod.is_real
    for n in (1, 5, 7, 11):
        assert chars.evaluate(prod, n) == pytest.approx(chars.evaluate(chi4, n) * chars.evaluate(chi3, n))


def test_conjugate_multiply_parity_order():
    chi = chars.character_group(7)[1]
    assert chars.conjugate(chars.conjugate(chi)) == chi
    assert chars.multiply(chi, chars.conjugate(chi)).is_trivial
    assert chars.order(chi) == 6
    (chi4,) = chars.real_nontrivial(4)
    assert chars.parity(chi4) == 1
    assert chars.parity(chars.character_group(5).trivial) == 0


def test_root_of_unity_is_exact_on_quarter_turns():
    assert chars.root_of_unity(1, 4) == 1j
    assert chars.root_of_unity(2, 4) == -1
    assert chars.root_of_unity(5, 6) == pytest.approx(cmath.exp(-1j * math.pi / 3))


def test_bad_modulus_and_label():
    with pytest.raises(InvalidModulusError):
        chars.character_group(0)
    with pytest.raises(InvalidModulusError):
        chars.check_modulus(10**10)
    with pytest.raises(DomainError):
        chars.character_by_label(5, 4)
    with pytest.raises(DomainError):
        chars.multiply(chars.character_group(5)[1], chars.character_group(7)[1])

# src/pntap/engine/chars.py
"""Dirichlet characters modulo q.

The group (Z/q)^* is split by CRT into cyclic factors: one per odd prime
power (generated by a primitive root), ``<-1>`` for 4, and ``<-1> x <5>``
for 2^k with k >= 3. A character is a vector of exponents on those
generators; values are exact powers of zeta_phi(q) until exported.
"""
from __future__ import annotations
import cmath
import itertools
import math
from fractions import Fraction
from functools import lru_cache, reduce
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
from sympy import primitive_root
from sympy.ntheory.modular import crt
from sympy.ntheory.residue_ntheory import discrete_log

from pntap.constants import MAX_MODULUS
from pntap.errors import DomainError, InvalidModulusError
from pntap.model.character import CharacterGroup, CyclicFactor, DirichletCharacter, UnitGroup
from pntap.utils.logging import get_logger
from pntap.utils.mathx import factor
from pntap.utils.summation import ComplexCompensatedSum

log = get_logger(__name__)

# discrete-log tables are built up to this modulus
TABLE_LIMIT = 1 << 22


def check_modulus(q: int) -> int:
    if isinstance(q, bool) or not isinstance(q, (int, np.integer)):
        raise InvalidModulusError(f"modulus must be an integer, got {q!r}")
    q = int(q)
    if q < 1:
        raise InvalidModulusError(f"modulus must be >= 1, got {q}", {"q": q})
    if q > MAX_MODULUS:
        raise InvalidModulusError(f"modulus {q} exceeds the supported cap {MAX_MODULUS}", {"q": q})
    return q


# ---------------------------------------------------------------------------
# group structure
# ---------------------------------------------------------------------------

def _lift(g: int, m: int, q: int) -> int:
    rest = q // m
    if rest == 1:
        return g % m
    n, _ = crt([m, rest], [g % m, 1])
    return int(n)


def _local_table(f: CyclicFactor) -> np.ndarray:
    m = f.local_modulus
    tab = np.full(m, -1, dtype=np.int64)
    if f.kind == "minus_one":
        odd = np.arange(1, m, 2)
        tab[odd] = np.where(odd % 4 == 1, 0, 1)
        return tab
    g = 5 if f.kind == "five" else f.local_generator
    pw = 1
    for e in range(f.order):
        tab[pw] = e
        pw = pw * g % m
    if f.kind == "five":
        # n = (-1)^a 5^b: fold the 3 mod 4 half onto the <5> half
        odd = np.arange(3, m, 4)
        tab[odd] = tab[m - odd]
    return tab


@lru_cache(maxsize=512)
def unit_group(q: int) -> UnitGroup:
    q = check_modulus(q)
    factors: List[CyclicFactor] = []
    for p, k in factor(q):
        m = p ** k
        if p == 2:
            if k == 1:
                continue
            factors.append(CyclicFactor(2, k, m, m - 1, _lift(m - 1, m, q), 2, "minus_one"))
            if k >= 3:
                factors.append(CyclicFactor(2, k, m, 5, _lift(5, m, q), 1 << (k - 2), "five"))
        else:
            g = int(primitive_root(m))
            factors.append(CyclicFactor(p, k, m, g, _lift(g, m, q), (p - 1) * p ** (k - 1), "cyclic"))
    phi = reduce(lambda a, f: a * f.order, factors, 1)

    dlog = None
    if q <= TABLE_LIMIT:
        n = np.arange(q, dtype=np.int64)
        rows = [_local_table(f)[n % f.local_modulus] for f in factors]
        dlog = np.vstack(rows) if rows else np.zeros((0, q), dtype=np.int64)
        dlog[:, np.gcd(n, q) != 1] = -1
        dlog.setflags(write=False)
    log.debug("unit group mod %d: orders %s", q, [f.order for f in factors])
    return UnitGroup(modulus=q, phi=phi, factors=tuple(factors), dlog=dlog)


def _local_log(f: CyclicFactor, n: int) -> int:
    m = f.local_modulus
    r = n % m
    if f.kind == "minus_one":
        return 0 if r % 4 == 1 else 1
    if f.kind == "five":
        if r % 4 == 3:
            r = m - r
        return int(discrete_log(m, r, 5)) if r != 1 else 0
    return int(discrete_log(m, r, f.local_generator)) if r != 1 else 0


def logs_of(group: UnitGroup, n: int) -> Optional[Tuple[int, ...]]:
    """Exponents of n on the generators, or None when gcd(n, q) > 1."""
    q = group.modulus
    r = int(n) % q
    if math.gcd(r, q) != 1:
        return None
    if group.dlog is not None:
        return tuple(int(v) for v in group.dlog[:, r])
    return tuple(_local_log(f, r) for f in group.factors)


# ---------------------------------------------------------------------------
# characters
# ---------------------------------------------------------------------------

def _index_of(exps: Sequence[int], orders: Sequence[int]) -> int:
    idx = 0
    for e, o in zip(exps, orders):
        idx = idx * o + e
    return idx


def _local_conductor(group: UnitGroup, exps: Sequence[int]) -> int:
    cond = 1
    by_prime = {}
    for f, e in zip(group.factors, exps):
        by_prime.setdefault(f.prime, []).append((f, e))
    for p, parts in by_prime.items():
        if p == 2:
            a = next((e for f, e in parts if f.kind == "minus_one"), 0)
            five = next(((f, e) for f, e in parts if f.kind == "five"), None)
            b = five[1] if five else 0
            if b:
                k = five[0].prime_power
                cond *= 1 << (k - _valuation(b, 2))
            elif a:
                cond *= 4
        else:
            f, e = parts[0]
            if e:
                cond *= p ** max(1, f.prime_power - _valuation(e, p))
    return cond


def _valuation(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def make_character(group: UnitGroup, exps: Sequence[int], index: Optional[int] = None) -> DirichletCharacter:
    if len(exps) != len(group.factors):
        raise DomainError("exponent vector does not match the group structure",
                          {"q": group.modulus, "exponents": list(exps)})
    exps = tuple(int(e) % f.order for e, f in zip(exps, group.factors))
    return DirichletCharacter(
        modulus=group.modulus,
        component_exponents=exps,
        conductor=_local_conductor(group, exps),
        is_trivial=all(e == 0 for e in exps),
        is_real=all((2 * e) % f.order == 0 for e, f in zip(exps, group.factors)),
        index=_index_of(exps, group.orders) if index is None else index,
        group=group,
    )


@lru_cache(maxsize=256)
def character_group(q: int) -> CharacterGroup:
    """All phi(q) characters mod q, trivial first, then lexicographic in the exponents."""
    group = unit_group(q)
    chars = tuple(
        make_character(group, exps, i)
        for i, exps in enumerate(itertools.product(*(range(o) for o in group.orders)))
    )
    return CharacterGroup(modulus=group.modulus, characters=chars, structure=group)


def character_by_label(q: int, index: int) -> DirichletCharacter:
    g = character_group(q)
    if not 0 <= index < len(g):
        raise DomainError(f"character index {index} out of range for q={q} (phi={len(g)})")
    return g[index]


def root_of_unity(k: int, n: int) -> complex:
    """exp(2 pi i k / n), exact at the quarter turns."""
    k %= n
    if k == 0:
        return complex(1.0, 0.0)
    if 2 * k == n:
        return complex(-1.0, 0.0)
    if 4 * k == n:
        return complex(0.0, 1.0)
    if 4 * k == 3 * n:
        return complex(0.0, -1.0)
    return cmath.exp(2j * math.pi * k / n)


def exponent_of(chi: DirichletCharacter, n: int) -> Optional[int]:
    """chi(n) = zeta_phi^E; returns E in [0, phi) or None if gcd(n, q) > 1."""
    logs = logs_of(chi.group, n)
    if logs is None:
        return None
    return sum(e * w * l for e, w, l in zip(chi.component_exponents, chi.group.weights, logs)) % chi.group.phi


@lru_cache(maxsize=2048)
def exponent_table(chi: DirichletCharacter) -> np.ndarray:
    """E(n) for n = 0..q-1, -1 on non-units."""
    group = chi.group
    if group.dlog is None:
        raise DomainError(f"no residue tables for q={chi.modulus}; use exponent_of", {"q": chi.modulus})
    coeff = np.array([e * w for e, w in zip(chi.component_exponents, group.weights)], dtype=np.int64)
    units = np.gcd(np.arange(chi.modulus, dtype=np.int64), chi.modulus) == 1
    if coeff.size:
        tab = (coeff @ np.where(group.dlog < 0, 0, group.dlog)) % group.phi
    else:
        tab = np.zeros(chi.modulus, dtype=np.int64)
    tab = np.where(units, tab, -1)
    tab.setflags(write=False)
    return tab


def evaluate(chi: DirichletCharacter, n: int) -> complex:
    e = exponent_of(chi, n)
    if e is None:
        return complex(0.0, 0.0)
    return root_of_unity(e, chi.group.phi)


def value_table(chi: DirichletCharacter) -> np.ndarray:
    """chi(n) for n = 0..q-1 as complex doubles."""
    tab = exponent_table(chi)
    phi = chi.group.phi
    vals = np.exp(2j * np.pi * (tab % phi) / phi)
    vals[tab == 0] = 1.0
    if phi % 2 == 0:
        vals[tab == phi // 2] = -1.0
    if phi % 4 == 0:
        vals[tab == phi // 4] = 1j
        vals[tab == 3 * phi // 4] = -1j
    vals[tab < 0] = 0.0
    return vals


def values_at(chi: DirichletCharacter, ns: np.ndarray) -> np.ndarray:
    """chi(n) for an integer array, through the residue table when available."""
    ns = np.asarray(ns, dtype=np.int64)
    if chi.group.dlog is not None:
        return value_table(chi)[ns % chi.modulus]
    return np.array([evaluate(chi, int(n)) for n in ns], dtype=np.complex128)


def real_value_table(chi: DirichletCharacter) -> np.ndarray:
    if not chi.is_real:
        raise DomainError("real_value_table needs a real character", {"label": chi.label})
    return value_table(chi).real.copy()


def conjugate(chi: DirichletCharacter) -> DirichletCharacter:
    return make_character(chi.group, [-e for e in chi.component_exponents])


def multiply(chi: DirichletCharacter, psi: DirichletCharacter) -> DirichletCharacter:
    if chi.modulus != psi.modulus:
        raise DomainError("multiply needs equal moduli; use induced_product otherwise",
                          {"q1": chi.modulus, "q2": psi.modulus})
    return make_character(chi.group, [a + b for a, b in zip(chi.component_exponents, psi.component_exponents)])


def parity(chi: DirichletCharacter) -> int:
    """0 for even characters, 1 for odd ones."""
    if chi.modulus <= 2:
        return 0
    return 0 if exponent_of(chi, chi.modulus - 1) == 0 else 1


def order(chi: DirichletCharacter) -> int:
    o = 1
    for e, f in zip(chi.component_exponents, chi.group.factors):
        k = f.order // math.gcd(e, f.order)
        o = o * k // math.gcd(o, k)
    return o


def conductor_and_primitive(chi: DirichletCharacter) -> Tuple[int, DirichletCharacter]:
    """Conductor f and the primitive character mod f inducing chi."""
    f = chi.conductor
    if f == chi.modulus:
        return f, chi
    q, phi = chi.modulus, chi.group.phi
    target = unit_group(f)
    exps = []
    for fac in target.factors:
        n = fac.generator
        while math.gcd(n, q) != 1:
            n += f
        fr = Fraction(exponent_of(chi, n), phi) * fac.order
        if fr.denominator != 1:
            raise DomainError("character is not induced from its computed conductor",
                              {"label": chi.label, "conductor": f})
        exps.append(int(fr))
    return f, make_character(target, exps)


def primitive_of(chi: DirichletCharacter) -> DirichletCharacter:
    return conductor_and_primitive(chi)[1]


def induced_product(chi: DirichletCharacter, chi1: DirichletCharacter) -> DirichletCharacter:
    """The primitive character inducing the pointwise product chi * chi1."""
    q = chi.modulus * chi1.modulus // math.gcd(chi.modulus, chi1.modulus)
    group = unit_group(q)
    exps = []
    for fac in group.factors:
        g = fac.generator
        fr = Fraction(exponent_of(chi, g), chi.group.phi) + Fraction(exponent_of(chi1, g), chi1.group.phi)
        e = fr * fac.order
        if e.denominator != 1:
            raise DomainError("product exponent is not integral", {"q": q})
        exps.append(int(e))
    return primitive_of(make_character(group, exps))


def gauss_sum(chi: DirichletCharacter) -> complex:
    """tau(chi) = sum_{a mod q} chi(a) e(a/q) by direct summation."""
    q = chi.modulus
    n = np.arange(q, dtype=np.float64)
    terms = value_table(chi) * np.exp(2j * np.pi * n / q)
    return ComplexCompensatedSum().add_many(terms).value


def real_nontrivial(q: int) -> Tuple[DirichletCharacter, ...]:
    return tuple(c for c in character_group(q) if c.is_real and not c.is_trivial)


def characters_of(moduli: Iterable[int]) -> List[DirichletCharacter]:
    out: List[DirichletCharacter] = []
    for q in moduli:
        out.extend(character_group(q).characters)
    return out

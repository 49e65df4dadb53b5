# src/pntap/model/character.py
from __future__ import annotations
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np


@dataclass(frozen=True)
class CyclicFactor:
    """One cyclic factor of (Z/q)^*.

    ``generator`` is a residue mod q that reduces to the local generator
    modulo ``local_modulus`` and to 1 modulo the complementary part of q.
    """
    prime: int
    prime_power: int          # the exponent k of p^k
    local_modulus: int        # p^k
    local_generator: int      # generator modulo p^k (-1 written as p^k - 1)
    generator: int            # CRT lift to a unit mod q
    order: int
    kind: str                 # "cyclic" | "minus_one" | "five"


@dataclass(frozen=True, eq=False)
class UnitGroup:
    """Cyclic decomposition of (Z/q)^* with optional discrete-log tables.

    ``dlog`` has shape (len(factors), q); entry [j, n] is the exponent of the
    j-th generator in n, or -1 when gcd(n, q) > 1. Tables are skipped for
    large q and logs are then taken one value at a time.
    """
    modulus: int
    phi: int
    factors: Tuple[CyclicFactor, ...]
    dlog: Optional[np.ndarray] = None

    @property
    def orders(self) -> Tuple[int, ...]:
        return tuple(f.order for f in self.factors)

    @property
    def weights(self) -> Tuple[int, ...]:
        # exponent of zeta_phi contributed by one step on factor j
        return tuple(self.phi // f.order for f in self.factors)


@dataclass(frozen=True)
class DirichletCharacter:
    """A character mod q, stored as exponents on the generators of (Z/q)^*.

    chi(g_j) = exp(2 pi i e_j / ord_j); values are exact powers of the
    primitive phi(q)-th root of unity until they are exported.
    """
    modulus: int
    component_exponents: Tuple[int, ...]
    conductor: int = field(compare=False)
    is_trivial: bool = field(compare=False)
    is_real: bool = field(compare=False)
    index: int = field(default=0, compare=False)
    group: UnitGroup = field(default=None, compare=False, repr=False)  # type: ignore[assignment]

    @property
    def is_primitive(self) -> bool:
        return self.conductor == self.modulus

    @property
    def phi(self) -> int:
        return self.group.phi

    @property
    def label(self) -> str:
        return f"{self.modulus}.{self.index}"

    def to_record(self) -> dict:
        return {
            "modulus": self.modulus,
            "index": self.index,
            "exponents": list(self.component_exponents),
            "conductor": self.conductor,
            "is_real": self.is_real,
            "is_trivial": self.is_trivial,
        }


@dataclass(frozen=True)
class CharacterGroup:
    modulus: int
    characters: Tuple[DirichletCharacter, ...]
    structure: UnitGroup = field(compare=False, repr=False)

    @property
    def generator_table(self) -> Tuple[CyclicFactor, ...]:
        return self.structure.factors

    @property
    def trivial(self) -> DirichletCharacter:
        return self.characters[0]

    def real_characters(self) -> Tuple[DirichletCharacter, ...]:
        return tuple(c for c in self.characters if c.is_real)

    def primitive_characters(self) -> Tuple[DirichletCharacter, ...]:
        return tuple(c for c in self.characters if c.is_primitive)

    def __len__(self) -> int:
        return len(self.characters)

    def __iter__(self):
        return iter(self.characters)

    def __getitem__(self, i: int) -> DirichletCharacter:
        return self.characters[i]

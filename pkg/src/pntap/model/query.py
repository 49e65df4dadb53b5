# src/pntap/model/query.py
from __future__ import annotations
import math
from dataclasses import dataclass
from typing import Tuple

from pntap.errors import DomainError, InvalidConstraintError, InvalidModulusError, InvalidResidueError


@dataclass(frozen=True)
class ThetaQuery:
    """Sum of log p over x - h < p <= x with p = a mod q."""
    x: float
    h: float
    q: int
    a: int

    def __post_init__(self) -> None:
        if self.x < 2:
            raise DomainError(f"x must be >= 2, got {self.x}", {"x": self.x})
        if not 0 < self.h <= self.x:
            raise DomainError(f"h must lie in (0, x], got h={self.h}, x={self.x}", {"x": self.x, "h": self.h})
        if self.q < 1:
            raise InvalidModulusError(f"modulus must be >= 1, got {self.q}", {"q": self.q})
        if math.gcd(int(self.a), int(self.q)) != 1:
            raise InvalidResidueError(f"gcd({self.a}, {self.q}) > 1", {"a": self.a, "q": self.q})

    @property
    def lo(self) -> int:
        """Smallest integer in the interval (x - h, x]."""
        return math.floor(self.x - self.h) + 1

    @property
    def hi(self) -> int:
        return math.floor(self.x)

    def to_record(self) -> dict:
        return {"x": self.x, "h": self.h, "q": self.q, "a": self.a}


@dataclass(frozen=True)
class DigitConstraint:
    """Base-l digits prescribed at both ends of an N-digit number.

    ``low_digits`` is d_0..d_{A-1}; ``high_digits`` is d_{N-B}..d_{N-1},
    also in increasing index order, so its last entry is the leading digit.
    """
    base: int
    total_digits: int
    low_digits: Tuple[int, ...] = ()
    high_digits: Tuple[int, ...] = ()

    def __post_init__(self) -> None:
        l, n = self.base, self.total_digits
        if l < 2 or n < 1:
            raise InvalidConstraintError("need base >= 2 and N >= 1", {"base": l, "N": n})
        if self.A + self.B >= n:
            raise InvalidConstraintError(f"A + B = {self.A + self.B} must be < N = {n}",
                                         {"A": self.A, "B": self.B, "N": n})
        for d in self.low_digits + self.high_digits:
            if not 0 <= d < l:
                raise InvalidConstraintError(f"digit {d} outside 0..{l - 1}")
        if self.B and self.high_digits[-1] == 0:
            raise InvalidConstraintError("leading digit d_{N-1} must be nonzero")
        if self.A and math.gcd(self.low_digits[0], l) != 1:
            raise InvalidConstraintError(f"units digit {self.low_digits[0]} must be coprime to {l}",
                                         {"d0": self.low_digits[0], "base": l})

    @property
    def A(self) -> int:
        return len(self.low_digits)

    @property
    def B(self) -> int:
        return len(self.high_digits)

    @property
    def modulus(self) -> int:
        return self.base ** self.A

    @property
    def residue(self) -> int:
        return sum(d * self.base ** j for j, d in enumerate(self.low_digits))

    @property
    def interval(self) -> Tuple[int, int]:
        """Half-open [lo, hi) of N-digit integers with the prescribed top digits."""
        l, n = self.base, self.total_digits
        if not self.B:
            return l ** (n - 1), l ** n
        top = sum(d * l ** i for i, d in enumerate(self.high_digits))
        step = l ** (n - self.B)
        return top * step, (top + 1) * step

    def to_record(self) -> dict:
        return {
            "base": self.base,
            "N": self.total_digits,
            "low_digits": list(self.low_digits),
            "high_digits": list(self.high_digits),
        }

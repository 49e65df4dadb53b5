# src/pntap/utils/mathx.py
from __future__ import annotations
import math
from functools import lru_cache
from typing import Tuple

from sympy import factorint, totient


def log_plus(u: float) -> float:
    """log⁺(u) = max{0, log u}; zero for u <= 1 (including u <= 0)."""
    if u <= 1.0:
        return 0.0
    return math.log(u)


@lru_cache(maxsize=4096)
def factor(q: int) -> Tuple[Tuple[int, int], ...]:
    return tuple(sorted(factorint(int(q)).items()))


def euler_phi(q: int) -> int:
    return int(totient(int(q)))


def squarefree_kernel(q: int) -> int:
    """d(q) = product of the distinct primes dividing q."""
    d = 1
    for p, _ in factor(q):
        d *= p
    return d


def prime_divisors(q: int) -> Tuple[int, ...]:
    return tuple(p for p, _ in factor(q))

# src/pntap/engine/primes.py
"""Segmented sieve and Chebyshev-type sums over primes in progressions.

Blocks are aligned to multiples of ``SEGMENT`` so that an on-disk cache can
reuse them across queries. Each block starts from a mod-30 wheel pattern and
is then crossed off by base primes >= 7.
"""
from __future__ import annotations
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import mpmath
import numpy as np

from pntap.engine.chars import check_modulus
from pntap.errors import DomainError, InvalidResidueError, ResourceError
from pntap.io.cache import SegmentCache
from pntap.model.query import DigitConstraint, ThetaQuery
from pntap.utils.logging import get_logger
from pntap.utils.mathx import euler_phi
from pntap.utils.summation import CompensatedSum

log = get_logger(__name__)

SEGMENT = 1 << 20
WHEEL = 30
DEFAULT_CAP = 10**10

_WHEEL_MASK = np.array([math.gcd(r, WHEEL) == 1 for r in range(WHEEL)], dtype=bool)


@lru_cache(maxsize=32)
def _base_primes(limit: int) -> np.ndarray:
    if limit < 2:
        return np.array([], dtype=np.int64)
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p::p] = False
    out = np.flatnonzero(is_prime).astype(np.int64)
    out.setflags(write=False)
    return out


def _sieve_block(lo: int, hi: int) -> np.ndarray:
    """Primes in [lo, hi) for one block."""
    n = hi - lo
    mask = _WHEEL_MASK[(lo + np.arange(n, dtype=np.int64)) % WHEEL]
    base = _base_primes(math.isqrt(hi - 1) if hi > 1 else 1)
    for p in base[3:]:
        p = int(p)
        start = max(p * p, -(-lo // p) * p)
        if start >= hi:
            if p * p >= hi:
                break
            continue
        mask[start - lo::p] = False
    for small in (2, 3, 5):
        if lo <= small < hi:
            mask[small - lo] = True
    if lo <= 1 < hi:
        mask[1 - lo] = False
    return lo + np.flatnonzero(mask).astype(np.int64)


class Sieve:
    """Block source with optional disk cache and thread pool.

    Blocks come back in ascending order whatever the worker count, so
    reductions over them are deterministic.
    """

    def __init__(self, cap: int = DEFAULT_CAP, cache: Optional[SegmentCache] = None, threads: int = 1) -> None:
        self.cap = int(cap)
        self.cache = cache
        self.threads = max(1, int(threads))

    def _block(self, k: int) -> np.ndarray:
        lo, hi = k * SEGMENT, (k + 1) * SEGMENT
        if self.cache is not None:
            hit = self.cache.load(lo, hi)
            if hit is not None:
                return hit
        primes = _sieve_block(lo, hi)
        if self.cache is not None:
            self.cache.store(lo, hi, primes)
        return primes

    def blocks(self, lo: int, hi: int) -> Iterator[np.ndarray]:
        """Primes in [lo, hi] grouped by aligned block, trimmed to the range."""
        if hi > self.cap:
            raise ResourceError(f"sieve range up to {hi} exceeds cap {self.cap}", {"hi": hi, "cap": self.cap})
        lo = max(int(lo), 2)
        hi = int(hi)
        if hi < lo:
            return
        ks = range(lo // SEGMENT, hi // SEGMENT + 1)

        def trimmed(k: int) -> np.ndarray:
            arr = self._block(k)
            a, b = np.searchsorted(arr, [lo, hi + 1])
            return arr[a:b]

        if self.threads == 1 or len(ks) == 1:
            for k in ks:
                yield trimmed(k)
        else:
            with ThreadPoolExecutor(max_workers=self.threads) as pool:
                yield from pool.map(trimmed, ks)


_DEFAULT = Sieve()


def _sieve(sieve: Optional[Sieve]) -> Sieve:
    return sieve if sieve is not None else _DEFAULT


def sieve_interval(lo: int, hi: int, cap: int = DEFAULT_CAP, sieve: Optional[Sieve] = None) -> np.ndarray:
    """Ascending primes in [lo, hi]."""
    if lo < 2:
        raise DomainError(f"lo must be >= 2, got {lo}", {"lo": lo})
    if hi < lo:
        raise DomainError(f"empty range [{lo}, {hi}]", {"lo": lo, "hi": hi})
    sv = sieve if sieve is not None else Sieve(cap)
    if hi > min(cap, sv.cap):
        raise ResourceError(f"sieve range up to {hi} exceeds cap {min(cap, sv.cap)}", {"hi": hi})
    parts = list(sv.blocks(lo, hi))
    return np.concatenate(parts) if parts else np.array([], dtype=np.int64)


def _check_residue(q: int, a: int) -> Tuple[int, int]:
    q = check_modulus(q)
    if math.gcd(int(a), q) != 1:
        raise InvalidResidueError(f"gcd({a}, {q}) > 1", {"a": a, "q": q})
    return q, int(a) % q


def _theta_range(lo: int, hi: int, q: int, a: int, sieve: Optional[Sieve]) -> float:
    acc = CompensatedSum()
    for block in _sieve(sieve).blocks(lo, hi):
        sel = block if q == 1 else block[block % q == a]
        acc.add_many(np.log(sel.astype(np.float64)))
    return acc.value


def theta_ap(x: float, q: int, a: int, sieve: Optional[Sieve] = None) -> float:
    """theta(x; q, a) = sum of log p over p <= x, p = a mod q."""
    q, a = _check_residue(q, a)
    if x < 2:
        return 0.0
    return _theta_range(2, math.floor(x), q, a, sieve)


def theta(x: float, sieve: Optional[Sieve] = None) -> float:
    return theta_ap(x, 1, 0, sieve)


def theta_short_interval(query: ThetaQuery, sieve: Optional[Sieve] = None) -> float:
    q, a = _check_residue(query.q, query.a)
    lo, hi = max(query.lo, 2), query.hi
    if hi < lo:
        return 0.0
    return _theta_range(lo, hi, q, a, sieve)


def theta_all_classes(x: float, q: int, sieve: Optional[Sieve] = None,
                      lo: int = 2) -> Tuple[Dict[int, float], float]:
    """One pass over [lo, x]: theta per coprime class and the sum over p | q."""
    q = check_modulus(q)
    classes = {a: CompensatedSum() for a in range(q) if math.gcd(a, q) == 1}
    ramified = CompensatedSum()
    if x >= 2 and math.floor(x) >= lo:
        for block in _sieve(sieve).blocks(lo, math.floor(x)):
            logs = np.log(block.astype(np.float64))
            res = block % q
            sums = np.bincount(res, weights=logs, minlength=q)
            for r, acc in classes.items():
                acc.add(float(sums[r]))
            ram = np.gcd(res, q) != 1
            if ram.any():
                ramified.add_many(logs[ram])
    return {r: acc.value for r, acc in classes.items()}, ramified.value


def psi_ap(x: float, q: int, a: int, sieve: Optional[Sieve] = None) -> float:
    """psi(x; q, a): like theta_ap but over prime powers p^k <= x."""
    q, a = _check_residue(q, a)
    if x < 2:
        return 0.0
    n = math.floor(x)
    acc = CompensatedSum(theta_ap(n, q, a, sieve))
    root = math.isqrt(n)
    if root >= 2:
        small = sieve_interval(2, root, sieve=sieve)
        k = 2
        while small.size:
            # float prefilter keeps small ** k inside int64
            small = small[k * np.log(small.astype(np.float64)) <= math.log(n) + 1e-9]
            pk = small ** k
            keep = pk <= n
            small, pk = small[keep], pk[keep]
            sel = small[pk % q == a]
            acc.add_many(np.log(sel.astype(np.float64)))
            k += 1
    return acc.value


@dataclass(frozen=True)
class ChebyshevPoint:
    x: int
    theta: float
    ratio: float
    ok: bool


def chebyshev_audit(xs: Sequence[int], bound: float = 1.1,
                    sieve: Optional[Sieve] = None) -> List[ChebyshevPoint]:
    """theta(x) < bound * x at each x, from a single pass to max(xs)."""
    xs = sorted(int(x) for x in xs)
    out: List[ChebyshevPoint] = []
    if not xs:
        return out
    acc = CompensatedSum()
    i = 0
    for block in _sieve(sieve).blocks(2, xs[-1]):
        logs = np.log(block.astype(np.float64))
        start = 0
        if block.size == 0:
            continue
        while i < len(xs) and xs[i] < block[-1]:
            cut = int(np.searchsorted(block, xs[i], side="right"))
            acc.add_many(logs[start:cut])
            start = cut
            val = acc.value
            out.append(ChebyshevPoint(xs[i], val, val / xs[i], val < bound * xs[i]))
            i += 1
        acc.add_many(logs[start:])
    while i < len(xs):
        val = acc.value
        out.append(ChebyshevPoint(xs[i], val, val / xs[i], val < bound * xs[i]))
        i += 1
    return out


@dataclass(frozen=True)
class DigitCount:
    count: int
    log_weighted: float
    predicted: float
    predicted_log_weighted: float
    predicted_li: float
    primes_sample: Tuple[int, ...]

    @property
    def ratio(self) -> float:
        return self.count / self.predicted if self.predicted else float("nan")

    @property
    def li_ratio(self) -> float:
        """count against the li-based mass, which carries the 1/log factor."""
        return self.count / self.predicted_li if self.predicted_li else float("nan")

    @property
    def log_ratio(self) -> float:
        return self.log_weighted / self.predicted_log_weighted if self.predicted_log_weighted else float("nan")

    def to_record(self) -> dict:
        return {
            "count": self.count,
            "log_weighted": self.log_weighted,
            "predicted": self.predicted,
            "predicted_log_weighted": self.predicted_log_weighted,
            "predicted_li": self.predicted_li,
            "ratio": self.ratio,
            "li_ratio": self.li_ratio,
            "log_ratio": self.log_ratio,
            "primes_sample": list(self.primes_sample),
        }


def count_prescribed_digits(c: DigitConstraint, cap: int = DEFAULT_CAP,
                            sieve: Optional[Sieve] = None, sample: int = 20) -> DigitCount:
    """Primes with prescribed low and high base-l digits.

    Low digits become p = r mod l^A; high digits fix the interval
    [top * l^(N-B), (top+1) * l^(N-B)).
    """
    l, n = c.base, c.total_digits
    if l ** n > cap:
        raise ResourceError(f"{l}^{n} exceeds sieve cap {cap}", {"base": l, "N": n, "cap": cap})
    lo, hi = c.interval
    m, r = c.modulus, c.residue
    count = 0
    acc = CompensatedSum()
    first: List[int] = []
    for block in _sieve(sieve).blocks(lo, hi - 1):
        sel = block if m == 1 else block[block % m == r]
        count += int(sel.size)
        acc.add_many(np.log(sel.astype(np.float64)))
        if len(first) < sample:
            first.extend(int(p) for p in sel[: sample - len(first)])
    phi_l = euler_phi(l)
    length = hi - lo
    phi_m = euler_phi(m)
    li_mass = float(mpmath.li(hi) - mpmath.li(max(lo, 2))) / phi_m
    log.debug("digits base %d N=%d: %d primes in [%d, %d) mod %d", l, n, count, lo, hi, m)
    return DigitCount(
        count=count,
        log_weighted=acc.value,
        predicted=l ** (n - c.A - c.B) / phi_l,
        predicted_log_weighted=length / phi_m,
        predicted_li=li_mass,
        primes_sample=tuple(first),
    )

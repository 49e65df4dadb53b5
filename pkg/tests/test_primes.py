# tests/test_primes.py
import math

import numpy as np
import pytest
from sympy import primerange

from pntap.engine import primes
from pntap.engine.primes import Sieve
from pntap.errors import InvalidConstraintError, InvalidResidueError, ResourceError
from pntap.io.cache import HEADER, SegmentCache
from pntap.model.query import DigitConstraint, ThetaQuery
from pntap.utils.summation import CompensatedSum


def _theta_oracle(x, q=1, a=0):
    return math.fsum(math.log(p) for p in primerange(2, int(x) + 1) if p % q == a % q)


def test_sieve_matches_sympy(sieve):
    assert primes.sieve_interval(2, 10_000, sieve=sieve).tolist() == list(primerange(2, 10_001))
    lo = (1 << 20) - 500
    assert primes.sieve_interval(lo, lo + 1000, sieve=sieve).tolist() == list(primerange(lo, lo + 1001))


@pytest.mark.parametrize("q,a", [(1, 0), (3, 1), (3, 2), (10, 7), (12, 11)])
def test_theta_ap_matches_oracle(sieve, q, a):
    assert primes.theta_ap(20_000, q, a, sieve) == pytest.approx(_theta_oracle(20_000, q, a), rel=1e-13)


def test_theta_short_interval(sieve):
    assert primes.theta_short_interval(ThetaQuery(100, 10, 3, 1), sieve) == pytest.approx(math.log(97))
    assert primes.theta_short_interval(ThetaQuery(100, 2, 3, 1), sieve) == 0.0


def test_classes_partition_theta(sieve):
    x, q = 50_000, 12
    classes, ramified = primes.theta_all_classes(x, q, sieve)
    assert sorted(classes) == [1, 5, 7, 11]
    assert math.fsum(classes.values()) + ramified == pytest.approx(primes.theta(x, sieve), rel=1e-14)
    assert ramified == pytest.approx(math.log(2) + math.log(3))


def test_psi_adds_prime_powers(sieve):
    expected = math.fsum(math.log(p) * int(math.log(1000) / math.log(p) + 1e-12)
                         for p in primerange(2, 1001))
    assert primes.psi_ap(1000, 1, 0, sieve) == pytest.approx(expected, rel=1e-13)
    # 4, 16, 64, 256 = 1 mod 3 and 2, 8, 32, 128, 512 = 2 mod 3
    gap = primes.psi_ap(1000, 3, 1, sieve) - primes.theta_ap(1000, 3, 1, sieve)
    assert gap >= 4 * math.log(2)


def test_bad_residue(sieve):
    with pytest.raises(InvalidResidueError):
        primes.theta_ap(100, 6, 3, sieve)


def test_cap_enforced():
    with pytest.raises(ResourceError):
        primes.theta_ap(10**6, 1, 0, Sieve(cap=1000))


def test_digits_example(sieve):
    res = primes.count_prescribed_digits(DigitConstraint(10, 3, (3,), (1,)), sieve=sieve)
    assert res.count == 5
    assert res.primes_sample == (103, 113, 163, 173, 193)
    assert res.log_weighted == pytest.approx(math.fsum(map(math.log, (103, 113, 163, 173, 193))))


def test_digits_ratio_near_one(sieve):
    res = primes.count_prescribed_digits(DigitConstraint(10, 6, (7,), (3,)), sieve=sieve)
    assert 0.9 < res.li_ratio < 1.1
    assert 0.9 < res.log_ratio < 1.1


@pytest.mark.parametrize("kwargs", [
    dict(base=10, total_digits=2, low_digits=(3,), high_digits=(1,)),
    dict(base=10, total_digits=4, low_digits=(2,)),
    dict(base=10, total_digits=4, high_digits=(0,)),
    dict(base=1, total_digits=4),
])
def test_invalid_digit_constraints(kwargs):
    with pytest.raises(InvalidConstraintError):
        DigitConstraint(**kwargs)


def test_chebyshev_audit(sieve):
    pts = primes.chebyshev_audit([100, 1000, 10**5, 10**6], sieve=sieve)
    assert [p.x for p in pts] == [100, 1000, 10**5, 10**6]
    assert all(p.ok for p in pts)
    assert pts[-1].theta == pytest.approx(998484.175, rel=1e-8)


def test_segment_cache_round_trip(tmp_path):
    assert HEADER.itemsize == 32
    first = Sieve(cap=10**7, cache=SegmentCache(str(tmp_path)))
    a = np.concatenate(list(first.blocks(2, 5000)))
    again = SegmentCache(str(tmp_path))
    b = np.concatenate(list(Sieve(cap=10**7, cache=again).blocks(2, 5000)))
    assert again.hits == 1 and again.misses == 0
    assert a.tolist() == b.tolist()


def test_stale_cache_file_is_ignored(tmp_path):
    cache = SegmentCache(str(tmp_path))
    cache.store(0, 1 << 20, np.array([2, 3, 5], dtype=np.int64))
    with open(cache.path(0, 1 << 20), "r+b") as f:
        f.write(b"XXXX")
    assert cache.load(0, 1 << 20) is None


def test_compensated_sum():
    acc = CompensatedSum()
    for v in (1e16, 1.0, -1e16):
        acc.add(v)
    assert acc.value == 1.0
    acc2 = CompensatedSum().add_many([0.1] * 10)
    assert acc2.value == 1.0

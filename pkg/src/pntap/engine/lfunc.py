# src/pntap/engine/lfunc.py
"""Dirichlet L-functions through the Hurwitz zeta function.

L(s, chi) = q^-s sum_a chi(a) zeta(s, a/q), with zeta(s, a) by
Euler-Maclaurin summation. For nontrivial chi the 1/(s-1) parts cancel
because sum_a chi(a) = 0, so the regularised Hurwitz value
zeta(s, a) - 1/(s-1) is used and s = 1 needs no special handling.
"""
from __future__ import annotations
import cmath
import math
from functools import lru_cache
from typing import Tuple, Union

import numpy as np
from scipy.special import bernoulli, loggamma

from pntap.config import EvalSettings
from pntap.engine import chars
from pntap.engine.primes import sieve_interval
from pntap.errors import DomainError, PoleError, PreconditionError, ResourceError
from pntap.model.character import DirichletCharacter
from pntap.utils.logging import get_logger
from pntap.utils.mathx import prime_divisors
from pntap.utils.summation import ComplexCompensatedSum

log = get_logger(__name__)

DEFAULT_SETTINGS = EvalSettings()
POLE_GUARD = 1e-8
# elements per (s, a, n) work array before the s axis is chunked
_CHUNK_ELEMS = 1 << 21

ArrayLike = Union[complex, float, np.ndarray]


@lru_cache(maxsize=16)
def _em_coefficients(order: int) -> np.ndarray:
    """B_{2j} / (2j)! for j = 0..order+1."""
    b = bernoulli(2 * order + 2)
    return np.array([b[2 * j] / math.factorial(2 * j) for j in range(order + 2)], dtype=np.float64)


def _expm1_over(z: np.ndarray) -> np.ndarray:
    """(e^z - 1) / z, accurate near z = 0."""
    out = np.empty_like(z)
    small = np.abs(z) < 1e-3
    zs = z[small]
    out[small] = 1 + zs / 2 * (1 + zs / 3 * (1 + zs / 4 * (1 + zs / 5)))
    zb = z[~small]
    out[~small] = np.expm1(zb) / zb
    return out


def _em_once(s: np.ndarray, a: np.ndarray, head_terms: int, order: int,
             double_double: bool) -> Tuple[np.ndarray, float]:
    s2 = s[:, None]
    a2 = a[None, :]
    n = np.arange(head_terms, dtype=np.float64)
    logs = np.log(a2[..., None] + n)
    terms = np.exp(-s2[..., None] * logs)
    if double_double:
        flat = terms.reshape(-1, head_terms)
        head = np.array([ComplexCompensatedSum().add_many(row).value for row in flat]).reshape(s2.shape[0], a.size)
    else:
        head = terms.sum(axis=-1)

    x = head_terms + a2
    logx = np.log(x)
    x_s = np.exp(-s2 * logx)
    tail = -logx * _expm1_over((1 - s2) * logx) + 0.5 * x_s

    coeff = _em_coefficients(order)
    poch = s2 * np.ones_like(x_s)
    xpow = x_s / x
    for j in range(1, order + 1):
        tail = tail + coeff[j] * poch * xpow
        poch = poch * (s2 + 2 * j - 1) * (s2 + 2 * j)
        xpow = xpow / (x * x)
    nxt = coeff[order + 1] * poch * xpow
    denom = np.maximum(s2.real + 2 * order + 1, 1.0)
    err = np.abs(nxt) * np.abs(s2 + 2 * order + 1) / denom
    return head + tail, float(err.max()) if err.size else 0.0


def hurwitz_regular(s: ArrayLike, a: ArrayLike, settings: EvalSettings = DEFAULT_SETTINGS) -> np.ndarray:
    """zeta(s, a) - 1/(s - 1) on the grid s x a; finite at s = 1.

    The head length doubles until the next Euler-Maclaurin term falls
    below ``target_abs_error``.
    """
    s = np.atleast_1d(np.asarray(s, dtype=np.complex128)).ravel()
    a = np.atleast_1d(np.asarray(a, dtype=np.float64)).ravel()
    if np.any(a <= 0) or np.any(a > 1):
        raise DomainError("Hurwitz parameter a must lie in (0, 1]")
    if s.size and np.max(np.abs(s.imag)) > settings.t_cap:
        raise ResourceError(f"|Im s| exceeds t_cap={settings.t_cap}", {"t_cap": settings.t_cap})

    out = np.empty((s.size, a.size), dtype=np.complex128)
    head_terms = settings.euler_maclaurin_terms
    step = max(1, _CHUNK_ELEMS // max(1, a.size * head_terms))
    for i in range(0, s.size, step):
        block = s[i:i + step]
        n_terms = head_terms
        while True:
            vals, err = _em_once(block, a, n_terms, settings.bernoulli_order, settings.double_double)
            if err <= settings.target_abs_error:
                break
            if n_terms * 2 > settings.max_head_terms:
                raise ResourceError("Euler-Maclaurin budget exhausted",
                                    {"head_terms": n_terms, "error_estimate": err})
            n_terms *= 2
            log.debug("hurwitz: raising head to %d terms (estimate %.3g)", n_terms, err)
        out[i:i + step] = vals
    return out


def hurwitz_zeta(s: complex, a: float, settings: EvalSettings = DEFAULT_SETTINGS) -> complex:
    if abs(complex(s) - 1) < POLE_GUARD:
        raise PoleError(f"s={s} is within {POLE_GUARD} of the pole at 1", {"s": str(s)})
    return complex(hurwitz_regular(s, a, settings)[0, 0] + 1 / (complex(s) - 1))


def _check_caps(chi: DirichletCharacter, settings: EvalSettings) -> None:
    if chi.modulus > settings.q_cap:
        raise ResourceError(f"q={chi.modulus} exceeds q_cap={settings.q_cap}", {"q": chi.modulus})


def l_values(s: ArrayLike, chi: DirichletCharacter, settings: EvalSettings = DEFAULT_SETTINGS) -> np.ndarray:
    """L(s, chi) for an array of s."""
    _check_caps(chi, settings)
    s = np.atleast_1d(np.asarray(s, dtype=np.complex128)).ravel()
    q = chi.modulus
    if chi.is_trivial:
        if s.size and np.min(np.abs(s - 1)) < POLE_GUARD:
            raise PoleError("trivial character: s too close to the pole at 1")
        z = hurwitz_regular(s, 1.0, settings)[:, 0] + 1 / (s - 1)
        for p in prime_divisors(q):
            z = z * (1 - np.exp(-s * math.log(p)))
        return z
    ks = np.array([k for k in range(1, q) if math.gcd(k, q) == 1], dtype=np.int64)
    vals = chars.value_table(chi)[ks]
    h = hurwitz_regular(s, ks / q, settings)
    return np.exp(-s * math.log(q)) * (h @ vals)


def l_value(s: complex, chi: DirichletCharacter, settings: EvalSettings = DEFAULT_SETTINGS) -> complex:
    return complex(l_values(s, chi, settings)[0])


# ---------------------------------------------------------------------------
# completed L-function
# ---------------------------------------------------------------------------

def _require_primitive(chi: DirichletCharacter) -> None:
    if not chi.is_primitive:
        raise PreconditionError(f"character {chi.label} is not primitive (conductor {chi.conductor})",
                                {"label": chi.label, "conductor": chi.conductor})


@lru_cache(maxsize=1024)
def root_number(chi: DirichletCharacter) -> complex:
    """epsilon(chi) = tau(chi) / (i^a sqrt(q))."""
    _require_primitive(chi)
    a = chars.parity(chi)
    return chars.gauss_sum(chi) / ((1j ** a) * math.sqrt(chi.modulus))


def log_gamma_factor(s: ArrayLike, chi: DirichletCharacter) -> np.ndarray:
    """log of (q/pi)^((s+a)/2) Gamma((s+a)/2)."""
    a = chars.parity(chi)
    w = (np.asarray(s, dtype=np.complex128) + a) / 2
    return w * math.log(chi.modulus / math.pi) + loggamma(w)


def completed_l(s: complex, chi: DirichletCharacter, settings: EvalSettings = DEFAULT_SETTINGS) -> complex:
    _require_primitive(chi)
    g = complex(log_gamma_factor(complex(s), chi))
    return cmath.exp(g) * l_value(s, chi, settings)


def functional_equation_residual(s: complex, chi: DirichletCharacter,
                                 settings: EvalSettings = DEFAULT_SETTINGS) -> float:
    """|Lambda(s, chi) - eps(chi) Lambda(1 - s, conj chi)|, both sides evaluated independently."""
    _require_primitive(chi)
    left = completed_l(s, chi, settings)
    right = root_number(chi) * completed_l(1 - complex(s), chars.conjugate(chi), settings)
    return abs(left - right)


def hardy_z_array(t: ArrayLike, chi: DirichletCharacter,
                  settings: EvalSettings = DEFAULT_SETTINGS) -> Tuple[np.ndarray, np.ndarray]:
    """Real rotation of L(1/2 + it) and the imaginary residue of that rotation.

    Z(t) = eps^(-1/2) exp(i Im log G(1/2+it)) L(1/2+it, chi); |Z| = |L|.
    """
    _require_primitive(chi)
    t = np.atleast_1d(np.asarray(t, dtype=np.float64)).ravel()
    s = 0.5 + 1j * t
    rot = np.exp(1j * log_gamma_factor(s, chi).imag) / np.sqrt(root_number(chi))
    z = rot * l_values(s, chi, settings)
    return z.real, z.imag


def hardy_z(t: float, chi: DirichletCharacter, settings: EvalSettings = DEFAULT_SETTINGS,
            return_imag: bool = False):
    re, im = hardy_z_array(t, chi, settings)
    if return_imag:
        return float(re[0]), float(abs(im[0]))
    return float(re[0])


# ---------------------------------------------------------------------------
# logarithmic derivative
# ---------------------------------------------------------------------------

@lru_cache(maxsize=4)
def _von_mangoldt_support(cutoff: int) -> Tuple[np.ndarray, np.ndarray]:
    """(n, Lambda(n)) for prime powers n <= cutoff."""
    primes = sieve_interval(2, cutoff)
    ns, lams = [primes], [np.log(primes.astype(np.float64))]
    base = primes[primes <= math.isqrt(cutoff)]
    pk = base.copy()
    while base.size:
        pk = pk * base
        keep = pk <= cutoff
        base, pk = base[keep], pk[keep]
        ns.append(pk)
        lams.append(np.log(base.astype(np.float64)))
    n = np.concatenate(ns)
    lam = np.concatenate(lams)
    order = np.argsort(n, kind="stable")
    return n[order], lam[order]


def _smooth_tail(s: complex, y0: float, k: int) -> complex:
    """integral over u > e^y0 of u^-s (log u)^k / k! du."""
    w = s - 1
    acc = 0j
    for j in range(k + 1):
        acc += y0 ** j / math.factorial(j) / w ** (k - j + 1)
    return cmath.exp(-w * y0) * acc


def _tail_size(cutoff: int, sigma: float, k: int) -> float:
    return cutoff ** (0.5 - sigma) * math.log(cutoff) ** (k + 2)


def series_cutoff(sigma: float, k: int = 0, settings: EvalSettings = DEFAULT_SETTINGS) -> int:
    """Smallest doubling of ``dirichlet_cutoff`` whose tail size meets ``target_abs_error``."""
    cutoff = settings.dirichlet_cutoff
    while _tail_size(cutoff, sigma, k) > settings.target_abs_error:
        if cutoff * 2 > settings.max_dirichlet_cutoff:
            tail = _tail_size(cutoff, sigma, k)
            raise ResourceError(
                f"Dirichlet series tail {tail:.3g} at sigma={sigma} stays above {settings.target_abs_error:g} "
                f"within max_dirichlet_cutoff={settings.max_dirichlet_cutoff}",
                {"sigma": sigma, "k": k, "cutoff": cutoff, "tail": tail,
                 "target_abs_error": settings.target_abs_error})
        cutoff *= 2
    if cutoff != settings.dirichlet_cutoff:
        log.debug("log_derivative: cutoff raised to %d at sigma=%.4g", cutoff, sigma)
    return cutoff


def log_derivative(s: complex, chi: DirichletCharacter, k: int = 0,
                   settings: EvalSettings = DEFAULT_SETTINGS, return_tail: bool = False):
    """sum_n chi(n) Lambda(n) (log n)^k / k! n^-s.

    For k = 0 this is -L'/L(s, chi). The series is cut at X =
    ``settings.dirichlet_cutoff``, doubled until the tail size
    X^(1/2 - sigma) (log X)^(k+2) is below ``target_abs_error``; past
    ``max_dirichlet_cutoff`` a ResourceError is raised. For principal
    characters the smooth tail is added in closed form. ``return_tail``
    also yields the tail size at the cutoff used.
    """
    s = complex(s)
    if s.real < 1 + 1e-3:
        raise DomainError(f"log_derivative needs Re s >= 1.001, got {s.real}", {"s": str(s)})
    if k < 0:
        raise DomainError("derivative order k must be >= 0")
    cutoff = series_cutoff(s.real, k, settings)
    n, lam = _von_mangoldt_support(cutoff)
    logn = np.log(n.astype(np.float64))
    weight = lam * (logn ** k) / math.factorial(k) if k else lam
    terms = chars.values_at(chi, n) * weight * np.exp(-s * logn)
    total = ComplexCompensatedSum().add_many(terms).value

    y0 = math.log(cutoff)
    if chi.is_trivial:
        total += _smooth_tail(s, y0, k)
        # prime powers of p | q past the cutoff are not in chi_0's series
        for p in prime_divisors(chi.modulus):
            lp = math.log(p)
            j = math.floor(y0 / lp) + 1
            while True:
                term = lp * (j * lp) ** k / math.factorial(k) * cmath.exp(-s * j * lp)
                total -= term
                if abs(term) < 1e-18:
                    break
                j += 1
    tail = _tail_size(cutoff, s.real, k)
    if return_tail:
        return total, tail
    return total


def euler_product(s: complex, chi: DirichletCharacter, bound: int = 10**5) -> complex:
    """prod_{p <= bound} (1 - chi(p) p^-s)^-1, an oracle for Re s > 1."""
    p = sieve_interval(2, bound)
    z = chars.values_at(chi, p) * np.exp(-complex(s) * np.log(p.astype(np.float64)))
    return complex(np.exp(-ComplexCompensatedSum().add_many(np.log1p(-z)).value))

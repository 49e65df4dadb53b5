# src/pntap/engine/pnt.py
"""The prediction side: lambda, theta, zero-free regions, error envelopes,
the truncated explicit formula and reports against sieved counts.

Effective constants are parameters. Nothing here asserts a pass or fail
against an envelope; reports carry the implied constant instead.
"""
from __future__ import annotations
import math
from fractions import Fraction
from typing import Dict, Mapping, Optional, Tuple

import numpy as np
from scipy.integrate import quad

from pntap import constants as K
from pntap.config import EvalSettings
from pntap.engine import chars, zeros
from pntap.engine.lfunc import DEFAULT_SETTINGS
from pntap.engine.primes import Sieve, psi_ap, theta_all_classes, theta_ap, theta_short_interval
from pntap.errors import DomainError, InvalidResidueError, StaleInputError
from pntap.model.character import DirichletCharacter
from pntap.model.profile import ZeroFreeRegionProfile
from pntap.model.query import ThetaQuery
from pntap.model.report import BrunTitchmarshReport, ExplicitFormulaAudit, PredictionReport
from pntap.model.zero import ExceptionalZero, ZeroSet
from pntap.utils.logging import get_logger
from pntap.utils.mathx import euler_phi, log_plus, squarefree_kernel

log = get_logger(__name__)

ENVELOPE_FLAVORS = ("VK", "POWERFUL", "GALLAGHER", "LONG_INTERVAL", "FLEXIBLE")


def _exists(exc: Optional[ExceptionalZero]) -> bool:
    return exc is not None and exc.exists


def chi1_at(exc: ExceptionalZero, a: int) -> int:
    """chi_1(a) as an integer in {-1, 0, 1}."""
    return int(round(chars.evaluate(exc.chi1, a).real))


# ---------------------------------------------------------------------------
# lambda and theta
# ---------------------------------------------------------------------------

def _log_mean_power(x: float, h: float, beta1: float) -> float:
    """log of (x^b - (x-h)^b) / (b h), the mean of t^(b-1) over (x-h, x)."""
    if h < x:
        tail = math.log(-math.expm1(beta1 * math.log1p(-h / x)))
    else:
        tail = 0.0
    return beta1 * math.log(x) + tail - math.log(beta1) - math.log(h)


def _lambda_closed(x: float, h: float, beta1: float, chi1_a: int) -> float:
    lm = _log_mean_power(x, h, beta1)
    if chi1_a == 1:
        return -math.expm1(lm)
    return 1.0 - chi1_a * math.exp(lm)


def lambda_(x: float, q: int, a: int, h: float, exc: Optional[ExceptionalZero] = None,
            ignore_exceptional: bool = False) -> float:
    """lambda = (1/h) int_{x-h}^{x} (1 - chi_1(a) t^(beta_1 - 1)) dt, or 1."""
    if not 4 <= h <= x:
        raise DomainError(f"need 4 <= h <= x, got h={h}, x={x}", {"x": x, "h": h})
    if math.gcd(int(a), int(q)) != 1:
        raise InvalidResidueError(f"gcd({a}, {q}) > 1", {"a": a, "q": q})
    if ignore_exceptional or not _exists(exc):
        return 1.0
    return _lambda_closed(x, h, exc.beta1, chi1_at(exc, a))


def lambda_quadrature(x: float, h: float, beta1: float, chi1_a: int) -> float:
    """The defining integral by scipy quad, after scaling t = x u."""
    lo = 1 - h / x
    if lo <= 0:
        # int_0^1 u^(b-1) du with the algebraic endpoint weight
        mass, _ = quad(lambda u: 1.0, 0.0, 1.0, weight="alg", wvar=(beta1 - 1, 0.0))
    else:
        mass, _ = quad(lambda u: u ** (beta1 - 1), lo, 1.0, epsabs=0.0, epsrel=1e-13, limit=200)
    return 1 - chi1_a * x ** beta1 * mass / h


def lambda_mvt_xi(x: float, h: float, beta1: float) -> float:
    """The xi in (x - h, x) with lambda = 1 - chi_1(a) xi^(beta_1 - 1)."""
    if not 0 < h <= x or not 0 < beta1 < 1:
        raise DomainError("need 0 < h <= x and beta1 in (0, 1)", {"x": x, "h": h, "beta1": beta1})
    return math.exp(_log_mean_power(x, h, beta1) / (beta1 - 1))


def lambda_bounds_check(x: float, h: float, beta1: float, chi1_a: int) -> bool:
    """(1/8) min{1, (1 - beta1) log x} < lambda < 2."""
    if x < 4 or not math.sqrt(x) <= h <= x:
        raise DomainError("need x >= 4 and sqrt(x) <= h <= x", {"x": x, "h": h})
    if not 0.97 < beta1 < 1:
        raise DomainError(f"beta1 must lie in (0.97, 1), got {beta1}", {"beta1": beta1})
    if chi1_a not in (1, -1):
        raise DomainError(f"chi1(a) must be +1 or -1, got {chi1_a}")
    lam = _lambda_closed(x, h, beta1, chi1_a)
    lower = min(1.0, (1 - beta1) * math.log(x)) / 8
    return lower < lam < 2


def theta_constant(exc_exists: bool, ignore_exceptional: bool = False) -> Fraction:
    if ignore_exceptional:
        return K.THETA_NO_EXCEPTIONAL
    return K.THETA_EXCEPTIONAL if exc_exists else K.THETA_NO_EXCEPTIONAL


def siegel_floor_ok(beta1: float, q: int, b: float = K.B_SIEGEL_DEFAULT) -> bool:
    """1 - beta1 >= b q^(-1/2)."""
    return 1 - beta1 >= b / math.sqrt(q)


def check_siegel(exc: ExceptionalZero, b: float = K.B_SIEGEL_DEFAULT) -> None:
    if _exists(exc) and not siegel_floor_ok(exc.beta1, exc.modulus, b):
        raise DomainError(f"beta1={exc.beta1} violates 1 - beta1 >= {b}/sqrt({exc.modulus})",
                          {"beta1": exc.beta1, "q": exc.modulus, "b": b})


def range_condition(x: float, h: float, q: int, theta: float, eps: float,
                    exc_exists: bool = False) -> Tuple[bool, float]:
    """h >= x^(1-d1), q <= x^d2 with d1 + c d2 <= 1 - theta - eps; c = 3/2, or 1 without beta_1.

    Returns (met, margin) with margin = (1 - theta - eps) - (d1 + c d2).
    """
    lx = math.log(x)
    d1 = 1 - math.log(h) / lx
    d2 = math.log(q) / lx
    c = 1.5 if exc_exists else 1.0
    margin = (1 - float(theta) - eps) - (d1 + c * d2)
    return margin >= 0, margin


# ---------------------------------------------------------------------------
# zero-free regions and envelopes
# ---------------------------------------------------------------------------

def zfr_delta(t: float, q: int, profile: ZeroFreeRegionProfile) -> float:
    if t < math.e:
        raise DomainError(f"zfr_delta needs t >= e, got {t}", {"t": t})
    if profile.kind == "VK":
        lt = math.log(t)
        denom = math.log(q) + lt ** (2 / 3) * log_plus(lt) ** (1 / 3)
        num = profile.c_vk
    elif profile.kind == "IWANIEC":
        lqt = math.log(q * t)
        denom = math.log(profile.squarefree_part) + lqt ** 0.75 * log_plus(lqt) ** 0.75
        num = profile.c_iw
    else:
        lg = math.log(q * (t + 3))
        return profile.c_dh * log_plus(1 / ((1 - profile.beta1) * lg)) / lg
    if denom <= 0:
        raise DomainError("zero-free region width is unbounded at this (t, q)", {"t": t, "q": q})
    return num / denom


def _exp_neg(num: float, denom: float) -> float:
    return math.exp(-num / denom) if denom > 0 else 0.0


def _flexible_sup(x: float, h: float, q: int, theta: float, eps: float,
                  profile: ZeroFreeRegionProfile, grid: int = 400) -> float:
    lo = max(math.e, math.e * x / h)
    hi = x ** ((1 - theta) * (1 - eps)) / q
    if hi < lo:
        return 0.0
    ts = np.geomspace(lo, hi, grid) if hi > lo else np.array([lo])
    lx = math.log(x)
    vals = [math.exp(-eps * eps * zfr_delta(float(t), q, profile) * lx) / math.sqrt(t) for t in ts]
    return max(vals)


def error_envelope(x: float, h: float, q: int, C: float, flavor: str = "VK", *,
                   profile: Optional[ZeroFreeRegionProfile] = None, beta1: Optional[float] = None,
                   theta: float = float(K.THETA_NO_EXCEPTIONAL), eps: float = 0.1) -> float:
    """Relative error envelope of the selected shape; C stands in for the effective constant."""
    if not 4 <= h <= x:
        raise DomainError(f"need 4 <= h <= x, got h={h}, x={x}", {"x": x, "h": h})
    if C <= 0:
        raise DomainError("C must be positive", {"C": C})
    if flavor not in ENVELOPE_FLAVORS:
        raise DomainError(f"unknown envelope flavor {flavor!r}", {"flavor": flavor})
    lx, lq = math.log(x), math.log(q)
    llx = log_plus(lx)
    r = math.log(x / h)
    tail = lx ** 0.4 * llx ** 0.2
    if flavor == "VK":
        return _exp_neg(C * lx, lq + r ** (2 / 3) * log_plus(r) ** (1 / 3) + tail)
    if flavor == "POWERFUL":
        d = squarefree_kernel(q)
        rq = math.log(q * x / h)
        return _exp_neg(C * lx, math.log(d) + rq ** 0.75 * log_plus(rq) ** 0.75 + (lx * llx) ** (3 / 7))
    if flavor == "GALLAGHER":
        if beta1 is None or not 0 < beta1 < 1:
            raise DomainError("GALLAGHER envelope needs beta1 in (0, 1)")
        return (1 - beta1) * lq * _exp_neg(C * lx, lq + r ** (2 / 3) * log_plus(r) ** (1 / 3) + tail)
    if flavor == "LONG_INTERVAL":
        first = _exp_neg(C * lx, lq)
        second = math.exp(-C * lx ** 0.6 / llx ** 0.2) if llx > 0 else 0.0
        return first + second
    if q < 2:
        raise DomainError("FLEXIBLE envelope needs q >= 2", {"q": q})
    profile = profile or ZeroFreeRegionProfile("VK")
    sup = _flexible_sup(x, h, q, theta, eps, profile)
    return C * (math.sqrt(x / h) * lx / lq * sup + x ** (-eps * theta / 2))


# ---------------------------------------------------------------------------
# explicit formula
# ---------------------------------------------------------------------------

def _power_roots(q: int, a: int, k: int) -> int:
    """#{b mod q coprime to q : b^k = a mod q}."""
    return sum(1 for b in range(q) if math.gcd(b, q) == 1 and pow(b, k, q) == a % q)


def prime_power_mass(x: float, q: int, a: int) -> float:
    """Expected contribution of p^k <= x, k >= 2, to psi(x; q, a)."""
    phi = euler_phi(q)
    acc = 0.0
    k = 2
    while 2 ** k <= x:
        acc += _power_roots(q, a, k) * x ** (1 / k) / phi
        k += 1
    return acc


def _zero_sets(q: int, T: float, zero_sets: Optional[Mapping[DirichletCharacter, ZeroSet]],
               settings: EvalSettings) -> Dict[DirichletCharacter, ZeroSet]:
    out: Dict[DirichletCharacter, ZeroSet] = {}
    for chi in chars.character_group(q):
        prim = chars.primitive_of(chi)
        zs = zero_sets.get(prim) if zero_sets is not None else None
        if zs is None:
            zs = zeros.zero_set(prim, T, settings)
        if zs.complete_to < T - 1:
            raise StaleInputError(f"zero set for {prim.label} complete to {zs.complete_to}, need {T}",
                                  {"label": prim.label, "complete_to": zs.complete_to, "T": T})
        out[chi] = zs
    return out


def explicit_formula_theta(x: float, T: float, q: int, a: int,
                           zero_sets: Optional[Mapping[DirichletCharacter, ZeroSet]] = None,
                           exc: Optional[ExceptionalZero] = None,
                           settings: EvalSettings = DEFAULT_SETTINGS,
                           correct_prime_powers: bool = False) -> float:
    """x/phi(q) - [chi_1(a)/phi(q)] x^b1/b1 - (1/phi(q)) sum_chi conj chi(a) sum'(x^rho/rho - sum_{|gamma|<1} 1/rho).

    Zeros come from the primitive character inducing each chi. The plain
    value carries the sqrt(x)-size prime-power slack; ``correct_prime_powers``
    takes off the expected mass of p^k <= x, k >= 2.
    """
    if x < 2 or T < 2:
        raise DomainError("explicit formula needs x, T >= 2", {"x": x, "T": T})
    q = chars.check_modulus(q)
    if math.gcd(int(a), q) != 1:
        raise InvalidResidueError(f"gcd({a}, {q}) > 1", {"a": a, "q": q})
    phi = euler_phi(q)
    total = x / phi
    if _exists(exc):
        total -= chi1_at(exc, a) / phi * x ** exc.beta1 / exc.beta1
    lx = math.log(x)
    for chi, zs in _zero_sets(q, T, zero_sets, settings).items():
        rhos = zs.rhos
        if rhos.size == 0:
            continue
        if _exists(exc):
            rhos = rhos[np.abs(rhos - exc.beta1) > 1e-12]
        rhos = rhos[(rhos.real > 0) & (np.abs(rhos.imag) <= T)]
        s = np.sum(np.exp(rhos * lx) / rhos) - np.sum(1 / rhos[np.abs(rhos.imag) < 1])
        total -= (np.conj(chars.evaluate(chi, a)) * s).real / phi
    if correct_prime_powers:
        total -= prime_power_mass(x, q, a)
    return float(total)


def explicit_formula_audit(x: float, T: float, q: int, a: int,
                           zero_sets: Optional[Mapping[DirichletCharacter, ZeroSet]] = None,
                           exc: Optional[ExceptionalZero] = None,
                           settings: EvalSettings = DEFAULT_SETTINGS,
                           prime_powers: bool = False, correct_prime_powers: bool = False,
                           sieve: Optional[Sieve] = None) -> ExplicitFormulaAudit:
    """Explicit formula against theta_ap, or psi_ap when ``prime_powers``."""
    sets = _zero_sets(q, T, zero_sets, settings)
    value = explicit_formula_theta(x, T, q, a, sets, exc, settings, correct_prime_powers and not prime_powers)
    actual = psi_ap(x, q, a, sieve) if prime_powers else theta_ap(x, q, a, sieve)
    used = sum(int(np.count_nonzero(np.abs(zs.gammas) <= T)) for zs in sets.values())
    low = 0.0
    for chi, zs in sets.items():
        r = zs.rhos
        r = r[np.abs(r.imag) < 1]
        if r.size:
            low += float((np.conj(chars.evaluate(chi, a)) * np.sum(1 / r)).real)
    return ExplicitFormulaAudit(q, a, x, T, value, actual, used, prime_powers, low,
                                exc.beta1 if _exists(exc) else None)


# ---------------------------------------------------------------------------
# reports against the sieve
# ---------------------------------------------------------------------------

def exceptional_for(q: int, exc: Optional[ExceptionalZero], settings: EvalSettings) -> ExceptionalZero:
    if exc is not None:
        return exc
    if 3 <= q <= settings.q_cap:
        return zeros.exceptional_zero_search(q, settings)
    log.info("q=%d outside the searchable range; assuming no exceptional zero", q)
    return zeros.no_exceptional(q)


def predict_and_compare(x: float, h: float, q: int, a: int, eps: float = 0.1,
                        profile: Optional[ZeroFreeRegionProfile] = None, C: float = K.C_MAIN_DEFAULT,
                        flavor: str = "VK", exc: Optional[ExceptionalZero] = None,
                        ignore_exceptional: bool = False, b_siegel: float = K.B_SIEGEL_DEFAULT,
                        settings: EvalSettings = DEFAULT_SETTINGS, sieve: Optional[Sieve] = None) -> PredictionReport:
    query = ThetaQuery(x, h, q, a)
    exc = exceptional_for(q, exc, settings)
    check_siegel(exc, b_siegel)
    theta = theta_constant(exc.exists, ignore_exceptional)
    lam = lambda_(x, q, a, h, exc, ignore_exceptional)
    phi = euler_phi(q)
    primary = h / phi
    secondary = 0.0
    if exc.exists and not ignore_exceptional:
        secondary = -chi1_at(exc, a) / phi * math.exp(_log_mean_power(x, h, exc.beta1)) * h
    predicted = primary + secondary
    actual = theta_short_interval(query, sieve)
    rel = abs(1 - actual / predicted) if predicted > 0 else float("inf")
    envelope = error_envelope(x, h, q, C, flavor, profile=profile,
                              beta1=exc.beta1 if exc.exists else None, theta=float(theta), eps=eps)
    lhs = lam * h / phi
    margin = math.log(lhs) / math.log(x) - (float(theta) + eps) if lhs > 0 else float("-inf")
    report = PredictionReport(query, lam, theta, actual, primary, secondary, rel, envelope,
                              margin >= 0, margin, eps, flavor, exc.exists, ignore_exceptional)
    log.debug("predict x=%g h=%g q=%d a=%d: rel=%.3g", x, h, q, a, rel)
    return report


def brun_titchmarsh_audit(x: float, h: float, q: int, delta: float,
                          exc: Optional[ExceptionalZero] = None, settings: EvalSettings = DEFAULT_SETTINGS,
                          sieve: Optional[Sieve] = None) -> BrunTitchmarshReport:
    """max over a of phi(q) theta(x - h, x; q, a) / h against 1 + delta (2 + delta with beta_1)."""
    if delta <= 0:
        raise DomainError("delta must be positive", {"delta": delta})
    if not 0 < h <= x:
        raise DomainError(f"need 0 < h <= x, got h={h}, x={x}")
    q = chars.check_modulus(q)
    exc = exceptional_for(q, exc, settings)
    lo = math.floor(x - h) + 1
    classes, _ = theta_all_classes(x, q, sieve, lo=max(lo, 2))
    phi = euler_phi(q)
    ratios = {r: phi * v / h for r, v in classes.items()}
    amax = max(ratios, key=lambda r: (ratios[r], -r))
    amin = min(ratios, key=lambda r: (ratios[r], r))
    bound = (2 + delta) if exc.exists else (1 + delta)
    return BrunTitchmarshReport(x, h, q, delta, bound, ratios[amax], amax, ratios[amin], amin, exc.exists)

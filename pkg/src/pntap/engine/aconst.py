# src/pntap/engine/aconst.py
"""Constants behind the log-free density exponent.

Covers the power-sum lower bound, the constrained minimisation of
(4 e alpha (B+1)^alpha)^A, the audit of the published constant chain and
the decay checks of j_k(u) = e^(-Bu) u^k / k!.
"""
from __future__ import annotations
import math
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import mpmath
import numpy as np
from scipy.optimize import bisect, brentq, minimize

from pntap import constants as K
from pntap.errors import ConvergenceError, DomainError, InvariantError
from pntap.model.chain import ChainAudit, ConstantChain, OptimizedConstants, PowerSumInstance, PowerSumSuite
from pntap.utils.logging import get_logger
from pntap.utils.rng import make_np_rng

log = get_logger(__name__)

LOG4 = math.log(4.0)


# ---------------------------------------------------------------------------
# power sums
# ---------------------------------------------------------------------------

def power_sum_bound(N: int, M: int) -> float:
    """1.007 (N / (4e(M+N)))^N."""
    if N < 1 or M < 0:
        raise DomainError("need N >= 1 and M >= 0", {"N": N, "M": M})
    return K.POWER_SUM_LEAD * (N / (4 * math.e * (M + N))) ** N


def _normalised_sums(inst: PowerSumInstance) -> Tuple[np.ndarray, np.ndarray]:
    z = np.asarray(inst.points, dtype=np.complex128)
    top = abs(z[0])
    if top == 0:
        raise DomainError("power sum points must not all vanish")
    ks = np.arange(inst.M + 1, inst.M + inst.N + 1)
    w = z / top
    return ks, np.abs((w[None, :] ** ks[:, None]).sum(axis=1))


def power_sum_min_k(inst: PowerSumInstance) -> Tuple[int, float]:
    """The k in [M+1, M+N] maximising |sum z_i^k| / |z_1|^k, and |sum z_i^k| there.

    Raises InvariantError when even that k falls short of the lower bound.
    """
    ks, r = _normalised_sums(inst)
    i = int(np.argmax(r))
    k = int(ks[i])
    value = float(abs(sum(z ** k for z in inst.points)))
    bound = power_sum_bound(inst.N, inst.M)
    if r[i] < bound:
        raise InvariantError(f"power sum bound violated at k={k}: ratio {r[i]:.6g} < {bound:.6g}",
                             {"k": k, "ratio": float(r[i]), "bound": bound, "N": inst.N, "M": inst.M})
    return k, value


def power_sum_ratio(inst: PowerSumInstance) -> float:
    """max_k |s_k| / |z_1|^k divided by the lower bound; never below 1 if the bound holds."""
    _, r = _normalised_sums(inst)
    return float(r.max()) / power_sum_bound(inst.N, inst.M)


def random_instance(rng: np.random.Generator, n_max: int = 4, m_max: int = 5) -> PowerSumInstance:
    n = int(rng.integers(1, n_max + 1))
    m = int(rng.integers(0, m_max + 1))
    radius = np.sqrt(rng.random(n))
    angle = rng.random(n) * 2 * math.pi
    return PowerSumInstance.of(radius * np.exp(1j * angle), m)


def power_sum_suite(instances: int = 10_000, n_max: int = 4, m_max: int = 5, seed: int = 42) -> PowerSumSuite:
    """Random instances in the unit disc; counts violations and the smallest ratio seen."""
    rng = make_np_rng(seed, stream=5)
    worst, min_ratio, bad = None, float("inf"), 0
    for _ in range(instances):
        inst = random_instance(rng, n_max, m_max)
        ratio = power_sum_ratio(inst)
        if ratio < 1:
            bad += 1
        if ratio < min_ratio:
            worst, min_ratio = inst, ratio
    return PowerSumSuite(instances, bad, min_ratio, worst, seed)


# ---------------------------------------------------------------------------
# the constraint system
# ---------------------------------------------------------------------------

def log_objective(alpha: float, A: float, B: float) -> float:
    return A * (math.log(4 * math.e * alpha) + alpha * math.log1p(B))


def objective(alpha: float, A: float, B: float) -> float:
    """(4 e alpha (B+1)^alpha)^A."""
    return math.exp(log_objective(alpha, A, B))


def contraction(alpha: float, A: float, B: float) -> float:
    """4 e alpha ((B+1) / sqrt(A^2 + B^2))^alpha; the chain needs this below 1."""
    return 4 * math.e * alpha * math.exp(alpha * (math.log1p(B) - 0.5 * math.log(A * A + B * B)))


def boundary_A(alpha: float, B: float) -> float:
    """Smallest A with contraction(alpha, A, B) <= 1."""
    return math.sqrt((4 * math.e * alpha) ** (2 / alpha) * (B + 1) ** 2 - B * B)


def final_exponent(phi: float) -> float:
    return K.FINAL_EXPONENT_COEFF * max(K.PHI_FLOOR, phi)


def theta_from_exponent(c: float) -> float:
    """theta = 1 - 1/c for a density exponent c."""
    if c <= 1:
        raise DomainError(f"density exponent must exceed 1, got {c}")
    return 1 - 1 / c


def alpha_equation(alpha: float) -> float:
    """alpha - (log alpha)^2 - (1 + log 16) log alpha - log 4 - (log 4)^2."""
    la = math.log(alpha)
    return alpha - la * la - (1 + math.log(16)) * la - LOG4 - LOG4 * LOG4


def alpha0_root(lo: float = 20.0, hi: float = 30.0, xtol: float = 1e-12) -> float:
    return float(bisect(alpha_equation, lo, hi, xtol=xtol, maxiter=200))


def _reduced(v: np.ndarray) -> float:
    # B = u^2 keeps B >= 0; A sits on the contraction boundary
    alpha, u = float(v[0]), float(v[1])
    if alpha <= 1.0001:
        return math.inf
    B = u * u
    return log_objective(alpha, boundary_A(alpha, B), B)


def _boundary_log_objective_mp(alpha, B=0):
    """log of the objective in mpmath, A taken on the contraction boundary."""
    four_e_a = 4 * mpmath.e * alpha
    A = mpmath.sqrt(four_e_a ** (2 / alpha) * (B + 1) ** 2 - B * B)
    return A * (mpmath.log(four_e_a) + alpha * mpmath.log1p(B))


def polish_on_boundary(alpha: float, dps: int = 40) -> float:
    """Refine a B = 0 minimiser by solving d/dalpha of the boundary objective = 0.

    The derivative is taken numerically in mpmath, starting from ``alpha``.
    """
    with mpmath.workdps(dps):
        try:
            root = mpmath.findroot(lambda a: mpmath.diff(_boundary_log_objective_mp, a),
                                   mpmath.mpf(alpha), tol=mpmath.mpf(10) ** (10 - dps))
        except (ValueError, ZeroDivisionError) as exc:
            raise ConvergenceError(f"boundary polish from alpha={alpha} failed: {exc}",
                                   best={"alpha": alpha}) from exc
        out = float(root)
    if abs(out - alpha) > 1.0:
        raise ConvergenceError(f"boundary polish drifted from {alpha} to {out}", best={"alpha": alpha})
    return out


def _start(x0: Tuple[float, float]):
    return minimize(_reduced, np.array(x0), method="Nelder-Mead",
                    options={"xatol": 1e-10, "fatol": 1e-14, "maxiter": 4000, "maxfev": 8000})


def optimize_constants(starts: Optional[Sequence[Tuple[float, float]]] = None, threads: int = 1) -> OptimizedConstants:
    """Minimise (4 e alpha (B+1)^alpha)^A subject to the contraction constraint.

    Nelder-Mead runs from a grid of starts over (alpha, sqrt B) with A on
    the constraint boundary. When B settles at 0 the Nelder-Mead alpha is
    polished on the boundary objective itself (see ``polish_on_boundary``).
    """
    if starts is None:
        starts = [(a, u) for a in (5.0, 15.0, 26.0, 40.0, 60.0) for u in (0.01, 0.1, 0.5)]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_start, starts))
    else:
        results = [_start(s) for s in starts]
    good = [r for r in results if r.success and math.isfinite(r.fun)]
    best = min(results, key=lambda r: r.fun)
    if not good:
        raise ConvergenceError("no Nelder-Mead start converged", best={"x": best.x.tolist(), "fun": best.fun})
    res = min(good, key=lambda r: r.fun)
    alpha, u = float(res.x[0]), float(res.x[1])
    B = u * u
    boundary = B < 1e-8
    if boundary:
        B = 0.0
        alpha = polish_on_boundary(alpha)
    A = boundary_A(alpha, B)
    log.debug("optimizer: %d/%d starts converged, alpha=%.15g B=%.3g", len(good), len(results), alpha, B)
    return OptimizedConstants(alpha, A, B, objective(alpha, A, B), boundary, len(results), len(good))


def verify_constant_chain(chain: ConstantChain = ConstantChain(), dps: int = 50) -> ChainAudit:
    """Recompute the chain in mpmath and report each check with its residual."""
    checks: Dict[str, bool] = {}
    res: Dict[str, float] = {}
    notes: List[str] = []
    with mpmath.workdps(dps):
        a, A, B = mpmath.mpf(chain.alpha), mpmath.mpf(chain.A), mpmath.mpf(chain.B)
        four_e_a = 4 * mpmath.e * a
        obj = (four_e_a * (B + 1) ** a) ** A
        con = four_e_a * ((B + 1) / mpmath.sqrt(A * A + B * B)) ** a
        expo = mpmath.mpf(K.FINAL_EXPONENT_COEFF) * max(mpmath.mpf(K.PHI_FLOOR), mpmath.mpf(chain.phi))
        base = obj ** (1 / ((a - 1) * A))
        coeff = 16 * (a - 1) * A * mpmath.log(mpmath.mpf(K.CHAIN_BASE)) * mpmath.mpf(chain.xi)

        res["objective_vs_published"] = float(abs(obj - mpmath.mpf(K.OBJECTIVE_AT_CHAIN)))
        checks["objective_matches_published"] = res["objective_vs_published"] <= 1e-6
        res["objective_above_infimum"] = float(obj - mpmath.mpf(K.OBJECTIVE_INFIMUM))
        checks["objective_at_least_infimum"] = res["objective_above_infimum"] >= -1e-9
        res["contraction_slack"] = float(1 - K.CONTRACTION_SLACK - con)
        checks["contraction_below_one"] = con < 1 - mpmath.mpf(K.CONTRACTION_SLACK)
        # base^M must dominate objective^(M/((alpha-1)A))
        res["chain_base_gap"] = float(mpmath.mpf(K.CHAIN_BASE) - base)
        checks["chain_base_dominates"] = res["chain_base_gap"] >= 0
        res["exponent_coeff_gap"] = float(abs(coeff - mpmath.mpf(K.FINAL_EXPONENT_COEFF)))
        checks["exponent_coeff_consistent"] = res["exponent_coeff_gap"] < 1e-4

    exponent = float(expo)
    res["density_slack"] = K.DENSITY_EXP_REPULSIVE - exponent
    if chain.phi <= K.PHI_HYBRID_WEYL:
        checks["exponent_within_75_4"] = exponent <= K.DENSITY_EXP_REPULSIVE
    else:
        notes.append(f"phi={chain.phi:g} gives exponent {exponent:.6f}; no 75/4 claim")
    checks["theta_71_75"] = 1 - 1 / Fraction(75, 4) == K.THETA_EXCEPTIONAL
    checks["theta_7_12"] = 1 - 1 / Fraction(12, 5) == K.THETA_NO_EXCEPTIONAL
    if chain.k_multiple is None:
        notes.append("K left free: any sufficiently large multiple of 1 + 1/phi")
    return ChainAudit(chain, float(obj), float(con), exponent, theta_from_exponent(exponent),
                      checks, res, tuple(notes))


# ---------------------------------------------------------------------------
# j_k decay
# ---------------------------------------------------------------------------

def log_j(k: int, u: float, B: float) -> float:
    """log j_k(u); -inf at u = 0 for k >= 1."""
    if u == 0:
        return 0.0 if k == 0 else -math.inf
    return -B * u + k * math.log(u) - math.lgamma(k + 1)


def j_k(k: int, u: float, B: float) -> float:
    return math.exp(log_j(k, u, B))


def root_A0_A1(B: float = K.B_CHAIN) -> Tuple[float, float]:
    """A0 e = 1/1.26 = A1 e^(1 - A1 B/4); A1 is the large root, solved for log A1."""
    a0 = 1 / (K.JK_RATIO * math.e)
    c = 1 + math.log(K.JK_RATIO)
    peak = math.log(4 / B)

    def g(u: float) -> float:
        return u + c - math.exp(u) * B / 4

    u = brentq(g, peak, peak + 10.0, xtol=1e-15)
    return a0, math.exp(u)


def jk_decay_check(k: int, B: float, A0: float, A1: float, M: int, eta: float,
                   A: float = K.A_CHAIN, samples: int = 200) -> Dict[str, object]:
    """Both decay displays at sampled n, compared in log space.

    j_k(eta log n) <= n^(-B eta) 1.26^(-k) for n <= exp(A0 M / eta), and
    j_k(eta log n) <= n^(-B eta / 2) 1.26^(-k) for n >= exp(A1 M / eta).
    """
    if M < 1 or not M <= k <= 2 * M:
        raise DomainError("need M >= 1 and k in [M, 2M]", {"k": k, "M": M})
    if not 0 < eta < 1 / (2 * A):
        raise DomainError(f"eta must lie in (0, 1/(2A)), got {eta}", {"eta": eta})
    lr = k * math.log(K.JK_RATIO)
    small_y = np.geomspace(1e-6, A0 * M / eta, samples)
    small = [log_j(k, eta * y, B) - (-B * eta * y - lr) for y in small_y]
    large_y = np.geomspace(A1 * M / eta, A1 * M / eta * 1e6, samples)
    large = [log_j(k, eta * y, B) - (-B * eta * y / 2 - lr) for y in large_y]
    return {
        "k": k,
        "M": M,
        "eta": eta,
        "log_N0": A0 * M / eta,
        "log_N1": A1 * M / eta,
        "small_n": max(small) <= 0,
        "large_n": max(large) <= 0,
        "worst_margin_small": max(small),
        "worst_margin_large": max(large),
    }

# src/pntap/engine/zeros.py
"""Zeros of Dirichlet L-functions at desk scale.

Two independent counts are kept side by side: sign changes of the real
rotation Z(t) on the critical line, and the argument principle around
rectangles in the strip. Any disagreement is reported, never reconciled.
"""
from __future__ import annotations
import math
from concurrent.futures import ThreadPoolExecutor
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import brentq

from pntap import constants as K
from pntap.config import EvalSettings
from pntap.engine import chars, lfunc
from pntap.engine.lfunc import DEFAULT_SETTINGS
from pntap.errors import (DomainError, InconclusiveContourError, ResourceError, ToolkitError,
                          ZeroDiscrepancyError)
from pntap.model.character import DirichletCharacter
from pntap.model.zero import DensityRow, DensityTable, ExceptionalZero, RectangleCount, ZeroRecord, ZeroSet
from pntap.utils.logging import get_logger

log = get_logger(__name__)

SCAN_STEP = 0.05
RETRY_STEP = 0.0125
BRENT_XTOL = 1e-10
RIGHT_EDGE = 1.05
LEFT_FLOOR = 1e-3
SIGMA_SHIFT = 1e-6
EDGE_CLEARANCE = 1e-3
MAX_PERTURB = 0.01
PHASE_STEP = math.pi / 4
PHASE_FAIL = math.pi / 2
MAX_DEPTH = 40
EXC_STEP = 1e-4
EXC_XTOL = 5e-13


def _check(chi: DirichletCharacter, T: float, settings: EvalSettings) -> None:
    lfunc._require_primitive(chi)
    if chi.modulus > settings.q_cap:
        raise ResourceError(f"q={chi.modulus} exceeds q_cap={settings.q_cap}", {"q": chi.modulus})
    if T > settings.t_cap:
        raise ResourceError(f"T={T} exceeds t_cap={settings.t_cap}", {"T": T})


def _grid(lo: float, hi: float, step: float) -> np.ndarray:
    n = max(1, math.ceil((hi - lo) / step - 1e-12))
    return np.linspace(lo, hi, n + 1)


def _sign_brackets(ts: np.ndarray, zs: np.ndarray) -> List[Tuple[float, float]]:
    out = []
    exact = np.flatnonzero(zs == 0)
    out.extend((float(ts[i]), float(ts[i])) for i in exact)
    change = np.flatnonzero(zs[:-1] * zs[1:] < 0)
    out.extend((float(ts[i]), float(ts[i + 1])) for i in change)
    return out


def _retry_brackets(ts: np.ndarray, zs: np.ndarray, chi: DirichletCharacter,
                    settings: EvalSettings) -> List[Tuple[float, float]]:
    """Rescan around local minima of |Z| where no sign change was seen."""
    if ts.size < 3:
        return []
    a = np.abs(zs)
    same = (zs[:-2] * zs[2:] > 0) & (zs[:-2] * zs[1:-1] > 0)
    minima = np.flatnonzero(same & (a[1:-1] < a[:-2]) & (a[1:-1] < a[2:])) + 1
    out: List[Tuple[float, float]] = []
    for i in minima:
        fine = _grid(float(ts[i - 1]), float(ts[i + 1]), RETRY_STEP)
        fz, _ = lfunc.hardy_z_array(fine, chi, settings)
        found = _sign_brackets(fine, fz)
        if found:
            log.debug("retry near t=%.4f found %d extra sign changes", ts[i], len(found))
        out.extend(found)
    return out


def critical_line_zeros(chi: DirichletCharacter, T: float, settings: EvalSettings = DEFAULT_SETTINGS,
                        step: float = SCAN_STEP) -> List[ZeroRecord]:
    """Zeros 1/2 + i gamma with |gamma| <= T from sign changes of Z(t)."""
    _check(chi, T, settings)
    lo = 0.0 if chi.is_real else -float(T)
    ts = _grid(lo, float(T), step)
    zs, _ = lfunc.hardy_z_array(ts, chi, settings)
    brackets = _sign_brackets(ts, zs) + _retry_brackets(ts, zs, chi, settings)

    def f(t: float) -> float:
        return lfunc.hardy_z(t, chi, settings)

    gammas: List[float] = []
    for a, b in brackets:
        gammas.append(a if a == b else float(brentq(f, a, b, xtol=BRENT_XTOL)))
    gammas.sort()
    dedup: List[float] = []
    for g in gammas:
        if not dedup or g - dedup[-1] > 1e-9:
            dedup.append(g)
    if chi.is_real:
        dedup = sorted([-g for g in dedup if g > 0] + dedup)
    label = chi.label
    return [ZeroRecord(gamma=g, character=label, refinement_width=2 * BRENT_XTOL)
            for g in dedup if abs(g) <= T]


@lru_cache(maxsize=512)
def zero_set(chi: DirichletCharacter, T: float, settings: EvalSettings = DEFAULT_SETTINGS) -> ZeroSet:
    return ZeroSet(chi, float(T), tuple(critical_line_zeros(chi, T, settings)))


def scan_modulus(q: int, T: float, settings: EvalSettings = DEFAULT_SETTINGS,
                 threads: int = 1, primitive_only: bool = True) -> List[ZeroSet]:
    """Zero sets for the characters mod q, merged in character order."""
    group = chars.character_group(q)
    targets = [c for c in group if c.is_primitive] if primitive_only \
        else list(dict.fromkeys(chars.primitive_of(c) for c in group))
    if threads > 1 and len(targets) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(lambda c: zero_set(c, T, settings), targets))
    return [zero_set(c, T, settings) for c in targets]


# ---------------------------------------------------------------------------
# argument principle
# ---------------------------------------------------------------------------

def _rotated_l(s: np.ndarray, chi: DirichletCharacter, settings: EvalSettings) -> np.ndarray:
    return lfunc.l_values(s, chi, settings) * np.exp(1j * lfunc.log_gamma_factor(s, chi).imag)


def _phase_change(pts: np.ndarray, chi: DirichletCharacter, settings: EvalSettings) -> Tuple[float, int]:
    w = _rotated_l(pts, chi, settings)
    evals = pts.size
    for _ in range(MAX_DEPTH):
        d = np.angle(w[1:] / w[:-1])
        if not np.all(np.isfinite(d)):
            raise InconclusiveContourError("L vanishes on the contour", {"label": chi.label})
        bad = np.flatnonzero(np.abs(d) > PHASE_STEP)
        if bad.size == 0:
            return float(d.sum()), evals
        mids = (pts[bad] + pts[bad + 1]) / 2
        wm = _rotated_l(mids, chi, settings)
        evals += mids.size
        pts = np.insert(pts, bad + 1, mids)
        w = np.insert(w, bad + 1, wm)
    d = np.angle(w[1:] / w[:-1])
    worst = float(np.max(np.abs(d)))
    if worst > PHASE_FAIL or not np.isfinite(worst):
        raise InconclusiveContourError("phase step above pi/2 after refinement",
                                       {"label": chi.label, "phase_step": worst})
    return float(d.sum()), evals


def _contour(sigma_left: float, t_lo: float, t_hi: float, step: float = SCAN_STEP) -> np.ndarray:
    bottom = _grid(sigma_left, RIGHT_EDGE, step) + 1j * t_lo
    right = RIGHT_EDGE + 1j * _grid(t_lo, t_hi, step)
    top = _grid(RIGHT_EDGE, sigma_left, step) + 1j * t_hi
    left = sigma_left + 1j * _grid(t_hi, t_lo, step)
    return np.concatenate([bottom, right[1:], top[1:], left[1:]])


def _winding(chi: DirichletCharacter, sigma_left: float, t_lo: float, t_hi: float,
             settings: EvalSettings) -> Tuple[int, int]:
    total, evals = _phase_change(_contour(sigma_left, t_lo, t_hi), chi, settings)
    turns = total / (2 * math.pi)
    n = round(turns)
    if abs(turns - n) > 0.25:
        raise InconclusiveContourError("winding number is not close to an integer",
                                       {"label": chi.label, "turns": turns})
    return int(n), evals


def _clear_edge(target: float, gammas: np.ndarray, direction: int) -> Tuple[float, bool]:
    """Move a horizontal edge outward by at most MAX_PERTURB until it clears every located zero."""
    for off in np.arange(0.0, MAX_PERTURB + 1e-12, 2.5e-4):
        cand = target + direction * off
        crossed = (gammas - target) * direction
        passed = np.any((crossed > 0) & (crossed <= off))
        if passed:
            continue
        if gammas.size == 0 or np.min(np.abs(gammas - cand)) >= EDGE_CLEARANCE:
            return float(cand), off > 0
    return float(target), False


def _pole_inside(chi: DirichletCharacter, sigma_left: float, t_lo: float, t_hi: float) -> int:
    return 1 if chi.modulus == 1 and sigma_left < 1 and t_lo < 0 < t_hi else 0


@lru_cache(maxsize=4096)
def rectangle_zero_count_detail(chi: DirichletCharacter, sigma: float, T: float,
                                settings: EvalSettings = DEFAULT_SETTINGS) -> RectangleCount:
    _check(chi, T, settings)
    if not 0 <= sigma <= 1:
        raise DomainError(f"sigma must lie in [0, 1], got {sigma}", {"sigma": sigma})
    if sigma >= 1:
        return RectangleCount(0, 1.0, -T, T, 0)
    sigma_left = max(sigma - SIGMA_SHIFT, LEFT_FLOOR)
    known = zero_set(chi, min(T + 0.5, settings.t_cap), settings).gammas
    t_hi, moved_hi = _clear_edge(T, known, +1)
    t_lo, moved_lo = _clear_edge(-T, known, -1)
    n, evals = _winding(chi, sigma_left, t_lo, t_hi, settings)
    pole = _pole_inside(chi, sigma_left, t_lo, t_hi)
    count = n + pole
    if count < 0:
        raise InconclusiveContourError("negative zero count", {"label": chi.label, "winding": n})
    notes = ()
    if moved_hi or moved_lo:
        notes = (f"T moved to [{t_lo:.4f}, {t_hi:.4f}]",)
        log.info("%s: contour height perturbed to %.4f", chi.label, t_hi)
    return RectangleCount(count, sigma_left, t_lo, t_hi, evals, moved_hi or moved_lo, pole, notes)


def rectangle_zero_count(chi: DirichletCharacter, sigma: float, T: float,
                         settings: EvalSettings = DEFAULT_SETTINGS) -> int:
    """N_chi(sigma, T): zeros with beta >= sigma and |gamma| <= T."""
    return rectangle_zero_count_detail(chi, float(sigma), float(T), settings).count


def cross_validate(chi: DirichletCharacter, T: float, settings: EvalSettings = DEFAULT_SETTINGS,
                   require: bool = False) -> Tuple[int, int]:
    """(rectangle count at 1/2 - 1e-6, critical-line count); raises on mismatch if ``require``."""
    rect = rectangle_zero_count(chi, 0.5 - SIGMA_SHIFT, T, settings)
    line = len(zero_set(chi, T, settings))
    if require and rect != line:
        raise ZeroDiscrepancyError(f"{chi.label}: contour count {rect} != sign-change count {line}",
                                   {"label": chi.label, "rectangle": rect, "critical_line": line, "T": T})
    return rect, line


def conjugate_pairing_check(chi: DirichletCharacter, T: float,
                            settings: EvalSettings = DEFAULT_SETTINGS, tol: float = 1e-6) -> Tuple[bool, float]:
    """Zeros of chi at gamma against zeros of conj(chi) at -gamma."""
    mine = np.sort(zero_set(chi, T, settings).gammas)
    other = np.sort(-zero_set(chars.conjugate(chi), T, settings).gammas)
    if mine.size != other.size:
        return False, float("inf")
    dev = float(np.max(np.abs(mine - other))) if mine.size else 0.0
    return dev <= tol, dev


# ---------------------------------------------------------------------------
# exceptional zeros
# ---------------------------------------------------------------------------

def search_floor(q: int) -> float:
    return 1 - 1 / (K.EXC_WINDOW * math.log(q)) if q >= 3 else float("nan")


def exceptional_zero_search(q: int, settings: EvalSettings = DEFAULT_SETTINGS,
                            step: float = EXC_STEP) -> ExceptionalZero:
    """Scan L(sigma, chi) on [1 - 1/(50 log q), 1) for every real nontrivial chi mod q."""
    q = chars.check_modulus(q)
    floor = search_floor(q)
    if q < 3:
        return ExceptionalZero(q, False, floor)
    prims = list(dict.fromkeys(chars.primitive_of(c) for c in chars.real_nontrivial(q)))
    grid = np.append(np.arange(floor, 1.0, step), 1.0)
    found = []
    for chi in prims:
        vals = lfunc.l_values(grid, chi, settings).real
        for a, b in _sign_brackets(grid, vals):
            if a == b:
                beta = a
            else:
                beta = float(brentq(lambda s: lfunc.l_value(s, chi, settings).real, a, b, xtol=EXC_XTOL))
            found.append((beta, chi))
    scanned = tuple(c.label for c in prims)
    if len(found) > 1:
        raise ZeroDiscrepancyError(f"{len(found)} real zeros above the floor for q={q}",
                                   {"q": q, "zeros": [(b, c.label) for b, c in found]})
    if found:
        beta, chi = found[0]
        log.warning("real zero beta=%.12f found for %s", beta, chi.label)
        return ExceptionalZero(q, True, floor, beta, chi, 2 * EXC_XTOL, False, scanned)
    return ExceptionalZero(q, False, floor, scanned=scanned)


def inject_exceptional(q: int, beta1: float, chi1: Optional[DirichletCharacter] = None) -> ExceptionalZero:
    """A synthetic (beta1, chi1) pair for exercising the exceptional branches."""
    if not 0 < beta1 < 1:
        raise DomainError(f"beta1 must lie in (0, 1), got {beta1}", {"beta1": beta1})
    if chi1 is None:
        reals = chars.real_nontrivial(q)
        if not reals:
            raise DomainError(f"no real nontrivial character mod {q}", {"q": q})
        chi1 = reals[0]
    if not chi1.is_real or chi1.is_trivial:
        raise DomainError("chi1 must be a real nontrivial character", {"label": chi1.label})
    return ExceptionalZero(q, True, search_floor(q), float(beta1), chi1, 0.0, True)


def no_exceptional(q: int) -> ExceptionalZero:
    return ExceptionalZero(q, False, search_floor(q))


# ---------------------------------------------------------------------------
# density tables
# ---------------------------------------------------------------------------

def nu(u: float, beta1: float) -> float:
    """nu(u) = min{1, (1 - beta1) log u}."""
    if u < 1:
        raise DomainError(f"nu needs u >= 1, got {u}", {"u": u})
    return min(1.0, (1 - beta1) * math.log(u))


def _count_or_error(chi: DirichletCharacter, sigma: float, T: float,
                    settings: EvalSettings) -> Tuple[Optional[RectangleCount], Optional[str]]:
    try:
        return rectangle_zero_count_detail(chi, sigma, T, settings), None
    except ToolkitError as exc:
        return None, f"{chi.label}: {type(exc).__name__}: {exc.message}"


def density_stats(q: int, T: float, sigma_grid: Sequence[float], eps: float,
                  exc: Optional[ExceptionalZero] = None, settings: EvalSettings = DEFAULT_SETTINGS,
                  threads: int = 1) -> DensityTable:
    """N_q(sigma, T) and N_q*(sigma, T) beside the two log-free density bounds."""
    group = chars.character_group(q)
    prims = [chars.primitive_of(c) for c in group]
    if exc is None:
        exc = exceptional_zero_search(q, settings)
    u = q * T
    nu_val = nu(u, exc.beta1) if exc.exists else 1.0
    rows: List[DensityRow] = []
    moved: Dict[str, float] = {}
    for sigma in sigma_grid:
        sigma = float(sigma)
        if not 0 <= sigma <= 1:
            raise DomainError(f"sigma must lie in [0, 1], got {sigma}")
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                results = list(pool.map(lambda c: _count_or_error(c, sigma, T, settings), prims))
        else:
            results = [_count_or_error(c, sigma, T, settings) for c in prims]
        errors = [e for _, e in results if e]
        huxley = u ** ((K.DENSITY_EXP_HUXLEY + eps) * (1 - sigma))
        repulsive = nu_val * u ** (K.DENSITY_EXP_REPULSIVE * (1 - sigma))
        if errors:
            rows.append(DensityRow(sigma, None, None, huxley, repulsive, nu_val, float("nan"), "; ".join(errors)))
            continue
        for c, (rc, _) in zip(prims, results):
            if rc.perturbed:
                moved[c.label] = rc.t_hi
        computed = sum(rc.count for rc, _ in results)
        hit = 1 if exc.exists and exc.beta1 >= sigma else 0
        if exc.synthetic:
            nq, nq_star = computed + hit, computed
        else:
            nq, nq_star = computed, computed - hit
        rows.append(DensityRow(sigma, nq, nq_star, huxley, repulsive, nu_val, nq / huxley))
        log.info("density q=%d sigma=%.3f: N_q=%d", q, sigma, nq)
    return DensityTable(q, float(T), float(eps), tuple(rows), exc, tuple(sorted(moved.items())))


# ---------------------------------------------------------------------------
# zeros near 1 + it
# ---------------------------------------------------------------------------

def zeros_in_disc(chi: DirichletCharacter, t: float, r: float,
                  settings: EvalSettings = DEFAULT_SETTINGS, audit: bool = True) -> int:
    """n_chi(r; 1 + it): located zeros within distance r of 1 + it.

    With ``audit`` the window [1 - r, 1.05] x [t - r, t + r] is also
    counted by the argument principle and must hold exactly the
    critical-line zeros seen there.
    """
    if not 0 < r <= 0.75:
        raise DomainError(f"r must lie in (0, 0.75], got {r}", {"r": r})
    if abs(t) > settings.t_cap:
        raise ResourceError(f"|t|={abs(t)} exceeds t_cap={settings.t_cap}", {"t": t})
    prim = chars.primitive_of(chi)
    height = min(abs(t) + r + 0.5, settings.t_cap)
    zs = zero_set(prim, height, settings)
    rhos = zs.rhos
    n = int(np.count_nonzero(np.abs(rhos - complex(1.0, t)) <= r)) if rhos.size else 0
    if audit:
        gammas = zs.gammas
        t_lo, _ = _clear_edge(t - r, gammas, -1)
        t_hi, _ = _clear_edge(t + r, gammas, +1)
        left = max(1 - r - SIGMA_SHIFT, LEFT_FLOOR)
        wind, _ = _winding(prim, left, t_lo, t_hi, settings)
        seen = wind + _pole_inside(prim, left, t_lo, t_hi)
        expected = int(np.count_nonzero((gammas >= t_lo) & (gammas <= t_hi))) if left < 0.5 else 0
        if seen != expected:
            raise ZeroDiscrepancyError(f"{prim.label}: window around 1+{t}i holds {seen} zeros, expected {expected}",
                                       {"label": prim.label, "t": t, "r": r, "seen": seen, "expected": expected})
    return n


def disc_count_audit(chi: DirichletCharacter, t: float, radii: Sequence[float],
                     settings: EvalSettings = DEFAULT_SETTINGS) -> dict:
    """Observed C in n_chi(r; 1+it) <= C r log(q(|t|+1)), and monotonicity in r."""
    scale = math.log(chi.modulus * (abs(t) + 1))
    rows = []
    for r in sorted(radii):
        n = zeros_in_disc(chi, t, r, settings)
        rows.append({"r": r, "n": n, "C_obs": n / (r * scale) if scale > 0 else float("nan")})
    counts = [row["n"] for row in rows]
    return {
        "label": chi.label,
        "t": t,
        "rows": rows,
        "C_max": max((row["C_obs"] for row in rows), default=0.0),
        "monotone": all(a <= b for a, b in zip(counts, counts[1:])),
    }

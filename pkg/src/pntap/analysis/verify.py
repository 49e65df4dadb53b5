# src/pntap/analysis/verify.py
"""Deterministic acceptance suite.

Every check returns a record with ``name``, ``passed``, a one-line
``summary`` and ``details``. A ToolkitError inside a check fails that
check only. Nothing time-dependent goes into the records.
"""
from __future__ import annotations
import math
import statistics
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Dict, List, Optional, Tuple

from pntap import constants as K
from pntap.config import EvalSettings, RunConfig
from pntap.engine import aconst, chars, pnt, primes, zeros
from pntap.errors import ToolkitError
from pntap.io.cache import SegmentCache
from pntap.model.query import DigitConstraint
from pntap.utils.logging import EventLog, get_logger, progress
from pntap.utils.rng import make_rng

log = get_logger(__name__)


@dataclass(frozen=True)
class Plan:
    mode: str
    power_sums: int
    zero_moduli: Tuple[int, ...]
    zero_T: float
    exc_range: Tuple[int, int]
    density_moduli: Tuple[int, ...]
    density_T: float
    lambda_grid: int
    lambda_quad: int
    pnt_q_max: int
    pnt_x: float
    digits_N: int


QUICK = Plan("quick", 1000, (1, 3, 4, 5, 7, 8), 30.0, (3, 22), (3, 4), 20.0,
             1000, 20, 5, 1e6, 5)
FULL = Plan("full", 10_000, tuple(range(1, 31)), 50.0, (3, 1000), (3, 4, 5, 7, 8), 50.0,
            10_000, 100, 10, 1e7, 7)

DENSITY_SIGMAS = (0.5, 0.6, 0.75, 0.9, 1.0)
EXPLICIT_PAIRS = ((3, 1), (3, 2), (4, 1), (4, 3), (5, 2))
EXPLICIT_XS = (1e4, 1e5)
EXPLICIT_TS = (10.0, 20.0, 40.0, 80.0)
EXPLICIT_T_RATIO = 50.0
KNOWN_ORDINATES = ((1, 14.134725), (4, 6.020949))


@dataclass
class Context:
    plan: Plan
    cfg: RunConfig
    settings: EvalSettings
    sieve: primes.Sieve
    optimized: Optional[Any] = None
    events: EventLog = field(default_factory=EventLog)


def _record(name: str, passed: bool, summary: str, **details: Any) -> Dict[str, Any]:
    return {"name": name, "passed": bool(passed), "summary": summary, "details": details}


# ---------------------------------------------------------------------------
# constants
# ---------------------------------------------------------------------------

def check_optimizer(ctx: Context) -> Dict[str, Any]:
    opt = aconst.optimize_constants(threads=ctx.cfg.threads)
    ctx.optimized = opt
    rel = abs(opt.objective - K.OBJECTIVE_INFIMUM) / K.OBJECTIVE_INFIMUM
    ok = rel <= 1e-6 and opt.boundary_active and abs(opt.alpha - K.ALPHA_CHAIN) <= 1e-6
    return _record("optimizer", ok, f"objective {opt.objective:.12f} (rel gap {rel:.2e})",
                   **opt.to_record(), rel_gap=rel)


def check_chain(ctx: Context) -> Dict[str, Any]:
    audit = aconst.verify_constant_chain()
    slack = audit.residuals["density_slack"]
    failed = sorted(k for k, v in audit.checks.items() if not v)
    summary = f"exponent {audit.exponent:.10f}, slack {slack:.6f}"
    if failed:
        summary += f"; failed: {', '.join(failed)}"
    return _record("constant_chain", audit.passed, summary, **audit.to_record())


def check_alpha0(ctx: Context) -> Dict[str, Any]:
    a0 = aconst.alpha0_root()
    resid = abs(aconst.alpha_equation(a0))
    details: Dict[str, Any] = {"alpha0": a0, "residual": resid}
    ok = resid < 1e-10
    if ctx.optimized is not None:
        details["optimizer_gap"] = abs(ctx.optimized.alpha - a0)
        ok = ok and details["optimizer_gap"] <= 1e-6
    return _record("alpha0", ok, f"alpha0 {a0:.12f}, residual {resid:.1e}", **details)


def check_power_sums(ctx: Context) -> Dict[str, Any]:
    suite = aconst.power_sum_suite(ctx.plan.power_sums, seed=ctx.cfg.seed)
    ok = suite.violations == 0 and suite.min_ratio >= 1
    return _record("power_sums", ok,
                   f"{suite.instances} instances, {suite.violations} violations, min ratio {suite.min_ratio:.4f}",
                   **suite.to_record())


def check_jk_decay(ctx: Context) -> Dict[str, Any]:
    a0, a1 = aconst.root_A0_A1(K.B_CHAIN)
    rows = [aconst.jk_decay_check(k, K.B_CHAIN, a0, a1, 3, 0.1) for k in range(3, 7)]
    rows.append(aconst.jk_decay_check(2, K.B_CHAIN, a0, a1, 1, 0.1))
    published = abs(a0 - K.A0_PUBLISHED) <= 1e-4 and abs(a1 / K.A1_PUBLISHED - 1) <= 1e-3
    ok = published and all(r["small_n"] and r["large_n"] for r in rows)
    return _record("jk_decay", ok, f"A0 {a0:.6f}, A1 {a1:.4e}", A0=a0, A1=a1, rows=rows)


# ---------------------------------------------------------------------------
# zeros
# ---------------------------------------------------------------------------

def _primitive_characters(q: int):
    return chars.character_group(q).primitive_characters()


def check_zero_counts(ctx: Context) -> Dict[str, Any]:
    T = ctx.plan.zero_T
    rows, bad = [], []
    for q in ctx.plan.zero_moduli:
        for chi in _primitive_characters(q):
            rect, line = zeros.cross_validate(chi, T, ctx.settings)
            paired, dev = zeros.conjugate_pairing_check(chi, T, ctx.settings)
            rows.append({"label": chi.label, "rectangle": rect, "critical_line": line,
                         "conjugate_ok": paired, "conjugate_dev": dev})
            if rect != line or not paired:
                bad.append(chi.label)
                ctx.events.emit({"event": "zero_mismatch", "label": chi.label, "rectangle": rect,
                                 "critical_line": line, "conjugate_ok": paired})
        progress(f"[verify] zeros q={q} done", ctx.cfg.quiet)
    known = []
    for q, gamma in KNOWN_ORDINATES:
        chi = next(c for c in _primitive_characters(q) if not c.is_trivial or q == 1)
        gs = [g for g in zeros.zero_set(chi, T, ctx.settings).gammas if g > 0]
        first = min(gs) if gs else float("nan")
        known.append({"q": q, "expected": gamma, "found": first})
        if not abs(first - gamma) <= 1e-4:
            bad.append(f"{chi.label}@{gamma}")
    return _record("zero_counts", not bad, f"{len(rows)} characters to T={T:g}, {len(bad)} mismatches",
                   rows=rows, known=known, mismatches=bad)


def check_exceptional(ctx: Context) -> Dict[str, Any]:
    lo, hi = ctx.plan.exc_range
    settings = replace(ctx.settings, q_cap=max(ctx.settings.q_cap, hi))
    found = []
    for q in range(lo, hi + 1):
        exc = zeros.exceptional_zero_search(q, settings)
        if exc.exists:
            found.append(exc.to_record())
            ctx.events.emit({"event": "exceptional_found", "q": q, "beta1": exc.beta1})
        if q % 100 == 0:
            progress(f"[verify] exceptional scan at q={q}", ctx.cfg.quiet)
    return _record("exceptional_zeros", not found, f"q in [{lo}, {hi}]: {len(found)} real zeros above the floor",
                   found=found)


def check_density(ctx: Context) -> Dict[str, Any]:
    tables, bad = [], []
    for q in ctx.plan.density_moduli:
        tab = zeros.density_stats(q, ctx.plan.density_T, DENSITY_SIGMAS, 0.1,
                                  settings=ctx.settings, threads=ctx.cfg.threads)
        rows = tab.rows
        for r in rows:
            if r.error is not None:
                ctx.events.emit({"event": "density_row_error", "q": q, "sigma": r.sigma, "error": r.error})
        ok = (all(r.error is None for r in rows) and tab.monotone
              and all(r.Nq == r.Nq_star for r in rows)
              and rows[-1].Nq == 0 and tab.max_ratio <= 10)
        if not ok:
            bad.append(q)
        tables.append(tab.to_record())
    return _record("density", not bad, f"moduli {list(ctx.plan.density_moduli)}, failing {bad}", tables=tables)


# ---------------------------------------------------------------------------
# lambda, explicit formula, short intervals
# ---------------------------------------------------------------------------

def _lambda_point(rng) -> Tuple[float, float, float, int]:
    x = 10 ** rng.uniform(1, 12)
    h = x ** rng.uniform(0.5, 1.0)
    beta1 = 1 - 0.03 * rng.uniform(1e-9, 0.999)
    return x, min(max(h, math.sqrt(x)), x), beta1, rng.choice((1, -1))


def check_lambda(ctx: Context) -> Dict[str, Any]:
    rng = make_rng(ctx.cfg.seed)
    failures = []
    for _ in range(ctx.plan.lambda_grid):
        x, h, b, s = _lambda_point(rng)
        if not pnt.lambda_bounds_check(x, h, b, s):
            failures.append({"x": x, "h": h, "beta1": b, "chi1_a": s})
    # a = 1 and a = 2 give chi_1(a) = +1 and -1 for the quadratic character mod 5
    worst = 0.0
    for i in range(ctx.plan.lambda_quad):
        x = 10 ** rng.uniform(2, 8)
        h = x if i % 5 == 0 else max(4.0, x * rng.uniform(0.01, 1.0))
        b = rng.uniform(0.5, 0.999)
        exc = zeros.inject_exceptional(5, b)
        a = 1 if i % 2 else 2
        closed = pnt.lambda_(x, 5, a, h, exc)
        numeric = pnt.lambda_quadrature(x, h, b, pnt.chi1_at(exc, a))
        worst = max(worst, abs(closed - numeric))
    ok = not failures and worst <= 1e-10
    return _record("lambda", ok,
                   f"{ctx.plan.lambda_grid} bound points ({len(failures)} failed), quadrature gap {worst:.1e}",
                   bound_failures=failures[:20], quadrature_gap=worst)


def check_explicit(ctx: Context) -> Dict[str, Any]:
    rows = []
    heights = sorted(set(EXPLICIT_TS) | {EXPLICIT_T_RATIO})
    by_T: Dict[float, List[float]] = {T: [] for T in heights}
    for q, a in EXPLICIT_PAIRS:
        top = max(heights)
        full = {chars.primitive_of(c): zeros.zero_set(chars.primitive_of(c), top, ctx.settings)
                for c in chars.character_group(q)}
        for T in heights:
            sets = {k: v.up_to(T) for k, v in full.items()}
            for x in EXPLICIT_XS:
                aud = pnt.explicit_formula_audit(x, T, q, a, sets, zeros.no_exceptional(q),
                                                 ctx.settings, correct_prime_powers=True, sieve=ctx.sieve)
                by_T[T].append(aud.deviation)
                rows.append(aud.to_record())
    at_ratio = [r for r in rows if r["T"] == EXPLICIT_T_RATIO]
    worst = max(r["ratio"] for r in at_ratio)
    medians = {T: statistics.median(by_T[T]) for T in EXPLICIT_TS}
    seq = [medians[T] for T in EXPLICIT_TS]
    non_increasing = all(b <= a for a, b in zip(seq, seq[1:]))
    if not non_increasing:
        ctx.events.emit({"event": "explicit_median_increase",
                         "medians": {f"{T:g}": m for T, m in medians.items()}})
    ok = worst < 5 and non_increasing
    trail = " -> ".join(f"{m:.3g}" for m in seq)
    return _record("explicit_formula", ok,
                   f"max ratio at T={EXPLICIT_T_RATIO:g} {worst:.3g}; median deviation over "
                   f"{len(by_T[EXPLICIT_TS[0]])} triples at T={'/'.join(f'{T:g}' for T in EXPLICIT_TS)}: {trail}",
                   rows=rows, medians={f"{T:g}": m for T, m in medians.items()},
                   medians_non_increasing=non_increasing)


def check_pnt(ctx: Context) -> Dict[str, Any]:
    x = ctx.plan.pnt_x
    rows, bad = [], []
    for q in range(1, ctx.plan.pnt_q_max + 1):
        exc = pnt.exceptional_for(q, None, ctx.settings)
        for a in range(1, max(q, 2)):
            if math.gcd(a, q) != 1:
                continue
            for h, tol in ((x, 0.02), (x / 10, 0.1)):
                rep = pnt.predict_and_compare(x, h, q, a, exc=exc, C=ctx.cfg.C_main,
                                              b_siegel=ctx.cfg.b_siegel, settings=ctx.settings, sieve=ctx.sieve)
                rows.append(rep.to_row())
                if not rep.relative_error < tol:
                    bad.append((q, a, h))
                    ctx.events.emit({"event": "prediction_outside_tolerance", "q": q, "a": a, "h": h,
                                     "relative_error": rep.relative_error, "tolerance": tol})
        progress(f"[verify] pnt q={q} done", ctx.cfg.quiet)
    worst = max(r["relative_error"] for r in rows)
    return _record("pnt_agreement", not bad, f"{len(rows)} predictions at x={x:g}, worst rel {worst:.3g}",
                   rows=rows, failures=bad)


def check_brun_titchmarsh(ctx: Context) -> Dict[str, Any]:
    rep = pnt.brun_titchmarsh_audit(1e6, 1e5, 101, 1.0, settings=ctx.settings, sieve=ctx.sieve)
    return _record("brun_titchmarsh", rep.passed,
                   f"max ratio {rep.max_ratio:.4f} at a={rep.argmax} against {rep.bound}", **rep.to_record())


def check_digits(ctx: Context) -> Dict[str, Any]:
    small = primes.count_prescribed_digits(DigitConstraint(10, 3, (3,), (1,)), sieve=ctx.sieve)
    ok = small.count == 5 and small.primes_sample[:5] == (103, 113, 163, 173, 193)
    n = ctx.plan.digits_N
    rows = []
    for d0 in (1, 3, 7, 9):
        for lead in range(1, 10):
            res = primes.count_prescribed_digits(DigitConstraint(10, n, (d0,), (lead,)), sieve=ctx.sieve)
            rows.append({"d0": d0, "lead": lead, **res.to_record()})
            ok = ok and 0.5 <= res.ratio <= 1.5
    spread = [r["ratio"] for r in rows]
    li_spread = [r["li_ratio"] for r in rows]
    return _record("digits", ok,
                   f"N={n}: ratio in [{min(spread):.3f}, {max(spread):.3f}], "
                   f"li ratio in [{min(li_spread):.3f}, {max(li_spread):.3f}]",
                   small=small.to_record(), rows=rows)


CHECKS: Tuple[Tuple[str, Callable[[Context], Dict[str, Any]]], ...] = (
    ("optimizer", check_optimizer),
    ("constant_chain", check_chain),
    ("alpha0", check_alpha0),
    ("power_sums", check_power_sums),
    ("jk_decay", check_jk_decay),
    ("zero_counts", check_zero_counts),
    ("exceptional_zeros", check_exceptional),
    ("density", check_density),
    ("lambda", check_lambda),
    ("explicit_formula", check_explicit),
    ("pnt_agreement", check_pnt),
    ("brun_titchmarsh", check_brun_titchmarsh),
    ("digits", check_digits),
)


def make_sieve(cfg: RunConfig) -> primes.Sieve:
    cache = SegmentCache(cfg.cache_dir) if cfg.cache_dir else None
    return primes.Sieve(cap=cfg.sieve_cap, cache=cache, threads=cfg.threads)


def run_verify(cfg: RunConfig, full: bool = False, only: Optional[List[str]] = None) -> Dict[str, Any]:
    plan = FULL if full else QUICK
    ctx = Context(plan, cfg, cfg.settings(), make_sieve(cfg))
    results = []
    for name, fn in CHECKS:
        if only and name not in only:
            continue
        progress(f"[verify] {name} ...", cfg.quiet)
        try:
            rec = fn(ctx)
        except ToolkitError as exc:
            rec = _record(name, False, f"{type(exc).__name__}: {exc.message}", error=exc.to_record())
        log.info("%s: %s", name, "PASS" if rec["passed"] else "FAIL")
        results.append(rec)
    return {
        "mode": plan.mode,
        "seed": cfg.seed,
        "passed": all(r["passed"] for r in results),
        "checks": results,
        "events": ctx.events.records,
    }

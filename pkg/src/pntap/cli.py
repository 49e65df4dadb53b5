# src/pntap/cli.py
"""pntap command line: primes, zeros, pnt, aconst and verify subcommands."""
from __future__ import annotations
import argparse
import sys
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from pntap.analysis import verify as verify_mod
from pntap.analysis.report import render_verify
from pntap.config import RunConfig, add_common_args, build_config_from_args
from pntap.engine import aconst, chars, pnt, primes, zeros
from pntap.errors import DomainError, ToolkitError
from pntap.io.load_queries import load_queries
from pntap.io.summaries import emit, envelope
from pntap.model.chain import ConstantChain
from pntap.model.profile import KINDS, ZeroFreeRegionProfile
from pntap.model.query import DigitConstraint, ThetaQuery
from pntap.model.report import PREDICTION_COLS
from pntap.model.zero import DENSITY_COLS
from pntap.utils import logging as ulog
from pntap.utils.mathx import squarefree_kernel

ZERO_COLS = ["character", "gamma", "beta", "refinement_width", "method"]

# (kind, payload, csv rows, csv cols, ok)
Outcome = Tuple[str, Dict[str, Any], Optional[List[Dict[str, Any]]], Optional[Sequence[str]], bool]


def _ints(s: str) -> Tuple[int, ...]:
    s = s.strip()
    return tuple(int(v) for v in s.split(",")) if s else ()


def _floats(s: str) -> Tuple[float, ...]:
    return tuple(float(v) for v in s.split(",") if v.strip())


def _exc(q: int, beta1: Optional[float]):
    return zeros.inject_exceptional(q, beta1) if beta1 is not None else None


def _profile(cfg: RunConfig, kind: str, q: int, beta1: Optional[float]) -> ZeroFreeRegionProfile:
    return ZeroFreeRegionProfile(kind, cfg.c_vk, cfg.c_iw, cfg.c_dh,
                                 squarefree_kernel(q) if kind == "IWANIEC" else None,
                                 beta1 if kind == "DH" else None)


# ---------------------------------------------------------------------------
# primes
# ---------------------------------------------------------------------------

def cmd_primes_theta(args: argparse.Namespace, cfg: RunConfig) -> Outcome:
    sieve = verify_mod.make_sieve(cfg)
    out: Dict[str, Any] = {"x": args.x, "q": args.q, "a": args.a}
    if args.h is not None:
        query = ThetaQuery(args.x, args.h, args.q, args.a)
        out.update(h=args.h, theta=primes.theta_short_interval(query, sieve))
    else:
        out["theta"] = primes.theta_ap(args.x, args.q, args.a, sieve)
        if args.psi:
            out["psi"] = primes.psi_ap(args.x, args.q, args.a, sieve)
    return "primes.theta", out, None, None, True


def cmd_primes_digits(args: argparse.Namespace, cfg: RunConfig) -> Outcome:
    c = DigitConstraint(args.base, args.N, _ints(args.low), _ints(args.high))
    res = primes.count_prescribed_digits(c, cap=cfg.sieve_cap, sieve=verify_mod.make_sieve(cfg))
    return "primes.digits", {"constraint": c.to_record(), **res.to_record()}, None, None, True


# ---------------------------------------------------------------------------
# zeros
# ---------------------------------------------------------------------------

def cmd_zeros_scan(args: argparse.Namespace, cfg: RunConfig) -> Outcome:
    settings = cfg.settings()
    if args.index is not None:
        sets = [zeros.zero_set(chars.character_by_label(args.q, args.index), args.T, settings)]
    else:
        sets = zeros.scan_modulus(args.q, args.T, settings, threads=cfg.threads,
                                  primitive_only=not args.all)
    rows = [r.to_record() for zs in sets for r in zs.records]
    payload = {"q": args.q, "T": args.T, "zero_sets": [zs.to_record() for zs in sets]}
    return "zeros.scan", payload, rows, ZERO_COLS, True


def cmd_zeros_density(args: argparse.Namespace, cfg: RunConfig) -> Outcome:
    tab = zeros.density_stats(args.q, args.T, _floats(args.sigma), args.eps, exc=_exc(args.q, args.beta1),
                              settings=cfg.settings(), threads=cfg.threads)
    rec = tab.to_record()
    return "zeros.density", rec, rec["rows"], DENSITY_COLS + ["error"], True


def cmd_zeros_exceptional(args: argparse.Namespace, cfg: RunConfig) -> Outcome:
    settings = cfg.settings()
    hi = args.upto if args.upto is not None else args.q
    found = [zeros.exceptional_zero_search(q, settings).to_record() for q in range(args.q, hi + 1)]
    rows = [{k: r[k] for k in ("modulus", "exists", "search_floor", "beta1")} for r in found]
    return "zeros.exceptional", {"results": found}, rows, ["modulus", "exists", "search_floor", "beta1"], True


# ---------------------------------------------------------------------------
# pnt
# ---------------------------------------------------------------------------

def cmd_pnt_predict(args: argparse.Namespace, cfg: RunConfig) -> Outcome:
    settings = cfg.settings()
    sieve = verify_mod.make_sieve(cfg)
    if args.batch:
        queries = load_queries(args.batch)
    else:
        if None in (args.x, args.h, args.q, args.a):
            raise DomainError("pnt predict needs --x --h --q --a or --batch")
        queries = [ThetaQuery(args.x, args.h, args.q, args.a)]
    excs: Dict[int, Any] = {}
    reports = []
    for qr in queries:
        if qr.q not in excs:
            excs[qr.q] = pnt.exceptional_for(qr.q, _exc(qr.q, args.beta1), settings)
        beta1 = excs[qr.q].beta1 if excs[qr.q].exists else None
        profile = _profile(cfg, args.profile, qr.q, beta1) if args.flavor == "FLEXIBLE" else None
        reports.append(pnt.predict_and_compare(qr.x, qr.h, qr.q, qr.a, eps=args.eps, profile=profile,
                                               C=cfg.C_main, flavor=args.flavor, exc=excs[qr.q],
                                               ignore_exceptional=args.ignore_exceptional,
                                               b_siegel=cfg.b_siegel, settings=settings, sieve=sieve))
    payload = {"reports": [r.to_record() for r in reports]}
    return "pnt.predict", payload, [r.to_row() for r in reports], PREDICTION_COLS, True


def cmd_pnt_envelope(args: argparse.Namespace, cfg: RunConfig) -> Outcome:
    exc_exists = args.beta1 is not None
    theta = float(pnt.theta_constant(exc_exists))
    profile = _profile(cfg, args.profile, args.q, args.beta1)
    value = pnt.error_envelope(args.x, args.h, args.q, cfg.C_main, args.flavor, profile=profile,
                               beta1=args.beta1, theta=theta, eps=args.eps)
    met, margin = pnt.range_condition(args.x, args.h, args.q, theta, args.eps, exc_exists)
    payload = {"x": args.x, "h": args.h, "q": args.q, "flavor": args.flavor, "C": cfg.C_main,
               "envelope": value, "theta": theta, "range_condition_met": met, "range_margin": margin}
    return "pnt.envelope", payload, None, None, True


def cmd_pnt_explicit(args: argparse.Namespace, cfg: RunConfig) -> Outcome:
    aud = pnt.explicit_formula_audit(args.x, args.T, args.q, args.a, exc=_exc(args.q, args.beta1),
                                     settings=cfg.settings(), prime_powers=args.prime_powers,
                                     correct_prime_powers=args.correct_prime_powers,
                                     sieve=verify_mod.make_sieve(cfg))
    return "pnt.explicit", aud.to_record(), None, None, True


def cmd_pnt_bt(args: argparse.Namespace, cfg: RunConfig) -> Outcome:
    rep = pnt.brun_titchmarsh_audit(args.x, args.h, args.q, args.delta, exc=_exc(args.q, args.beta1),
                                    settings=cfg.settings(), sieve=verify_mod.make_sieve(cfg))
    return "pnt.bt", rep.to_record(), None, None, rep.passed


# ---------------------------------------------------------------------------
# aconst
# ---------------------------------------------------------------------------

def cmd_aconst_optimize(args: argparse.Namespace, cfg: RunConfig) -> Outcome:
    opt = aconst.optimize_constants(threads=cfg.threads)
    ulog.progress(f"[aconst] objective {opt.objective:.12f}", cfg.quiet)
    return "aconst.optimize", {**opt.to_record(), "alpha0": aconst.alpha0_root()}, None, None, True


def cmd_aconst_audit(args: argparse.Namespace, cfg: RunConfig) -> Outcome:
    audit = aconst.verify_constant_chain(ConstantChain(phi=args.phi), dps=args.dps)
    return "aconst.audit", audit.to_record(), None, None, audit.passed


def cmd_aconst_powersum(args: argparse.Namespace, cfg: RunConfig) -> Outcome:
    suite = aconst.power_sum_suite(args.instances, n_max=args.n_max, m_max=args.m_max, seed=cfg.seed)
    return "aconst.powersum", suite.to_record(), None, None, suite.violations == 0


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def cmd_verify(args: argparse.Namespace, cfg: RunConfig) -> Outcome:
    only = [s for s in args.only.split(",") if s] if args.only else None
    result = verify_mod.run_verify(cfg, full=args.full, only=only)
    if not cfg.quiet:
        sys.stderr.write(render_verify(result))
    rows = [{"check": c["name"], "passed": c["passed"], "summary": c["summary"]} for c in result["checks"]]
    return "verify", result, rows, ["check", "passed", "summary"], result["passed"]


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _sub(parent, name: str, fn: Callable, help: str) -> argparse.ArgumentParser:
    p = parent.add_parser(name, help=help)
    add_common_args(p)
    p.set_defaults(fn=fn)
    return p


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pntap", description=__doc__)
    top = ap.add_subparsers(dest="command")

    pr = top.add_parser("primes", help="sieved prime sums").add_subparsers(dest="action")
    p = _sub(pr, "theta", cmd_primes_theta, "theta(x; q, a), or over (x - h, x] with --h")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--q", type=int, default=1)
    p.add_argument("--a", type=int, default=1)
    p.add_argument("--h", type=float, default=None)
    p.add_argument("--psi", action="store_true", help="also report psi(x; q, a)")
    p = _sub(pr, "digits", cmd_primes_digits, "primes with prescribed leading and trailing digits")
    p.add_argument("--base", type=int, default=10)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--low", default="", help="d_0,d_1,... comma separated")
    p.add_argument("--high", default="", help="d_{N-B},...,d_{N-1} comma separated")

    zr = top.add_parser("zeros", help="zeros of Dirichlet L-functions").add_subparsers(dest="action")
    p = _sub(zr, "scan", cmd_zeros_scan, "critical-line zeros up to height T")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--index", type=int, default=None)
    p.add_argument("--T", type=float, default=30.0)
    p.add_argument("--all", action="store_true", help="include primitive characters inducing imprimitive ones")
    p = _sub(zr, "density", cmd_zeros_density, "N_q(sigma, T) table against the density bounds")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--T", type=float, default=20.0)
    p.add_argument("--sigma", default="0.5,0.6,0.75,0.9,1.0")
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--beta1", type=float, default=None, help="inject a synthetic exceptional zero")
    p = _sub(zr, "exceptional", cmd_zeros_exceptional, "real zeros near 1 for q (through --upto)")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--upto", type=int, default=None)

    pn = top.add_parser("pnt", help="predictions against the sieve").add_subparsers(dest="action")
    p = _sub(pn, "predict", cmd_pnt_predict, "theta(x - h, x; q, a) against lambda h / phi(q)")
    for name, typ in (("--x", float), ("--h", float), ("--q", int), ("--a", int)):
        p.add_argument(name, type=typ, default=None)
    p.add_argument("--batch", default=None, help="CSV of x,h,q,a rows")
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--flavor", choices=pnt.ENVELOPE_FLAVORS, default="VK")
    p.add_argument("--profile", choices=KINDS, default="VK")
    p.add_argument("--beta1", type=float, default=None)
    p.add_argument("--ignore-exceptional", dest="ignore_exceptional", action="store_true",
                   help="lambda = 1 and theta = 7/12 even with an exceptional zero")
    p = _sub(pn, "envelope", cmd_pnt_envelope, "relative error envelope")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--h", type=float, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--flavor", choices=pnt.ENVELOPE_FLAVORS, default="VK")
    p.add_argument("--profile", choices=KINDS, default="VK")
    p.add_argument("--beta1", type=float, default=None)
    p = _sub(pn, "explicit", cmd_pnt_explicit, "truncated explicit formula against the sieve")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--T", type=float, default=50.0)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--beta1", type=float, default=None)
    p.add_argument("--prime-powers", dest="prime_powers", action="store_true", help="compare with psi")
    p.add_argument("--correct-prime-powers", dest="correct_prime_powers", action="store_true")
    p = _sub(pn, "bt", cmd_pnt_bt, "Brun-Titchmarsh audit over all classes")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--h", type=float, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--delta", type=float, default=1.0)
    p.add_argument("--beta1", type=float, default=None)

    ac = top.add_parser("aconst", help="density exponent constants").add_subparsers(dest="action")
    _sub(ac, "optimize", cmd_aconst_optimize, "minimise the constraint objective")
    p = _sub(ac, "audit", cmd_aconst_audit, "recompute the published constant chain")
    p.add_argument("--phi", type=float, default=1 / 6 + 1e-7)
    p.add_argument("--dps", type=int, default=50)
    p = _sub(ac, "powersum", cmd_aconst_powersum, "random power-sum instances against the bound")
    p.add_argument("--instances", type=int, default=10_000)
    p.add_argument("--n-max", dest="n_max", type=int, default=4)
    p.add_argument("--m-max", dest="m_max", type=int, default=5)

    p = _sub(top, "verify", cmd_verify, "acceptance suite")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--quick", action="store_true", default=True)
    mode.add_argument("--full", action="store_true")
    p.add_argument("--only", default=None, help="comma separated check names")
    return ap


def dispatch(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv:
        ap.print_usage(sys.stderr)
        return 2
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "fn", None) is None:
        ap.print_usage(sys.stderr)
        return 2
    try:
        cfg = build_config_from_args(args)
        ulog.configure(cfg.log_level)
        kind, payload, rows, cols, ok = args.fn(args, cfg)
    except ToolkitError as exc:
        print(f"[error] {type(exc).__name__}: {exc.message}", file=sys.stderr)
        return 1
    doc = envelope(kind, payload, seed=cfg.seed, config=cfg.public())
    written = emit(doc, cfg.format, cfg.out, rows=rows if cfg.format == "csv" else None, cols=cols)
    if written:
        ulog.progress(f"[summaries] wrote {written}", cfg.quiet)
    return 0 if ok else 1


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()

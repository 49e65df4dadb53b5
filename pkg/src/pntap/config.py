# src/pntap/config.py
from __future__ import annotations
import argparse
import dataclasses
import json
import os
from dataclasses import dataclass, field, fields, replace
from typing import Any, Dict, Optional

from pntap import constants as K
from pntap.errors import DomainError

FORMATS = ("json", "csv")


@dataclass(frozen=True)
class EvalSettings:
    euler_maclaurin_terms: int = 50
    bernoulli_order: int = 30
    target_abs_error: float = 1e-10
    t_cap: float = 200.0
    q_cap: int = 200
    # adaptive Euler-Maclaurin doubles the head length up to this many terms
    max_head_terms: int = 1 << 14
    # log_derivative truncation point of the Dirichlet series; grown by doubling up to the max
    dirichlet_cutoff: int = 2_000_000
    max_dirichlet_cutoff: int = 10**8
    double_double: bool = False

    def validate(self) -> "EvalSettings":
        if self.euler_maclaurin_terms < 1 or self.bernoulli_order < 1:
            raise DomainError("euler_maclaurin_terms and bernoulli_order must be positive")
        if self.t_cap <= 0 or self.q_cap <= 0 or self.max_head_terms <= 0:
            raise DomainError("caps must be positive")
        if self.target_abs_error < 1e-14:
            raise DomainError("target_abs_error below 1e-14 is not reachable in double precision",
                              {"target_abs_error": self.target_abs_error})
        if self.dirichlet_cutoff < 100:
            raise DomainError("dirichlet_cutoff must be at least 100")
        if self.max_dirichlet_cutoff < self.dirichlet_cutoff:
            raise DomainError("max_dirichlet_cutoff must be at least dirichlet_cutoff",
                              {"dirichlet_cutoff": self.dirichlet_cutoff,
                               "max_dirichlet_cutoff": self.max_dirichlet_cutoff})
        return self


@dataclass
class RunConfig:
    # effective constants; the source never fixes their values
    c_vk: float = K.C_VK_DEFAULT
    c_dh: float = K.C_DH_DEFAULT
    c_iw: float = K.C_IW
    C_main: float = K.C_MAIN_DEFAULT
    b_siegel: float = K.B_SIEGEL_DEFAULT

    # caps
    q_cap: int = 200
    t_cap: float = 200.0
    sieve_cap: int = 10**10

    # output
    format: str = "json"
    out: Optional[str] = None
    quiet: bool = False
    log_level: str = "WARNING"

    seed: int = 42
    threads: int = field(default_factory=lambda: os.cpu_count() or 1)
    cache_dir: Optional[str] = None

    eval: EvalSettings = field(default_factory=EvalSettings)

    def validate(self) -> "RunConfig":
        if self.q_cap <= 0 or self.t_cap <= 0 or self.sieve_cap <= 0:
            raise DomainError("caps must be positive",
                              {"q_cap": self.q_cap, "t_cap": self.t_cap, "sieve_cap": self.sieve_cap})
        if self.format not in FORMATS:
            raise DomainError(f"format must be one of {FORMATS}", {"format": self.format})
        if min(self.c_vk, self.c_dh, self.c_iw, self.C_main, self.b_siegel) <= 0:
            raise DomainError("effective constants must be positive")
        if self.threads < 1:
            raise DomainError("threads must be >= 1")
        self.eval.validate()
        return self

    def settings(self) -> EvalSettings:
        """EvalSettings with this run's caps overlaid."""
        return replace(self.eval, q_cap=self.q_cap, t_cap=self.t_cap)

    def public(self) -> Dict[str, Any]:
        """Echo of the config for reports; excludes machine-dependent fields."""
        d = dataclasses.asdict(self)
        for k in ("out", "quiet", "log_level", "threads", "cache_dir"):
            d.pop(k, None)
        return d


_RUN_KEYS = {f.name for f in fields(RunConfig)}
_EVAL_KEYS = {f.name for f in fields(EvalSettings)}


def load_config_file(path: str) -> Dict[str, Any]:
    with open(path, encoding="utf-8") as f:
        data = json.load(f)
    if not isinstance(data, dict):
        raise DomainError("config file must hold a JSON object", {"path": path})
    unknown = set(data) - _RUN_KEYS
    if unknown:
        raise DomainError(f"unknown config keys: {sorted(unknown)}", {"path": path})
    ev = data.get("eval", {})
    if not isinstance(ev, dict) or set(ev) - _EVAL_KEYS:
        raise DomainError(f"unknown eval keys: {sorted(set(ev) - _EVAL_KEYS)}", {"path": path})
    return data


def merge_config(file_values: Optional[Dict[str, Any]] = None,
                 overrides: Optional[Dict[str, Any]] = None) -> RunConfig:
    """defaults < file < overrides. ``None`` overrides mean "flag not given"."""
    cfg = RunConfig()
    layers = [file_values or {}, {k: v for k, v in (overrides or {}).items() if v is not None}]
    for layer in layers:
        ev = layer.get("eval")
        plain = {k: v for k, v in layer.items() if k != "eval" and k in _RUN_KEYS}
        cfg = replace(cfg, **plain)
        if ev:
            cfg = replace(cfg, eval=replace(cfg.eval, **ev))
    return cfg.validate()


def add_common_args(ap: argparse.ArgumentParser) -> None:
    g = ap.add_argument_group("run configuration")
    g.add_argument("--config", default=None, help="JSON config file (flags override it)")
    g.add_argument("--format", choices=FORMATS, default=None)
    g.add_argument("--out", default=None, help="output path (default stdout)")
    g.add_argument("--seed", type=int, default=None)
    g.add_argument("--threads", type=int, default=None)
    g.add_argument("--quiet", action="store_true", default=None)
    g.add_argument("--log-level", dest="log_level", default=None)
    g.add_argument("--cache-dir", dest="cache_dir", default=None, help="sieve segment cache directory")
    g.add_argument("--c-vk", dest="c_vk", type=float, default=None)
    g.add_argument("--c-dh", dest="c_dh", type=float, default=None)
    g.add_argument("--C-main", dest="C_main", type=float, default=None)
    g.add_argument("--b-siegel", dest="b_siegel", type=float, default=None)
    g.add_argument("--q-cap", dest="q_cap", type=int, default=None)
    g.add_argument("--t-cap", dest="t_cap", type=float, default=None)
    g.add_argument("--sieve-cap", dest="sieve_cap", type=int, default=None)


def build_config_from_args(args: argparse.Namespace) -> RunConfig:
    file_values = load_config_file(args.config) if getattr(args, "config", None) else None
    overrides = {k: getattr(args, k, None) for k in _RUN_KEYS if k != "eval"}
    return merge_config(file_values, overrides)

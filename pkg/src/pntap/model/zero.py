# src/pntap/model/zero.py
from __future__ import annotations
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
import pandas as pd

from pntap.model.character import DirichletCharacter

DENSITY_COLS = ["sigma", "Nq", "Nq_star", "bound_huxley", "bound_repulsive", "nu", "ratio"]


@dataclass(frozen=True)
class ZeroRecord:
    gamma: float
    beta: float = 0.5
    character: str = ""
    refinement_width: float = 0.0
    method: str = "sign_change"

    @property
    def rho(self) -> complex:
        return complex(self.beta, self.gamma)

    def to_record(self) -> dict:
        return {
            "gamma": self.gamma,
            "beta": self.beta,
            "character": self.character,
            "refinement_width": self.refinement_width,
            "method": self.method,
        }


@dataclass(frozen=True)
class ZeroSet:
    """Zeros of one L-function with |gamma| <= complete_to."""
    character: DirichletCharacter
    complete_to: float
    records: Tuple[ZeroRecord, ...]
    scan_step: float = 0.05
    method: str = "hardy_z sign change + brentq"

    @property
    def gammas(self) -> np.ndarray:
        return np.array([r.gamma for r in self.records], dtype=np.float64)

    @property
    def rhos(self) -> np.ndarray:
        return np.array([r.rho for r in self.records], dtype=np.complex128)

    def up_to(self, T: float) -> "ZeroSet":
        return ZeroSet(self.character, min(T, self.complete_to),
                       tuple(r for r in self.records if abs(r.gamma) <= T), self.scan_step, self.method)

    def __len__(self) -> int:
        return len(self.records)

    def to_record(self) -> dict:
        return {
            "character": self.character.to_record(),
            "complete_to": self.complete_to,
            "scan_step": self.scan_step,
            "method": self.method,
            "zeros": [r.to_record() for r in self.records],
        }


@dataclass(frozen=True)
class ExceptionalZero:
    modulus: int
    exists: bool
    search_floor: float
    beta1: Optional[float] = None
    chi1: Optional[DirichletCharacter] = None
    refinement_width: Optional[float] = None
    synthetic: bool = False
    scanned: Tuple[str, ...] = ()

    def to_record(self) -> dict:
        return {
            "modulus": self.modulus,
            "exists": self.exists,
            "search_floor": self.search_floor,
            "beta1": self.beta1,
            "chi1": self.chi1.to_record() if self.chi1 is not None else None,
            "refinement_width": self.refinement_width,
            "synthetic": self.synthetic,
            "scanned": list(self.scanned),
        }


@dataclass(frozen=True)
class DensityRow:
    sigma: float
    Nq: Optional[int]
    Nq_star: Optional[int]
    bound_huxley: float
    bound_repulsive: float
    nu: float
    ratio: float
    error: Optional[str] = None


@dataclass(frozen=True)
class DensityTable:
    modulus: int
    T: float
    epsilon: float
    rows: Tuple[DensityRow, ...]
    exceptional: Optional[ExceptionalZero] = None
    perturbations: Tuple[Tuple[str, float], ...] = ()

    @property
    def monotone(self) -> bool:
        """N_q non-increasing in sigma, and N_q* <= N_q on every row."""
        rows = sorted((r for r in self.rows if r.Nq is not None), key=lambda r: r.sigma)
        for lo, hi in zip(rows, rows[1:]):
            if hi.Nq > lo.Nq or hi.Nq_star > lo.Nq_star:
                return False
        return all(r.Nq_star <= r.Nq for r in rows)

    @property
    def max_ratio(self) -> float:
        vals = [r.ratio for r in self.rows if r.ratio is not None and not math.isnan(r.ratio)]
        return max(vals) if vals else float("nan")

    def to_frame(self) -> pd.DataFrame:
        df = pd.DataFrame([{c: getattr(r, c) for c in DENSITY_COLS} for r in self.rows], columns=DENSITY_COLS)
        return df

    def to_record(self) -> dict:
        return {
            "modulus": self.modulus,
            "T": self.T,
            "epsilon": self.epsilon,
            "monotone": self.monotone,
            "exceptional": self.exceptional.to_record() if self.exceptional else None,
            "perturbations": [{"character": c, "T_used": t} for c, t in self.perturbations],
            "rows": [
                {**{c: getattr(r, c) for c in DENSITY_COLS}, "error": r.error} for r in self.rows
            ],
        }


@dataclass(frozen=True)
class RectangleCount:
    count: int
    sigma_edge: float
    t_lo: float
    t_hi: float
    evaluations: int
    perturbed: bool = False
    pole_correction: int = 0
    notes: Tuple[str, ...] = ()

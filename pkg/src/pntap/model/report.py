# src/pntap/model/report.py
from __future__ import annotations
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from pntap.model.query import ThetaQuery

PREDICTION_COLS = ["x", "h", "q", "a", "lambda", "theta_exponent", "actual", "predicted",
                   "relative_error", "envelope", "implied_constant", "range_condition_met"]


@dataclass(frozen=True)
class PredictionReport:
    """Sieved theta over (x - h, x] next to lambda h / phi(q)."""
    query: ThetaQuery
    lambda_: float
    theta_exponent: Fraction
    actual: float
    primary_term: float
    secondary_term: float
    relative_error: float
    envelope: float
    range_condition_met: bool
    range_margin: float
    epsilon: float
    flavor: str = "VK"
    exceptional: bool = False
    ignore_exceptional: bool = False

    @property
    def predicted(self) -> float:
        return self.primary_term + self.secondary_term

    @property
    def implied_constant(self) -> float:
        """relative_error / envelope: the constant the error term would need."""
        return self.relative_error / self.envelope if self.envelope > 0 else float("inf")

    def to_row(self) -> dict:
        q = self.query
        return {
            "x": q.x, "h": q.h, "q": q.q, "a": q.a,
            "lambda": self.lambda_,
            "theta_exponent": str(self.theta_exponent),
            "actual": self.actual,
            "predicted": self.predicted,
            "relative_error": self.relative_error,
            "envelope": self.envelope,
            "implied_constant": self.implied_constant,
            "range_condition_met": self.range_condition_met,
        }

    def to_record(self) -> dict:
        return {
            "query": self.query.to_record(),
            "lambda": self.lambda_,
            "theta_exponent": str(self.theta_exponent),
            "actual": self.actual,
            "predicted": self.predicted,
            "primary_term": self.primary_term,
            "secondary_term": self.secondary_term,
            "relative_error": self.relative_error,
            "envelope": self.envelope,
            "envelope_flavor": self.flavor,
            "implied_constant": self.implied_constant,
            "range_condition_met": self.range_condition_met,
            "range_margin": self.range_margin,
            "epsilon": self.epsilon,
            "exceptional": self.exceptional,
            "ignore_exceptional": self.ignore_exceptional,
        }


@dataclass(frozen=True)
class BrunTitchmarshReport:
    x: float
    h: float
    q: int
    delta: float
    bound: float
    max_ratio: float
    argmax: int
    min_ratio: float
    argmin: int
    exceptional: bool = False

    @property
    def passed(self) -> bool:
        return self.max_ratio <= self.bound

    def to_record(self) -> dict:
        return {
            "x": self.x,
            "h": self.h,
            "q": self.q,
            "delta": self.delta,
            "bound": self.bound,
            "max_ratio": self.max_ratio,
            "argmax": self.argmax,
            "min_ratio": self.min_ratio,
            "argmin": self.argmin,
            "exceptional": self.exceptional,
            "pass": self.passed,
        }


@dataclass(frozen=True)
class ExplicitFormulaAudit:
    q: int
    a: int
    x: float
    T: float
    explicit: float
    actual: float
    zeros_used: int
    prime_powers: bool = False
    low_zero_correction: float = 0.0
    beta1: Optional[float] = None

    @property
    def deviation(self) -> float:
        return abs(self.explicit - self.actual)

    @property
    def scale(self) -> float:
        return self.x * math.log(self.x) ** 2 / self.T

    @property
    def ratio(self) -> float:
        return self.deviation / self.scale

    def to_record(self) -> dict:
        return {
            "q": self.q,
            "a": self.a,
            "x": self.x,
            "T": self.T,
            "explicit": self.explicit,
            "actual": self.actual,
            "deviation": self.deviation,
            "scale": self.scale,
            "ratio": self.ratio,
            "zeros_used": self.zeros_used,
            "prime_powers": self.prime_powers,
            "low_zero_correction": self.low_zero_correction,
            "beta1": self.beta1,
        }

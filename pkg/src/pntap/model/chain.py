# src/pntap/model/chain.py
from __future__ import annotations
import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence, Tuple

from pntap import constants as K
from pntap.errors import DomainError


@dataclass(frozen=True)
class PowerSumInstance:
    """Points z_1..z_N with |z_1| maximal, and the shift M >= 0."""
    points: Tuple[complex, ...]
    M: int = 0

    def __post_init__(self) -> None:
        if not self.points:
            raise DomainError("power sum needs at least one point")
        if self.M < 0:
            raise DomainError(f"M must be >= 0, got {self.M}", {"M": self.M})
        if abs(self.points[0]) < max(abs(z) for z in self.points):
            raise DomainError("points[0] must have maximal modulus; use PowerSumInstance.of")

    @classmethod
    def of(cls, points: Sequence[complex], M: int = 0) -> "PowerSumInstance":
        # stable: ties keep input order
        pts = sorted((complex(z) for z in points), key=lambda z: -abs(z))
        return cls(tuple(pts), int(M))

    @property
    def N(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class ConstantChain:
    alpha: float = K.ALPHA_CHAIN
    A: float = K.A_CHAIN
    B: float = K.B_CHAIN
    phi: float = K.PHI_HYBRID_WEYL
    k_multiple: Optional[float] = None  # K as a multiple of 1 + 1/phi; never fixed
    xi: float = K.XI_CHAIN

    def __post_init__(self) -> None:
        if not (self.A > 1 and self.B >= 0 and self.alpha > 1):
            raise DomainError("chain needs A > 1, B >= 0, alpha > 1",
                              {"alpha": self.alpha, "A": self.A, "B": self.B})
        if self.phi <= 0:
            raise DomainError("phi must be positive", {"phi": self.phi})

    def to_record(self) -> dict:
        return {"alpha": self.alpha, "A": self.A, "B": self.B, "phi": self.phi, "K": self.k_multiple, "xi": self.xi}


@dataclass(frozen=True)
class ChainAudit:
    chain: ConstantChain
    objective: float
    contraction: float
    exponent: float
    theta: float
    checks: Dict[str, bool] = field(default_factory=dict)
    residuals: Dict[str, float] = field(default_factory=dict)
    notes: Tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_record(self) -> dict:
        def clean(v: float):
            return v if math.isfinite(v) else str(v)
        return {
            "chain": self.chain.to_record(),
            "objective": self.objective,
            "contraction": self.contraction,
            "exponent": self.exponent,
            "theta": self.theta,
            "checks": dict(sorted(self.checks.items())),
            "residuals": {k: clean(v) for k, v in sorted(self.residuals.items())},
            "notes": list(self.notes),
            "pass": self.passed,
        }


@dataclass(frozen=True)
class OptimizedConstants:
    alpha: float
    A: float
    B: float
    objective: float
    boundary_active: bool
    starts: int
    converged: int

    def to_record(self) -> dict:
        return {
            "alpha": self.alpha,
            "A": self.A,
            "B": self.B,
            "objective": self.objective,
            "boundary_active": self.boundary_active,
            "starts": self.starts,
            "converged": self.converged,
        }


@dataclass(frozen=True)
class PowerSumSuite:
    instances: int
    violations: int
    min_ratio: float
    worst: Optional[PowerSumInstance] = None
    seed: int = 0

    def to_record(self) -> dict:
        return {
            "instances": self.instances,
            "violations": self.violations,
            "min_ratio": self.min_ratio,
            "seed": self.seed,
            "worst": None if self.worst is None else {
                "points": [[z.real, z.imag] for z in self.worst.points], "M": self.worst.M},
        }

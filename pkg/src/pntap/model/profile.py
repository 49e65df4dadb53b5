# src/pntap/model/profile.py
from __future__ import annotations
from dataclasses import dataclass
from typing import Optional

from pntap import constants as K
from pntap.errors import DomainError

KINDS = ("VK", "IWANIEC", "DH")


@dataclass(frozen=True)
class ZeroFreeRegionProfile:
    """Shape of a zero-free region delta(t) and the constants it needs.

    VK uses c_vk alone, IWANIEC needs the squarefree kernel d of q, and
    DH needs the exceptional zero beta1 it is repelled by.
    """
    kind: str = "VK"
    c_vk: float = K.C_VK_DEFAULT
    c_iw: float = K.C_IW
    c_dh: float = K.C_DH_DEFAULT
    squarefree_part: Optional[int] = None
    beta1: Optional[float] = None

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise DomainError(f"unknown zero-free region kind {self.kind!r}", {"kind": self.kind})
        if min(self.c_vk, self.c_iw, self.c_dh) <= 0:
            raise DomainError("zero-free region constants must be positive")
        if self.kind == "IWANIEC" and (self.squarefree_part is None or self.squarefree_part < 1):
            raise DomainError("IWANIEC profile needs the squarefree part d >= 1")
        if self.kind == "DH" and (self.beta1 is None or not 0 < self.beta1 < 1):
            raise DomainError("DH profile needs beta1 in (0, 1)")

    def to_record(self) -> dict:
        return {
            "kind": self.kind,
            "c_vk": self.c_vk,
            "c_iw": self.c_iw,
            "c_dh": self.c_dh,
            "squarefree_part": self.squarefree_part,
            "beta1": self.beta1,
        }

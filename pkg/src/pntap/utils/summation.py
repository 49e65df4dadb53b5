# src/pntap/utils/summation.py
from __future__ import annotations
import math
from typing import Iterable, Tuple, Union

import numpy as np


def two_sum(u: float, v: float) -> Tuple[float, float]:
    """Error-free transformation: u + v == s + t exactly."""
    s = u + v
    up = s - v
    vpp = s - up
    up -= u
    vpp -= v
    return s, -(up + vpp)


class CompensatedSum:
    """Running sum held as a (hi, lo) pair, like ``math.fsum`` but incremental.

    Segments of the sieve are reduced with ``math.fsum`` and then folded in
    here, so totals over 10^8 terms keep close to full double accuracy.
    """

    __slots__ = ("_s", "_t")

    def __init__(self, y: Union[float, "CompensatedSum"] = 0.0) -> None:
        if isinstance(y, CompensatedSum):
            self._s, self._t = y._s, y._t
        else:
            self._s, self._t = float(y), 0.0

    def add(self, y: float) -> "CompensatedSum":
        y, u = two_sum(float(y), self._t)
        self._s, self._t = two_sum(y, self._s)
        if self._s == 0.0:
            self._s = u
        else:
            self._t += u
        return self

    def add_many(self, values: Union[Iterable[float], np.ndarray]) -> "CompensatedSum":
        arr = np.asarray(values, dtype=np.float64)
        if arr.size:
            self.add(math.fsum(arr.tolist()))
        return self

    def __iadd__(self, y: Union[float, "CompensatedSum"]) -> "CompensatedSum":
        if isinstance(y, CompensatedSum):
            self.add(y._s)
            self.add(y._t)
        else:
            self.add(y)
        return self

    @property
    def value(self) -> float:
        return self._s + self._t

    def __float__(self) -> float:
        return self.value

    def __repr__(self) -> str:
        return f"CompensatedSum({self.value!r})"


class ComplexCompensatedSum:
    """Real and imaginary parts carried by two CompensatedSum halves."""

    __slots__ = ("re", "im")

    def __init__(self) -> None:
        self.re = CompensatedSum()
        self.im = CompensatedSum()

    def add_many(self, values: np.ndarray) -> "ComplexCompensatedSum":
        arr = np.asarray(values, dtype=np.complex128)
        self.re.add_many(arr.real)
        self.im.add_many(arr.imag)
        return self

    @property
    def value(self) -> complex:
        return complex(self.re.value, self.im.value)

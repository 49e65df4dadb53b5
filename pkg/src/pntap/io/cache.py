# src/pntap/io/cache.py
from __future__ import annotations
import os
from typing import Optional

import numpy as np

from pntap.utils.logging import get_logger

log = get_logger(__name__)

MAGIC = b"PNTS"
VERSION = 1

HEADER = np.dtype([
    ("magic", "S4"),
    ("version", "<u4"),
    ("lo", "<u8"),
    ("hi", "<u8"),
    ("count", "<u8"),
])


class SegmentCache:
    """Sieved blocks on disk, one file per [lo, hi) block.

    Layout: a 32-byte header (magic, version, lo, hi, count) followed by
    ``count`` little-endian uint64 primes. Files with another version or a
    short payload are ignored and rewritten.
    """

    def __init__(self, root: str) -> None:
        self.root = root
        os.makedirs(root, exist_ok=True)
        self.hits = 0
        self.misses = 0

    def path(self, lo: int, hi: int) -> str:
        return os.path.join(self.root, f"seg_{lo}_{hi}.bin")

    def load(self, lo: int, hi: int) -> Optional[np.ndarray]:
        p = self.path(lo, hi)
        if not os.path.exists(p):
            self.misses += 1
            return None
        with open(p, "rb") as f:
            raw = f.read()
        if len(raw) < HEADER.itemsize:
            self.misses += 1
            return None
        head = np.frombuffer(raw[:HEADER.itemsize], dtype=HEADER)[0]
        if head["magic"] != MAGIC or int(head["version"]) != VERSION \
                or int(head["lo"]) != lo or int(head["hi"]) != hi:
            log.warning("stale cache segment %s ignored", p)
            self.misses += 1
            return None
        body = np.frombuffer(raw[HEADER.itemsize:], dtype="<u8")
        if body.size != int(head["count"]):
            log.warning("truncated cache segment %s ignored", p)
            self.misses += 1
            return None
        self.hits += 1
        return body.astype(np.int64)

    def store(self, lo: int, hi: int, primes: np.ndarray) -> None:
        head = np.zeros(1, dtype=HEADER)
        head["magic"] = MAGIC
        head["version"] = VERSION
        head["lo"] = lo
        head["hi"] = hi
        head["count"] = primes.size
        tmp = self.path(lo, hi) + ".tmp"
        with open(tmp, "wb") as f:
            f.write(head.tobytes())
            f.write(np.asarray(primes, dtype="<u8").tobytes())
        os.replace(tmp, self.path(lo, hi))

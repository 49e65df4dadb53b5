# src/pntap/io/load_queries.py
from __future__ import annotations
import csv
from typing import Dict, Iterable, List

from pntap.errors import DomainError
from pntap.model.query import ThetaQuery

REQUIRED = ("x", "h", "q", "a")


def _read_csv(path: str) -> Iterable[Dict[str, str]]:
    with open(path, newline="", encoding="utf-8") as f:
        for row in csv.DictReader(f):
            # normalize keys
            yield {(k.strip().lower() if k else k): (v.strip() if isinstance(v, str) else v)
                   for k, v in row.items()}


def _as_number(s: str) -> float:
    # "1e6" and "1000000" both accepted
    v = float(s)
    return int(v) if v.is_integer() else v


def load_queries(path: str) -> List[ThetaQuery]:
    """Batch file of x,h,q,a rows (header required, extra columns ignored)."""
    out: List[ThetaQuery] = []
    for lineno, row in enumerate(_read_csv(path), start=2):
        missing = [c for c in REQUIRED if not row.get(c)]
        if missing:
            raise DomainError(f"{path}:{lineno}: missing {missing}", {"path": path, "line": lineno})
        try:
            x, h = _as_number(row["x"]), _as_number(row["h"])
            q, a = int(_as_number(row["q"])), int(_as_number(row["a"]))
        except ValueError as exc:
            raise DomainError(f"{path}:{lineno}: {exc}", {"path": path, "line": lineno}) from exc
        out.append(ThetaQuery(x, h, q, a))
    return out

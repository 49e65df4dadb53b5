# src/pntap/io/summaries.py
from __future__ import annotations
import json
import math
import os
import sys
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from pntap.constants import SCHEMA_VERSION


def _plain(v: Any) -> Any:
    """JSON-safe copy: numpy scalars unwrapped, non-finite floats as strings."""
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, np.ndarray):
        return [_plain(x) for x in v.tolist()]
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.bool_,)):
        return bool(v)
    if isinstance(v, (float, np.floating)):
        f = float(v)
        return f if math.isfinite(f) else str(f)
    if isinstance(v, complex):
        return [_plain(v.real), _plain(v.imag)]
    if isinstance(v, Fraction):
        return str(v)
    return v


def envelope(kind: str, payload: Dict[str, Any], seed: Optional[int] = None,
             config: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    """Wrap a result with schema_version, its kind, and the seed and config that made it."""
    out: Dict[str, Any] = {"schema_version": SCHEMA_VERSION, "kind": kind, "result": payload}
    if seed is not None:
        out["seed"] = seed
    if config is not None:
        out["config"] = config
    return out


def dumps(doc: Dict[str, Any]) -> str:
    return json.dumps(_plain(doc), sort_keys=True, indent=2) + "\n"


def frame(rows: List[Dict[str, Any]], cols: Sequence[str]) -> pd.DataFrame:
    """DataFrame with exactly ``cols`` in order; missing columns filled with None."""
    if not rows:
        return pd.DataFrame(columns=list(cols))
    df = pd.DataFrame(rows)
    for c in cols:
        if c not in df.columns:
            df[c] = None
    return df[list(cols)]


def _write_text(text: str, out: Optional[str]) -> Optional[str]:
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return None
    d = os.path.dirname(out)
    if d:
        os.makedirs(d, exist_ok=True)
    with open(out, "w", encoding="utf-8", newline="") as f:
        f.write(text)
    return out


def emit(doc: Dict[str, Any], fmt: str = "json", out: Optional[str] = None,
         rows: Optional[List[Dict[str, Any]]] = None, cols: Optional[Sequence[str]] = None) -> Optional[str]:
    """Write ``doc`` as JSON, or ``rows`` as CSV in the documented column order."""
    if fmt == "csv":
        if rows is None:
            rows = [_flatten(doc.get("result", doc))]
            cols = cols or list(rows[0])
        df = frame([_plain(r) for r in rows], cols or (list(rows[0]) if rows else []))
        return _write_text(df.to_csv(index=False, lineterminator="\n"), out)
    return _write_text(dumps(doc), out)


def _flatten(d: Any, prefix: str = "") -> Dict[str, Any]:
    if not isinstance(d, dict):
        return {prefix or "value": d}
    flat: Dict[str, Any] = {}
    for k, v in d.items():
        key = f"{prefix}.{k}" if prefix else str(k)
        if isinstance(v, dict):
            flat.update(_flatten(v, key))
        elif isinstance(v, (list, tuple)):
            flat[key] = json.dumps(_plain(v), sort_keys=True)
        else:
            flat[key] = v
    return flat

# src/pntap/utils/logging.py
from __future__ import annotations
import logging
import sys
from typing import Any, Dict, List, Optional

_FORMAT = "%(levelname)s %(name)s: %(message)s"


class EventLog:
    """Structured events a run collects for its report."""

    def __init__(self) -> None:
        self.records: List[Dict[str, Any]] = []

    def emit(self, rec: Dict[str, Any]) -> None:
        self.records.append(rec)

    def of(self, event: str) -> List[Dict[str, Any]]:
        return [r for r in self.records if r.get("event") == event]

    def __len__(self) -> int:
        return len(self.records)


def get_logger(name: str) -> logging.Logger:
    return logging.getLogger(name)


def configure(level: str = "WARNING", stream: Optional[Any] = None) -> None:
    """Set up the ``pntap`` logger tree once; repeated calls only change the level."""
    root = logging.getLogger("pntap")
    root.setLevel(getattr(logging, str(level).upper(), logging.WARNING))
    if not root.handlers:
        handler = logging.StreamHandler(stream or sys.stderr)
        handler.setFormatter(logging.Formatter(_FORMAT))
        root.addHandler(handler)


def progress(msg: str, quiet: bool = False, stream: Optional[Any] = None) -> None:
    if not quiet:
        print(msg, file=stream or sys.stderr, flush=True)

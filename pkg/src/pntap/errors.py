# src/pntap/errors.py
from __future__ import annotations
from typing import Any, Dict, Optional


class ToolkitError(Exception):
    """Base class for every failure raised by pntap operations."""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None) -> None:
        super().__init__(message)
        self.message = message
        self.details: Dict[str, Any] = dict(details or {})

    def to_record(self) -> Dict[str, Any]:
        return {"error": type(self).__name__, "message": self.message, **self.details}


class InvalidModulusError(ToolkitError):
    pass


class InvalidResidueError(ToolkitError):
    pass


class InvalidConstraintError(ToolkitError):
    pass


class ResourceError(ToolkitError):
    """A configured cap (sieve range, q, t, series length) would be exceeded."""


class PoleError(ToolkitError):
    pass


class DomainError(ToolkitError):
    pass


class PreconditionError(ToolkitError):
    pass


class InconclusiveContourError(ToolkitError):
    pass


class ConvergenceError(ToolkitError):
    """Optimizer budget exhausted. ``best`` holds the best iterate seen."""

    def __init__(self, message: str, best: Any = None, details: Optional[Dict[str, Any]] = None) -> None:
        super().__init__(message, details)
        self.best = best


class StaleInputError(ToolkitError):
    pass


class ZeroDiscrepancyError(ToolkitError):
    pass


class InvariantError(ToolkitError):
    """A computed value broke a bound it is guaranteed to satisfy."""

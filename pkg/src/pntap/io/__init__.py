# src/pntap/io/__init__.py
from .load_queries import load_queries
from .summaries import emit, envelope

__all__ = ["load_queries", "emit", "envelope"]

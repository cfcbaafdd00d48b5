"""Plotting layer for rotlat run outputs.

Strictly a read-only consumer of the CSV/JSON files the `rotlat` command
writes; no physics happens here, and rendering is deterministic (repeat
runs produce byte-identical images).
"""

from .figspec import KINDS, FigureSpec
from .figio import SchemaError
from .render import render

__version__ = "0.1.0"
__all__ = ["KINDS", "FigureSpec", "SchemaError", "render", "__version__"]

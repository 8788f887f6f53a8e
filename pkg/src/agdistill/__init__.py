"""Triorthogonal codes from algebraic-geometry codes over GF(2^s) and tools for
checking the resulting magic-state distillation round."""

from __future__ import annotations

__version__ = "0.1.0"

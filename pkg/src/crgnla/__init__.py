"""Exact computations for CR structures of CR dimension 1."""

__version__ = "0.1.0"

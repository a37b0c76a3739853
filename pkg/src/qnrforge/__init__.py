"""Deterministic construction of quadratic nonresidues via Gauss periods."""

__version__ = "0.1.0"

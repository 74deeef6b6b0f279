"""Exact Witt vector, Hochschild homology and pro-module computations."""

__version__ = "0.1.0"

"""Exact symbolic toolkit for jet calculus, distributions on jet space and
Galois theory of field extensions via tensor products."""

__version__ = "0.1.0"

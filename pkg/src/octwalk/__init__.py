"""Directed self-avoiding walks on genus-two hyperbolic octagonal lattices."""

__version__ = "0.1.0"

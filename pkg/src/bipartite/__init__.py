"""Exact and factorized (mean-field) dynamics of bipartite quantum systems."""

__version__ = "0.1.0"

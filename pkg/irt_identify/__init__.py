"""Numerical laboratory for asymptotic identifiability of nonparametric IRT models."""

__version__ = "0.1.0"

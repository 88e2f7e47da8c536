"""Exact strong-difference calculus on small infinitesimal objects."""

__version__ = "0.1.0"

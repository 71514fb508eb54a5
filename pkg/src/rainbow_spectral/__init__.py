"""Spectral-radius conditions for rainbow matchings in graph families, checked at desk scale."""

__version__ = "0.1.0"

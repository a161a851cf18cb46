"""Extremal univalent polynomials, trees, and Schwarz dynamics."""

__version__ = "0.1.0"

"""Combinatorics of toric degenerations of Calabi-Yau complete intersections."""

__version__ = "0.1.0"

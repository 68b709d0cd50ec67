"""Numerical bounds on the Crouzeix ratio of the strictly upper triangular all-ones matrices."""

__version__ = "0.1.0"

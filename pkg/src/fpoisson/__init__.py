"""Numerical fractional Poisson analysis on the nonnegative integers."""

from .measure import FpmParams

__version__ = "0.1.0"

__all__ = ["FpmParams", "__version__"]

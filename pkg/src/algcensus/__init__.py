"""Exact census of real algebraic numbers by degree and height, with density evaluators."""

from .poly import IntPoly, PolynomialError
from .roots import HalfOpenInterval, INF, ext

__version__ = "0.1.0"

__all__ = ["IntPoly", "PolynomialError", "HalfOpenInterval", "INF", "ext", "__version__"]

"""Exact computations in the algebra of differential operators tangent to a line arrangement."""

from .base import Arrangement, LinearForm, Poly, build_arrangement, example_arrangement
from .ore import OreAlgebra, OreElement

__all__ = [
    "Arrangement",
    "LinearForm",
    "Poly",
    "build_arrangement",
    "example_arrangement",
    "OreAlgebra",
    "OreElement",
]
__version__ = "0.1.0"

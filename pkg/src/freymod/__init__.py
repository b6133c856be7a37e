"""Computational toolkit for the modular method applied to x^4 + d y^2 = z^p
and x^2 + d y^6 = z^p over imaginary quadratic fields."""

from freymod.quadfield import QuadField, QuadInt, PrimeSplitting, class_number, splitting_type
from freymod.frey import FreyCurve, build_frey, cm_check
from freymod.sieve import sieve_2torsion, sieve_3torsion, solve_mod8

__all__ = [
    "QuadField",
    "QuadInt",
    "PrimeSplitting",
    "class_number",
    "splitting_type",
    "FreyCurve",
    "build_frey",
    "cm_check",
    "sieve_2torsion",
    "sieve_3torsion",
    "solve_mod8",
]

__version__ = "0.1.0"

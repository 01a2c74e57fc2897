"""Exact construction and checking of invariant pluri-harmonic polynomials in two matrix arguments."""

from .exactpoly import Poly
from .laplace import OperatorParams, TrivialSpaceError
from .rcsolve import PBasisExpr, solve_recursion

__all__ = ["Poly", "OperatorParams", "TrivialSpaceError", "PBasisExpr", "solve_recursion"]

"""Exact arithmetic kernel: rationals, polynomials, rational functions, linear algebra."""

from .linalg import Inconsistent, LinearSolution, RankResult, determinant, generic_rank, nullspace, rref, solve_linear
from .parse import ExprSyntaxError, parse
from .poly import MPoly, NotDivisible, gcd, var_key
from .ratfunc import DenominatorVanishes, Rat, RatFunc, derive, partial_derivative, substitute

__all__ = [
    "DenominatorVanishes",
    "ExprSyntaxError",
    "Inconsistent",
    "LinearSolution",
    "MPoly",
    "NotDivisible",
    "Rat",
    "RankResult",
    "RatFunc",
    "derive",
    "determinant",
    "gcd",
    "generic_rank",
    "nullspace",
    "parse",
    "partial_derivative",
    "rref",
    "solve_linear",
    "substitute",
    "var_key",
]

"""Exact coefficient fields, polynomials, rational functions and linear algebra."""

from gauss_grass.algebra.field import FieldElem, FieldSpec, is_prime
from gauss_grass.algebra.linalg import (
    Matrix,
    field_rref,
    mat_rank,
    mat_rank_pivots,
    mat_solve,
    matmul,
    transpose,
)
from gauss_grass.algebra.parse import poly_parse, ratfunc_parse
from gauss_grass.algebra.poly import MultiPoly, RatFunc, Ring


def poly_diff(p: MultiPoly, var: str) -> MultiPoly:
    return p.diff(var)


def ratfunc_arith(lhs: RatFunc, rhs: RatFunc, op: str) -> RatFunc:
    """Apply ``op`` (one of add, sub, mul, div) and return the canonical result."""
    if op == "add":
        return lhs + rhs
    if op == "sub":
        return lhs - rhs
    if op == "mul":
        return lhs * rhs
    if op == "div":
        return lhs / rhs
    raise ValueError(f"unknown operation {op!r}")


__all__ = [
    "FieldElem",
    "FieldSpec",
    "Matrix",
    "MultiPoly",
    "RatFunc",
    "Ring",
    "field_rref",
    "is_prime",
    "mat_rank",
    "mat_rank_pivots",
    "mat_solve",
    "matmul",
    "poly_diff",
    "poly_parse",
    "ratfunc_arith",
    "ratfunc_parse",
    "transpose",
]

"""Reading polynomials, field elements and extension descriptors from text."""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

from ..exactalg import MPoly, RatFunc, parse
from .fields import QQ, FractionField, NumberField, URat
from .unipoly import UniPoly


def _eval_poly(p: MPoly, bindings: Mapping, one):
    acc = one * 0
    for mono, c in p:
        term = one * c
        for name, e in mono:
            if name not in bindings:
                raise ValueError(f"unknown symbol {name!r}")
            term = term * bindings[name] ** e
        acc = acc + term
    return acc


def evaluate(expr: str | RatFunc, bindings: Mapping, one):
    """Evaluate an expression with each symbol bound to an element of a field containing ``one``."""
    f = parse(expr) if isinstance(expr, str) else expr
    return _eval_poly(f.num, bindings, one) / _eval_poly(f.den, bindings, one)


def field_bindings(field) -> dict:
    out = {}
    while isinstance(field, NumberField):
        out[field.gen_name] = field.gen
        field = field.base
    return out


def element(expr, field):
    """Parse an element of ``field`` written in the generator names of its tower."""
    if isinstance(expr, (int, Fraction)):
        return field.coerce(expr)
    top = field
    value = evaluate(str(expr), field_bindings(field), top.one)
    return top.coerce(value)


def poly_from_coeffs(coeffs: Sequence, field=QQ, var: str = "y") -> UniPoly:
    """Lowest-degree-first coefficient list; entries are numbers or expressions."""
    return UniPoly(field, [element(c, field) for c in coeffs], var)


def number_field_from_json(data: Mapping | None) -> NumberField | object:
    """``{"gen": ..., "minpoly": [...], "base": {...} | null}``; ``None`` means the rationals."""
    if data is None:
        return QQ
    base = number_field_from_json(data.get("base"))
    minpoly = poly_from_coeffs(data["minpoly"], base, data["gen"])
    return NumberField(minpoly, data["gen"], base)


def number_field_to_json(field) -> dict | None:
    if field is QQ:
        return None
    return {
        "gen": field.gen_name,
        "minpoly": [str(c) for c in field.minpoly.coeffs],
        "base": number_field_to_json(field.base),
    }


def rational_map(expr: str, field: FractionField) -> URat:
    """A rational function of ``field.var`` with coefficients in ``field.base``."""
    bindings = {k: field.coerce(v) for k, v in field_bindings(field.base).items()}
    bindings[field.var] = field.gen
    return evaluate(expr, bindings, field.one)


__all__ = [
    "element",
    "evaluate",
    "number_field_from_json",
    "number_field_to_json",
    "poly_from_coeffs",
    "rational_map",
]

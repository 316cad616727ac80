"""Rational functions in canonical form: coprime numerator and monic denominator."""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping

from .poly import MPoly, gcd

Rat = Fraction


class DenominatorVanishes(ZeroDivisionError):
    """A substitution or division produced a zero denominator."""


class RatFunc:
    """Immutable quotient ``num/den`` of polynomials over the rationals.

    The constructor reduces by the gcd and makes the denominator monic,
    so equal values have identical ``num`` and ``den``.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num=0, den=1, *, _canonical: bool = False):
        num = MPoly._coerce(num)
        den = MPoly._coerce(den)
        if not den:
            raise DenominatorVanishes("zero denominator")
        if not _canonical:
            num, den = _normalize(num, den)
        self.num = num
        self.den = den
        self._hash = None

    @classmethod
    def var(cls, name: str) -> "RatFunc":
        return cls(MPoly.var(name), MPoly.const(1), _canonical=True)

    @classmethod
    def const(cls, c) -> "RatFunc":
        return cls(MPoly.const(c), MPoly.const(1), _canonical=True)

    @classmethod
    def poly(cls, p: MPoly) -> "RatFunc":
        return cls(p, MPoly.const(1), _canonical=True)

    # queries ------------------------------------------------------------
    def __bool__(self) -> bool:
        return bool(self.num)

    def is_zero(self) -> bool:
        return not self.num

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not a constant")
        return self.num.constant_value() / self.den.constant_value()

    def variables(self) -> set[str]:
        return self.num.variables() | self.den.variables()

    def __eq__(self, other) -> bool:
        if isinstance(other, RatFunc):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction)):
            return self.den.is_constant() and self.num == other
        if isinstance(other, MPoly):
            return self.den.is_constant() and self.num == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    # arithmetic ---------------------------------------------------------
    @staticmethod
    def _coerce(x) -> "RatFunc":
        if isinstance(x, RatFunc):
            return x
        if isinstance(x, (int, Fraction)):
            return RatFunc.const(x)
        if isinstance(x, MPoly):
            return RatFunc.poly(x)
        raise TypeError(f"cannot use {type(x).__name__} as a rational function")

    def __add__(self, other) -> "RatFunc":
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        if not o.num:
            return self
        if not self.num:
            return o
        a, b, c, d = self.num, self.den, o.num, o.den
        if b == d:
            if b.is_constant():
                return RatFunc(a + c, b, _canonical=True)
            t = a + c
            g = gcd(t, b)
            return RatFunc(t.divexact(g), b.divexact(g), _canonical=True)._fix()
        if b.is_constant() and d.is_constant():
            return RatFunc(a + c, MPoly.const(1), _canonical=True)
        if d.is_constant():
            return RatFunc(a + c * b, b, _canonical=True)
        if b.is_constant():
            return RatFunc(a * d + c, d, _canonical=True)
        g = gcd(b, d)
        bg, dg = b.divexact(g), d.divexact(g)
        t = a * dg + c * bg
        if not t:
            return RatFunc()
        if g.is_constant():
            return RatFunc(t, b * d, _canonical=True)._fix()
        g2 = gcd(t, g)
        return RatFunc(t.divexact(g2), bg * d.divexact(g2), _canonical=True)._fix()

    __radd__ = __add__

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den, _canonical=True)

    def __sub__(self, other) -> "RatFunc":
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other) -> "RatFunc":
        return self._coerce(other) - self

    def __mul__(self, other) -> "RatFunc":
        if isinstance(other, (int, Fraction)):
            if not other:
                return RatFunc()
            return RatFunc(self.num.scale(other), self.den, _canonical=True)
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        if not self.num or not o.num:
            return RatFunc()
        a, b, c, d = self.num, self.den, o.num, o.den
        if b.is_constant() and d.is_constant():
            return RatFunc(a * c, MPoly.const(1), _canonical=True)
        g1 = gcd(a, d)
        g2 = gcd(c, b)
        return RatFunc(a.divexact(g1) * c.divexact(g2), b.divexact(g2) * d.divexact(g1), _canonical=True)._fix()

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if not self.num:
            raise DenominatorVanishes("inverse of zero")
        return RatFunc(self.den, self.num, _canonical=True)._fix()

    def __truediv__(self, other) -> "RatFunc":
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other) -> "RatFunc":
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int) -> "RatFunc":
        if n < 0:
            return self.inverse() ** (-n)
        return RatFunc(self.num ** n, self.den ** n, _canonical=True)

    def _fix(self) -> "RatFunc":
        lc = self.den.leading_coeff()
        if lc != 1:
            self.num = self.num.scale(1 / lc)
            self.den = self.den.scale(1 / lc)
        return self

    # calculus -----------------------------------------------------------
    def diff(self, v: str) -> "RatFunc":
        dn = self.num.diff(v)
        if self.den.is_constant():
            return RatFunc(dn, self.den, _canonical=True)
        dd = self.den.diff(v)
        if not dd:
            return RatFunc(dn, self.den)
        return RatFunc(dn * self.den - self.num * dd, self.den * self.den)

    # substitution -------------------------------------------------------
    def subs(self, bindings: Mapping[str, "RatFunc"]) -> "RatFunc":
        rel = {v: RatFunc._coerce(b) for v, b in bindings.items()}
        here = self.variables()
        rel = {v: b for v, b in rel.items() if v in here}
        if not rel:
            return self
        num = _eval_poly(self.num, rel)
        den = _eval_poly(self.den, rel)
        if not den:
            raise DenominatorVanishes(f"denominator {self.den} vanishes under substitution")
        return num / den

    def rename(self, mapping: Mapping[str, str]) -> "RatFunc":
        return RatFunc(self.num.rename(mapping), self.den.rename(mapping))

    # printing -----------------------------------------------------------
    def __str__(self) -> str:
        if self.den == 1:
            return self.num.to_str(wrap=True)
        n = self.num.to_str(wrap=True)
        d = self.den.to_str(wrap=True)
        if not self.den.is_monomial():
            return f"{n}/{d}"
        (m, c), = self.den.terms.items()
        if len(m) > 1 or c != 1:
            d = f"({d})"
        return f"{n}/{d}"

    def __repr__(self) -> str:
        return f"RatFunc({str(self)!r})"


def _normalize(num: MPoly, den: MPoly) -> tuple[MPoly, MPoly]:
    if not num:
        return MPoly(), MPoly.const(1)
    if not den.is_constant():
        g = gcd(num, den)
        if not g.is_constant():
            num, den = num.divexact(g), den.divexact(g)
    lc = den.leading_coeff()
    if lc != 1:
        num, den = num.scale(1 / lc), den.scale(1 / lc)
    return num, den


def _eval_poly(p: MPoly, rel: Mapping[str, RatFunc]) -> RatFunc:
    powers: dict[tuple[str, int], RatFunc] = {}
    polys_only = all(b.den.is_constant() for b in rel.values())
    if polys_only:
        prel = {v: b.num.scale(1 / b.den.constant_value()) for v, b in rel.items()}
        ppow: dict[tuple[str, int], MPoly] = {}
        total = MPoly()
        for m, c in p.terms.items():
            term = MPoly.const(c)
            keep = []
            for v, e in m:
                if v in prel:
                    key = (v, e)
                    if key not in ppow:
                        ppow[key] = prel[v] ** e
                    term = term * ppow[key]
                else:
                    keep.append((v, e))
            if keep:
                term = term.mul_monomial(tuple(keep))
            total = total + term
        return RatFunc.poly(total)
    total = RatFunc()
    for m, c in p.terms.items():
        keep = []
        term = RatFunc.const(c)
        for v, e in m:
            if v in rel:
                key = (v, e)
                if key not in powers:
                    powers[key] = rel[v] ** e
                term = term * powers[key]
            else:
                keep.append((v, e))
        if keep:
            term = term * RatFunc.poly(MPoly.monomial(tuple(keep)))
        total = total + term
    return total


def substitute(f: RatFunc, bindings: Mapping[str, RatFunc]) -> RatFunc:
    """Simultaneous substitution; raises :class:`DenominatorVanishes` on a pole."""
    return f.subs(bindings)


def partial_derivative(f: RatFunc, v: str) -> RatFunc:
    return f.diff(v)


def derive(f: RatFunc, image) -> RatFunc:
    """Apply the derivation sending each variable ``v`` to ``image(v)``.

    ``image`` returns a :class:`RatFunc` or ``None`` (meaning zero). The
    numerator and denominator are differentiated separately so the result is
    normalised only once.
    """

    def on_poly(p: MPoly):
        poly_acc = MPoly()
        rat_acc = None
        for v in p.variables():
            c = image(v)
            if c is None or not c:
                continue
            dp = p.diff(v)
            if c.den.is_constant():
                poly_acc = poly_acc + dp * c.num.scale(1 / c.den.constant_value())
            else:
                t = RatFunc.poly(dp) * c
                rat_acc = t if rat_acc is None else rat_acc + t
        return poly_acc, rat_acc

    dn_p, dn_r = on_poly(f.num)
    if f.den.is_constant():
        out = RatFunc(dn_p, f.den, _canonical=True)
        return out + dn_r if dn_r is not None else out
    dd_p, dd_r = on_poly(f.den)
    if dn_r is None and dd_r is None:
        return RatFunc(dn_p * f.den - f.num * dd_p, f.den * f.den)
    dn = RatFunc.poly(dn_p) + (dn_r if dn_r is not None else 0)
    dd = RatFunc.poly(dd_p) + (dd_r if dd_r is not None else 0)
    return dn / RatFunc.poly(f.den) - RatFunc(f.num, f.den * f.den) * dd

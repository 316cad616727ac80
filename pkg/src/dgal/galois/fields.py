"""Coefficient fields: the rationals, simple algebraic extensions, and
univariate rational function fields over either."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable

from .unipoly import UniPoly, _has_top_level_sum


class RationalField:
    zero = Fraction(0)
    one = Fraction(1)
    degree = 1
    name = "QQ"

    def coerce(self, x) -> Fraction:
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int):
            return Fraction(x)
        raise TypeError(f"cannot coerce {type(x).__name__} into QQ")

    def format(self, c: Fraction) -> str:
        return str(c)

    def is_atomic(self, c) -> bool:
        return True

    def tower(self) -> list:
        return [self]

    def flatten(self, c) -> list[Fraction]:
        return [self.coerce(c)]

    def __repr__(self) -> str:
        return "QQ"


QQ = RationalField()


class NumberField:
    """``base[gen]/(minpoly)`` with ``minpoly`` monic and irreducible over ``base``."""

    def __init__(self, minpoly, gen: str = "eta", base=QQ, check: bool = True):
        if not isinstance(minpoly, UniPoly):
            minpoly = UniPoly(base, minpoly, gen)
        if minpoly.field is not base:
            minpoly = minpoly.change_field(base)
        if minpoly.degree < 1:
            raise ValueError("minimal polynomial must have positive degree")
        self.base = base
        self.gen_name = gen
        self.minpoly = minpoly.monic().with_var(gen)
        self.n = self.minpoly.degree
        self.zero = NFElem(self, UniPoly(base, (), gen))
        self.one = NFElem(self, UniPoly(base, (base.one,), gen))
        if check:
            from .factor import factor

            facs = factor(self.minpoly)
            if len(facs.factors) != 1 or facs.factors[0][1] != 1:
                raise ValueError(f"{self.minpoly} is reducible over {base!r}")

    @property
    def degree(self) -> int:
        """Degree over the rationals."""
        return self.n * self.base.degree

    @property
    def gen(self) -> "NFElem":
        return NFElem(self, UniPoly.x(self.base, self.gen_name))

    def element(self, coeffs: Iterable) -> "NFElem":
        return NFElem(self, UniPoly(self.base, coeffs, self.gen_name))

    def coerce(self, x) -> "NFElem":
        if isinstance(x, NFElem):
            if x.field is self:
                return x
            return NFElem(self, UniPoly(self.base, (self.base.coerce(x),), self.gen_name))
        return NFElem(self, UniPoly(self.base, (self.base.coerce(x),), self.gen_name))

    def embeds(self, other) -> bool:
        return other is self or (isinstance(self.base, NumberField) and self.base.embeds(other)) or other is QQ

    def format(self, c: "NFElem") -> str:
        return str(c)

    def is_atomic(self, c: "NFElem") -> bool:
        return not _has_top_level_sum(str(c).lstrip("-"))

    def tower(self) -> list:
        return self.base.tower() + [self]

    def flatten(self, c) -> list[Fraction]:
        """Coordinates over the rationals in the power basis of the tower."""
        c = self.coerce(c)
        out = []
        for k in range(self.n):
            out.extend(self.base.flatten(c.poly[k]))
        return out

    def __repr__(self) -> str:
        return f"{self.base!r}[{self.gen_name}]/({self.minpoly})"


class NFElem:
    __slots__ = ("field", "poly")

    def __init__(self, field: NumberField, poly: UniPoly):
        if poly.degree >= field.n:
            poly = poly % field.minpoly
        self.field = field
        self.poly = poly

    def _c(self, other) -> "NFElem":
        if isinstance(other, NFElem) and other.field is self.field:
            return other
        return self.field.coerce(other)

    def __add__(self, other):
        try:
            o = self._c(other)
        except TypeError:
            return NotImplemented
        return NFElem(self.field, self.poly + o.poly)

    __radd__ = __add__

    def __neg__(self):
        return NFElem(self.field, -self.poly)

    def __sub__(self, other):
        try:
            o = self._c(other)
        except TypeError:
            return NotImplemented
        return NFElem(self.field, self.poly - o.poly)

    def __rsub__(self, other):
        return self._c(other) - self

    def __mul__(self, other):
        if isinstance(other, UniPoly):
            return NotImplemented
        try:
            o = self._c(other)
        except TypeError:
            return NotImplemented
        return NFElem(self.field, self.poly * o.poly)

    __rmul__ = __mul__

    def inverse(self) -> "NFElem":
        if not self.poly:
            raise ZeroDivisionError("inverse of zero in a number field")
        g, u, _ = self.poly.xgcd(self.field.minpoly)
        if g.degree != 0:
            raise ZeroDivisionError("element is a zero divisor")
        return NFElem(self.field, u)

    def __truediv__(self, other):
        try:
            o = self._c(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self._c(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out, base = self.field.one, self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __bool__(self) -> bool:
        return bool(self.poly)

    def __eq__(self, other) -> bool:
        try:
            o = self._c(other)
        except TypeError:
            return NotImplemented
        return self.poly.coeffs == o.poly.coeffs

    def __hash__(self) -> int:
        return hash(self.poly.coeffs)

    def coords(self) -> list:
        return [self.poly[k] for k in range(self.field.n)]

    def is_rational(self) -> bool:
        return self.poly.degree <= 0

    def __str__(self) -> str:
        return str(self.poly)

    def __repr__(self) -> str:
        return f"NFElem({str(self)!r})"


class FractionField:
    """Rational functions in one variable over ``base``."""

    def __init__(self, base, var: str = "y"):
        self.base = base
        self.var = var
        self.zero = URat(self, UniPoly(base, (), var), UniPoly(base, (base.one,), var), True)
        self.one = URat(self, UniPoly(base, (base.one,), var), UniPoly(base, (base.one,), var), True)

    @property
    def gen(self) -> "URat":
        return URat(self, UniPoly.x(self.base, self.var), UniPoly(self.base, (self.base.one,), self.var), True)

    def coerce(self, x) -> "URat":
        if isinstance(x, URat):
            return x
        if isinstance(x, UniPoly):
            return URat(self, x.change_field(self.base).with_var(self.var), self.one.den)
        return URat(self, UniPoly(self.base, (self.base.coerce(x),), self.var), self.one.den, True)

    def format(self, c) -> str:
        return str(c)

    def is_atomic(self, c) -> bool:
        return c.den.degree == 0 and not _has_top_level_sum(str(c.num).lstrip("-"))

    def __repr__(self) -> str:
        return f"{self.base!r}({self.var})"


class URat:
    __slots__ = ("field", "num", "den")

    def __init__(self, field: FractionField, num: UniPoly, den: UniPoly, canonical: bool = False):
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not canonical:
            if not num:
                den = UniPoly(field.base, (field.base.one,), field.var)
            else:
                g = num.gcd(den)
                if g.degree > 0:
                    num, den = num.exact_div(g), den.exact_div(g)
                inv = field.base.one / den.lc
                num, den = num * inv, den * inv
        self.field, self.num, self.den = field, num, den

    def _c(self, other) -> "URat":
        return other if isinstance(other, URat) else self.field.coerce(other)

    def __add__(self, other):
        o = self._c(other)
        return URat(self.field, self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return URat(self.field, -self.num, self.den, True)

    def __sub__(self, other):
        return self + (-self._c(other))

    def __rsub__(self, other):
        return self._c(other) - self

    def __mul__(self, other):
        if isinstance(other, UniPoly) and other.field is not self.field.base:
            return NotImplemented
        o = self._c(other)
        return URat(self.field, self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._c(other)
        if not o.num:
            raise ZeroDivisionError("division by zero rational function")
        return URat(self.field, self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return self._c(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return (self.field.one / self) ** (-n)
        return URat(self.field, self.num ** n, self.den ** n, True)

    def __bool__(self) -> bool:
        return bool(self.num)

    def __eq__(self, other) -> bool:
        try:
            o = self._c(other)
        except TypeError:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def compose(self, inner: "URat") -> "URat":
        """``self(inner(y))``."""
        d = max(self.num.degree, self.den.degree, 0)
        # Homogenize so only polynomials in inner.num, inner.den appear.
        def hom(p: UniPoly) -> UniPoly:
            acc = UniPoly(self.field.base, (), self.field.var)
            for k, c in enumerate(p.coeffs):
                if c:
                    acc = acc + inner.num ** k * inner.den ** (d - k) * c
            return acc

        return URat(self.field, hom(self.num), hom(self.den))

    def __call__(self, value):
        return self.num(value) / self.den(value)

    def __str__(self) -> str:
        if self.den.degree == 0:
            return str(self.num)
        n = str(self.num)
        if _has_top_level_sum(n.lstrip("-")):
            n = f"({n})"
        return f"{n}/({self.den})"

    def __repr__(self) -> str:
        return f"URat({str(self)!r})"

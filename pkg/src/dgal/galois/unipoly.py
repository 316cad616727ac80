"""Dense univariate polynomials over an exact field."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence


class UniPoly:
    """Polynomial ``sum c_k var^k`` with coefficients in ``field``.

    ``coeffs`` is stored lowest degree first with no trailing zeros, so the
    zero polynomial has an empty tuple and degree -1.
    """

    __slots__ = ("field", "coeffs", "var")

    def __init__(self, field, coeffs: Iterable = (), var: str = "y"):
        cs = [field.coerce(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs)
        self.var = var

    # construction ----------------------------------------------------------
    @classmethod
    def x(cls, field, var: str = "y") -> "UniPoly":
        return cls(field, (field.zero, field.one), var)

    @classmethod
    def const(cls, field, c, var: str = "y") -> "UniPoly":
        return cls(field, (c,), var)

    @classmethod
    def from_roots(cls, field, roots: Sequence, var: str = "y") -> "UniPoly":
        p = cls.const(field, 1, var)
        for r in roots:
            p = p * cls(field, (-field.coerce(r), field.one), var)
        return p

    def _new(self, coeffs) -> "UniPoly":
        return UniPoly(self.field, coeffs, self.var)

    def with_var(self, var: str) -> "UniPoly":
        return UniPoly(self.field, self.coeffs, var)

    def change_field(self, field) -> "UniPoly":
        return UniPoly(field, self.coeffs, self.var)

    # queries ------------------------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self):
        return self.coeffs[-1] if self.coeffs else self.field.zero

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, k: int):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else self.field.zero

    def __eq__(self, other) -> bool:
        if isinstance(other, UniPoly):
            return self.coeffs == other.coeffs
        try:
            return self.coeffs == self._new((other,)).coeffs
        except TypeError:
            return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.lc == self.field.one

    # arithmetic ----------------------------------------------------------------
    def _coerce(self, other) -> "UniPoly":
        if isinstance(other, UniPoly):
            return other
        return self._new((other,))

    def __add__(self, other) -> "UniPoly":
        o = self._coerce(other)
        n = max(len(self.coeffs), len(o.coeffs))
        return self._new(self[k] + o[k] for k in range(n))

    __radd__ = __add__

    def __neg__(self) -> "UniPoly":
        return self._new(-c for c in self.coeffs)

    def __sub__(self, other) -> "UniPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "UniPoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "UniPoly":
        if not isinstance(other, UniPoly):
            c = self.field.coerce(other)
            return self._new(a * c for a in self.coeffs)
        if not self.coeffs or not other.coeffs:
            return self._new(())
        out = [self.field.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    out[i + j] = out[i + j] + a * b
        return self._new(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "UniPoly":
        if n < 0:
            raise ValueError("negative power")
        out, base = self._new((self.field.one,)), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __divmod__(self, other) -> tuple["UniPoly", "UniPoly"]:
        d = self._coerce(other)
        if not d:
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        q = [self.field.zero] * max(len(r) - d.degree, 0)
        inv = self.field.one / d.lc
        for k in range(len(r) - 1, d.degree - 1, -1):
            c = r[k]
            if not c:
                continue
            c = c * inv
            q[k - d.degree] = c
            for j, b in enumerate(d.coeffs):
                r[k - d.degree + j] = r[k - d.degree + j] - c * b
        return self._new(q), self._new(r[: d.degree] if d.degree > 0 else ())

    def __floordiv__(self, other) -> "UniPoly":
        return divmod(self, other)[0]

    def __mod__(self, other) -> "UniPoly":
        return divmod(self, other)[1]

    def exact_div(self, other) -> "UniPoly":
        q, r = divmod(self, other)
        if r:
            raise ArithmeticError(f"{other} does not divide {self}")
        return q

    def monic(self) -> "UniPoly":
        if not self.coeffs:
            return self
        inv = self.field.one / self.lc
        return self._new(c * inv for c in self.coeffs)

    def scale(self, c) -> "UniPoly":
        return self * c

    # calculus and evaluation -----------------------------------------------------
    def derivative(self) -> "UniPoly":
        return self._new(c * k for k, c in enumerate(self.coeffs) if k)

    def __call__(self, value):
        """Horner evaluation at anything closed under ``+`` and ``*`` with the coefficients."""
        acc = None
        for c in reversed(self.coeffs):
            acc = c if acc is None else acc * value + c
        return self.field.zero if acc is None else acc

    def compose(self, inner: "UniPoly") -> "UniPoly":
        acc = inner._new(())
        for c in reversed(self.coeffs):
            acc = acc * inner + inner._new((c,))
        return acc

    def map_coeffs(self, fn, field=None) -> "UniPoly":
        return UniPoly(field or self.field, [fn(c) for c in self.coeffs], self.var)

    # Euclidean algorithms ---------------------------------------------------------
    def gcd(self, other: "UniPoly") -> "UniPoly":
        a, b = self, self._coerce(other)
        while b:
            a, b = b, a % b
        return a.monic()

    def xgcd(self, other: "UniPoly") -> tuple["UniPoly", "UniPoly", "UniPoly"]:
        """``(g, u, v)`` with ``u*self + v*other = g`` monic."""
        zero, one = self._new(()), self._new((self.field.one,))
        r0, r1, s0, s1, t0, t1 = self, self._coerce(other), one, zero, zero, one
        while r1:
            q, r = divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
            t0, t1 = t1, t0 - q * t1
        if not r0:
            return r0, s0, t0
        inv = self.field.one / r0.lc
        return r0 * inv, s0 * inv, t0 * inv

    def resultant(self, other: "UniPoly"):
        a, b = self, self._coerce(other)
        if not a or not b:
            return self.field.zero
        res = self.field.one
        while True:
            da, db = a.degree, b.degree
            if db == 0:
                return res * b.lc ** da
            r = a % b
            if not r:
                return self.field.zero
            if (da * db) % 2:
                res = -res
            res = res * b.lc ** (da - r.degree)
            a, b = b, r

    def is_squarefree(self) -> bool:
        return self.gcd(self.derivative()).degree == 0

    def squarefree_decomposition(self) -> list[tuple["UniPoly", int]]:
        """Yun's algorithm: monic coprime ``(a_i, i)`` with ``prod a_i^i = self.monic()``."""
        f = self.monic()
        if f.degree <= 0:
            return []
        g = f.gcd(f.derivative())
        if g.degree == 0:
            return [(f, 1)]
        out = []
        c, d = f.exact_div(g), f.derivative().exact_div(g)
        i = 1
        while c.degree > 0:
            d = d - c.derivative()
            a = c.gcd(d)
            if a.degree > 0:
                out.append((a, i))
            c = c.exact_div(a)
            d = d.exact_div(a)
            i += 1
        return out

    # printing ------------------------------------------------------------------------
    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts: list[tuple[str, str]] = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            sign, body = _split_sign(self.field.format(c))
            atomic = self.field.is_atomic(c)
            if k == 0:
                term = body if atomic or sign == "-" else f"({body})"
            else:
                mono = self.var if k == 1 else f"{self.var}^{k}"
                if body == "1":
                    term = mono
                else:
                    term = f"{body}*{mono}" if atomic else f"({body})*{mono}"
            parts.append((sign, term))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, term in parts[1:]:
            out += f" {sign} {term}"
        return out

    def __repr__(self) -> str:
        return f"UniPoly({str(self)!r})"


def _split_sign(text: str) -> tuple[str, str]:
    if text.startswith("-") and not _has_top_level_sum(text[1:]):
        return "-", text[1:]
    return "+", text


def _has_top_level_sum(text: str) -> bool:
    depth = 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch in "+-" and depth == 0 and i > 0 and text[i - 1] == " ":
            return True
    return False


def qpoly(coeffs: Iterable, var: str = "y") -> UniPoly:
    """Rational polynomial from low-first coefficients."""
    from .fields import QQ

    return UniPoly(QQ, [Fraction(c) for c in coeffs], var)

"""Sparse multivariate polynomials over the rationals.

A polynomial is a mapping from monomials to nonzero ``Fraction`` coefficients.
A monomial is a tuple of ``(name, exponent)`` pairs sorted by variable name,
so two equal polynomials always hold identical dictionaries.

The term order used for leading terms and printing is graded lexicographic.
Variables are compared with :func:`var_key`, which understands the jet
lexicon (``x1``, ``y2_11``, ``by1_1``, ``g1_2``, ``a3``) and falls back to
plain string order for anything else. The variable with the largest key is
the most significant one.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Mapping

Monomial = tuple[tuple[str, int], ...]

_LEX = re.compile(r"^(b*)([xyag])(\d)(?:_(\d+))?$")
_CLASS = {"x": 0, "a": 1, "y": 2, "g": 3}


@lru_cache(maxsize=None)
def var_key(name: str) -> tuple:
    """Sort key for variable names; larger means more significant."""
    m = _LEX.match(name)
    if m is None:
        return (9, 0, 0, name, 0)
    bars, letter, comp, dirs = m.groups()
    dirs = dirs or ""
    return (_CLASS[letter], len(dirs), int(comp), dirs, len(bars))


class NotDivisible(ArithmeticError):
    """Raised by :meth:`MPoly.divexact` when the division leaves a remainder."""


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    out = dict(a)
    for v, e in b:
        out[v] = out.get(v, 0) + e
    return tuple(sorted(out.items()))


def _mono_div(a: Monomial, b: Monomial) -> Monomial | None:
    out = dict(a)
    for v, e in b:
        r = out.get(v, 0) - e
        if r < 0:
            return None
        if r:
            out[v] = r
        else:
            del out[v]
    return tuple(sorted(out.items()))


def mono_key(m: Monomial) -> tuple:
    """Graded-lex key of a monomial."""
    parts = sorted(((var_key(v), e) for v, e in m), reverse=True)
    return (sum(e for _, e in m), tuple(parts))


def mono_str(m: Monomial) -> str:
    parts = []
    for v, e in sorted(m, key=lambda t: var_key(t[0])):
        parts.append(v if e == 1 else f"{v}^{e}")
    return "*".join(parts)


def _frac_str(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


class MPoly:
    """Immutable sparse polynomial with rational coefficients."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Fraction] | None = None, *, _clean: bool = False):
        if terms is None:
            self.terms: dict[Monomial, Fraction] = {}
        elif _clean:
            self.terms = dict(terms) if not isinstance(terms, dict) else terms
        else:
            self.terms = {m: Fraction(c) for m, c in terms.items() if c}
        self._hash = None

    # construction -------------------------------------------------------
    @classmethod
    def const(cls, c) -> "MPoly":
        c = Fraction(c)
        return cls({(): c}, _clean=True) if c else cls()

    @classmethod
    def var(cls, name: str, exp: int = 1) -> "MPoly":
        return cls({((name, exp),): Fraction(1)}, _clean=True) if exp else cls.const(1)

    @classmethod
    def monomial(cls, mono: Monomial, coeff=1) -> "MPoly":
        c = Fraction(coeff)
        return cls({mono: c}, _clean=True) if c else cls()

    # basic queries ------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and () in self.terms)

    def constant_value(self) -> Fraction:
        return self.terms.get((), Fraction(0))

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def variables(self) -> set[str]:
        out: set[str] = set()
        for m in self.terms:
            out.update(v for v, _ in m)
        return out

    def degree(self, v: str | None = None) -> int:
        if not self.terms:
            return -1
        if v is None:
            return max(sum(e for _, e in m) for m in self.terms)
        return max((dict(m).get(v, 0) for m in self.terms), default=0)

    def leading(self) -> tuple[Monomial, Fraction]:
        m = max(self.terms, key=mono_key)
        return m, self.terms[m]

    def leading_coeff(self) -> Fraction:
        return self.leading()[1]

    def monic(self) -> "MPoly":
        if not self.terms:
            return self
        lc = self.leading_coeff()
        if lc == 1:
            return self
        return MPoly({m: c / lc for m, c in self.terms.items()}, _clean=True)

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        return sorted(self.terms.items(), key=lambda t: mono_key(t[0]), reverse=True)

    # equality / hashing ---------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, MPoly):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == MPoly.const(other).terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # arithmetic ---------------------------------------------------------
    @staticmethod
    def _coerce(x) -> "MPoly":
        if isinstance(x, MPoly):
            return x
        if isinstance(x, (int, Fraction)):
            return MPoly.const(x)
        raise TypeError(f"cannot use {type(x).__name__} as a polynomial")

    def __add__(self, other) -> "MPoly":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return MPoly(out, _clean=True)

    __radd__ = __add__

    def __neg__(self) -> "MPoly":
        return MPoly({m: -c for m, c in self.terms.items()}, _clean=True)

    def __sub__(self, other) -> "MPoly":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "MPoly":
        return self._coerce(other) - self

    def scale(self, c) -> "MPoly":
        c = Fraction(c)
        if not c:
            return MPoly()
        if c == 1:
            return self
        return MPoly({m: v * c for m, v in self.terms.items()}, _clean=True)

    def __mul__(self, other) -> "MPoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, MPoly):
            return NotImplemented
        if not self.terms or not other.terms:
            return MPoly()
        if len(other.terms) == 1 and () in other.terms:
            return self.scale(other.terms[()])
        if len(self.terms) == 1 and () in self.terms:
            return other.scale(self.terms[()])
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return MPoly(out, _clean=True)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "MPoly":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = MPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def mul_monomial(self, mono: Monomial, coeff=1) -> "MPoly":
        coeff = Fraction(coeff)
        return MPoly({_mono_mul(m, mono): c * coeff for m, c in self.terms.items()}, _clean=True) if coeff else MPoly()

    # calculus -----------------------------------------------------------
    def diff(self, v: str) -> "MPoly":
        out: dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            d = dict(m)
            e = d.get(v, 0)
            if not e:
                continue
            if e == 1:
                del d[v]
            else:
                d[v] = e - 1
            nm = tuple(sorted(d.items()))
            out[nm] = out.get(nm, 0) + c * e
        return MPoly({m: c for m, c in out.items() if c}, _clean=True)

    # recursive univariate view ---------------------------------------------
    def as_univariate(self, v: str) -> dict[int, "MPoly"]:
        buckets: dict[int, dict[Monomial, Fraction]] = {}
        for m, c in self.terms.items():
            e = 0
            rest = []
            for name, k in m:
                if name == v:
                    e = k
                else:
                    rest.append((name, k))
            buckets.setdefault(e, {})[tuple(rest)] = c
        return {e: MPoly(t, _clean=True) for e, t in buckets.items()}

    @staticmethod
    def from_univariate(coeffs: Mapping[int, "MPoly"] | list, v: str) -> "MPoly":
        items = coeffs.items() if isinstance(coeffs, Mapping) else enumerate(coeffs)
        out: dict[Monomial, Fraction] = {}
        for e, p in items:
            if not p:
                continue
            if e == 0:
                for m, c in p.terms.items():
                    out[m] = c
                continue
            for m, c in p.terms.items():
                out[_mono_mul(m, ((v, e),))] = c
        return MPoly(out, _clean=True)

    # division -----------------------------------------------------------
    def divexact(self, other: "MPoly") -> "MPoly":
        """Quotient of an exact division; raises :class:`NotDivisible` otherwise."""
        if not other.terms:
            raise ZeroDivisionError("division by the zero polynomial")
        if not self.terms:
            return self
        if other.is_constant():
            return self.scale(1 / other.terms[()])
        if len(other.terms) == 1:
            (mono, c), = other.terms.items()
            out = {}
            for m, k in self.terms.items():
                q = _mono_div(m, mono)
                if q is None:
                    raise NotDivisible
                out[q] = k / c
            return MPoly(out, _clean=True)
        v = max(other.variables(), key=var_key)
        G = other.as_univariate(v)
        dg = max(G)
        lcg = G[dg]
        R = self.as_univariate(v)
        Q: dict[int, MPoly] = {}
        while R:
            d = max(R)
            if d < dg:
                raise NotDivisible
            q = R[d].divexact(lcg)
            Q[d - dg] = q
            for e, g in G.items():
                k = e + d - dg
                r = R.get(k, MPoly()) - q * g
                if r:
                    R[k] = r
                else:
                    R.pop(k, None)
        return MPoly.from_univariate(Q, v)

    def divides(self, other: "MPoly") -> bool:
        try:
            other.divexact(self)
        except NotDivisible:
            return False
        return True

    # evaluation ---------------------------------------------------------
    def evaluate(self, point: Mapping[str, Fraction]) -> "MPoly":
        """Substitute rational values for some variables."""
        out: dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            rest = []
            for v, e in m:
                if v in point:
                    c = c * Fraction(point[v]) ** e
                else:
                    rest.append((v, e))
            if not c:
                continue
            nm = tuple(rest)
            s = out.get(nm, 0) + c
            if s:
                out[nm] = s
            else:
                out.pop(nm, None)
        return MPoly(out, _clean=True)

    def rename(self, mapping: Mapping[str, str]) -> "MPoly":
        out: dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            d: dict[str, int] = {}
            for v, e in m:
                w = mapping.get(v, v)
                d[w] = d.get(w, 0) + e
            nm = tuple(sorted(d.items()))
            s = out.get(nm, 0) + c
            if s:
                out[nm] = s
            else:
                out.pop(nm, None)
        return MPoly(out, _clean=True)

    # printing -----------------------------------------------------------
    def to_str(self, wrap: bool = True) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for i, (m, c) in enumerate(self.sorted_terms()):
            neg = c < 0
            a = -c if neg else c
            body = mono_str(m)
            if not body:
                text = _frac_str(a)
            elif a == 1:
                text = body
            else:
                text = f"{_frac_str(a)}*{body}"
            if i == 0:
                pieces.append(("-" if neg else "") + text)
            else:
                pieces.append((" - " if neg else " + ") + text)
        s = "".join(pieces)
        if wrap and len(self.terms) > 1:
            return f"({s})"
        return s

    def __str__(self) -> str:
        return self.to_str()

    def __repr__(self) -> str:
        return f"MPoly({self.to_str(wrap=False)!r})"

    def __iter__(self) -> Iterator[tuple[Monomial, Fraction]]:
        return iter(self.terms.items())


# gcd -------------------------------------------------------------------------

def _content(polys: Iterable[MPoly]) -> MPoly:
    g = MPoly()
    for p in polys:
        g = gcd(g, p)
        if g.is_constant() and g:
            return MPoly.const(1)
    return g


def _prem(A: list[MPoly], B: list[MPoly]) -> list[MPoly]:
    db = len(B) - 1
    lc = B[-1]
    R = list(A)
    e = len(A) - len(B) + 1
    while R and len(R) - 1 >= db:
        d = len(R) - 1
        t = R[-1]
        R = [lc * c for c in R]
        for i, b in enumerate(B):
            R[i + d - db] = R[i + d - db] - t * b
        while R and not R[-1]:
            R.pop()
        e -= 1
    if e > 0:
        f = lc ** e
        R = [f * c for c in R]
    return R


def _subresultant_gcd(A: list[MPoly], B: list[MPoly]) -> list[MPoly]:
    # A, B primitive, len(A) >= len(B) >= 2
    g = MPoly.const(1)
    h = MPoly.const(1)
    while True:
        delta = len(A) - len(B)
        R = _prem(A, B)
        if not R:
            return B
        if len(R) == 1:
            return [MPoly.const(1)]
        div = g * h ** delta
        A, B = B, [r.divexact(div) for r in R]
        g = A[-1]
        if delta == 0:
            pass
        elif delta == 1:
            h = g
        else:
            h = (g ** delta).divexact(h ** (delta - 1))


def _dense(u: dict[int, MPoly]) -> list[MPoly]:
    out = [MPoly()] * (max(u) + 1)
    for e, p in u.items():
        out[e] = p
    return out


def _image(p: MPoly, v: str, point: dict[str, int]) -> list[Fraction]:
    """Coefficients in ``v`` of ``p`` after evaluating every other variable."""
    out: dict[int, Fraction] = {}
    for m, c in p.terms.items():
        e = 0
        for w, k in m:
            if w == v:
                e = k
            else:
                c = c * point[w] ** k
        out[e] = out.get(e, 0) + c
    dense = [Fraction(0)] * (max(out) + 1)
    for e, c in out.items():
        dense[e] = Fraction(c)
    while len(dense) > 1 and not dense[-1]:
        dense.pop()
    return dense


def _uni_gcd_degree(a: list[Fraction], b: list[Fraction]) -> int:
    while b and any(b):
        while b and not b[-1]:
            b.pop()
        if not b:
            break
        a = list(a)
        lb = b[-1]
        while len(a) >= len(b) and any(a):
            q = a[-1] / lb
            shift = len(a) - len(b)
            for i, c in enumerate(b):
                a[i + shift] -= q * c
            a.pop()
            while a and not a[-1]:
                a.pop()
        a, b = b, a
    return len(a) - 1


_EVAL_POINTS = (3, 7, 11, 17, -5, 23)


def _degree_bound(f: MPoly, g: MPoly, v: str, others: list[str]) -> int | None:
    """Upper bound for the degree in ``v`` of gcd(f, g), or None if no good point was found.

    An evaluation keeping both leading coefficients in ``v`` nonzero maps the
    gcd onto a divisor of the image gcd with the same degree in ``v``.
    """
    df, dg = f.degree(v), g.degree(v)
    best = None
    tries = 0
    for shift in range(len(_EVAL_POINTS)):
        point = {w: _EVAL_POINTS[(i + shift) % len(_EVAL_POINTS)] + i for i, w in enumerate(others)}
        a, b = _image(f, v, point), _image(g, v, point)
        if len(a) - 1 != df or len(b) - 1 != dg:
            continue
        d = _uni_gcd_degree(a, b)
        best = d if best is None else min(best, d)
        tries += 1
        if best == 0 or tries == 3:
            break
    return best


def _monomial_content(p: MPoly) -> dict[str, int]:
    exps = None
    for m in p.terms:
        md = dict(m)
        exps = md if exps is None else {v: min(e, md[v]) for v, e in exps.items() if v in md}
        if not exps:
            return {}
    return exps or {}


class _HeuristicFailed(Exception):
    pass


def _int_dense(p: MPoly, order: list[str]) -> dict[tuple[int, ...], int]:
    """Integer primitive copy of ``p`` keyed by exponent vectors along ``order``."""
    den = 1
    for c in p.terms.values():
        den = den * c.denominator // math.gcd(den, c.denominator)
    pos = {v: i for i, v in enumerate(order)}
    out = {}
    for m, c in p.terms.items():
        e = [0] * len(order)
        for v, k in m:
            e[pos[v]] = k
        out[tuple(e)] = int(c * den)
    return out


def _symmetric_mod(c: int, x: int) -> int:
    r = c % x
    return r - x if r > x // 2 else r


def _heu(f: dict, g: dict, order: list[str]) -> dict:
    if not order:
        return {(): math.gcd(f[()], g[()])}
    norm = min(max(abs(c) for c in f.values()), max(abs(c) for c in g.values()))
    bound = 2 * norm + 29
    x = max(min(bound, 99 * math.isqrt(bound)), 2)
    for _ in range(6):
        ff: dict[tuple[int, ...], int] = {}
        gg: dict[tuple[int, ...], int] = {}
        for src, dst in ((f, ff), (g, gg)):
            for m, c in src.items():
                dst[m[1:]] = dst.get(m[1:], 0) + c * x ** m[0]
            for m in [m for m, c in dst.items() if not c]:
                del dst[m]
        if ff and gg:
            h = _heu(ff, gg, order[1:])
            if h:
                out = {}
                i = 0
                while h:
                    low = {m: _symmetric_mod(c, x) for m, c in h.items()}
                    for m, c in low.items():
                        if c:
                            out[(i,) + m] = c
                    h = {m: (c - low[m]) // x for m, c in h.items() if c != low[m]}
                    i += 1
                content = 0
                for c in out.values():
                    content = math.gcd(content, c)
                out = {m: c // content for m, c in out.items()}
                hp = _to_mpoly(out, order)
                if hp.divides(_to_mpoly(f, order)) and hp.divides(_to_mpoly(g, order)):
                    return out
        x = 73794 * x * math.isqrt(math.isqrt(x)) // 27011
    raise _HeuristicFailed


def _to_mpoly(d: dict, order: list[str]) -> MPoly:
    return MPoly({tuple((v, e) for v, e in sorted(zip(order, m)) if e): Fraction(c) for m, c in d.items()})


def _heuristic_gcd(f: MPoly, g: MPoly, order: list[str]) -> MPoly | None:
    """Candidate gcd by evaluation at large integers; None if the heuristic gives up."""
    try:
        return _to_mpoly(_heu(_int_dense(f, order), _int_dense(g, order), order), order)
    except _HeuristicFailed:
        return None


def gcd(f: MPoly, g: MPoly) -> MPoly:
    """Monic greatest common divisor of two polynomials."""
    if not f:
        return g.monic()
    if not g:
        return f.monic()
    if f.is_constant() or g.is_constant():
        return MPoly.const(1)
    if f == g:
        return f.monic()
    if len(f.terms) == 1 or len(g.terms) == 1:
        mono, other = (f, g) if len(f.terms) == 1 else (g, f)
        (m, _), = mono.terms.items()
        exps = dict(m)
        for t in other.terms:
            td = dict(t)
            exps = {v: min(e, td.get(v, 0)) for v, e in exps.items()}
            exps = {v: e for v, e in exps.items() if e}
            if not exps:
                return MPoly.const(1)
        return MPoly.monomial(tuple(sorted(exps.items())))
    mf, mg = _monomial_content(f), _monomial_content(g)
    if mf or mg:
        common = tuple(sorted((v, min(e, mg[v])) for v, e in mf.items() if v in mg))
        fr = f.divexact(MPoly.monomial(tuple(sorted(mf.items())))) if mf else f
        gr = g.divexact(MPoly.monomial(tuple(sorted(mg.items())))) if mg else g
        return gcd(fr, gr).mul_monomial(common)
    vf, vg = f.variables(), g.variables()
    only = vf - vg
    if only:
        v = max(only, key=var_key)
        return gcd(_content(f.as_univariate(v).values()), g)
    only = vg - vf
    if only:
        v = max(only, key=var_key)
        return gcd(f, _content(g.as_univariate(v).values()))
    allvars = sorted(vf, key=var_key)
    bounds = {}
    exact = True
    for w in allvars:
        bound = _degree_bound(f, g, w, [u for u in allvars if u != w])
        if bound == 0:
            coeffs = list(f.as_univariate(w).values()) + list(g.as_univariate(w).values())
            return _content(sorted(coeffs, key=lambda p: len(p.terms))).monic()
        if bound is None:
            exact = False
            bound = max(f.degree(w), g.degree(w))
        bounds[w] = bound
    if exact:
        # a common divisor meeting every degree bound is the gcd itself
        h = _heuristic_gcd(f, g, allvars)
        if h is not None and all(h.degree(w) == bounds[w] for w in allvars):
            return h.monic()
    v = min(vf, key=lambda w: (bounds[w], max(f.degree(w), g.degree(w)), var_key(w)))
    small, big = (g, f) if len(g.terms) <= len(f.terms) else (f, g)
    if bounds[v] == small.degree(v) and small.divides(big):
        return small.monic()
    F, G = f.as_univariate(v), g.as_univariate(v)
    cf, cg = _content(F.values()), _content(G.values())
    c = gcd(cf, cg)
    A = _dense({e: p.divexact(cf) for e, p in F.items()})
    B = _dense({e: p.divexact(cg) for e, p in G.items()})
    if len(A) < len(B):
        A, B = B, A
    H = _subresultant_gcd(A, B)
    if len(H) == 1:
        return c.monic()
    ch = _content(H)
    h = MPoly.from_univariate([p.divexact(ch) for p in H], v)
    return (c * h).monic()

"""Factorization over the rationals (Zassenhaus) and over number fields (Trager)."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .fields import QQ, NumberField
from .unipoly import UniPoly


@dataclass(frozen=True)
class Factorization:
    unit: object
    factors: tuple[tuple[UniPoly, int], ...]

    def expand(self) -> UniPoly:
        if not self.factors:
            raise ValueError("empty factorization")
        p = self.factors[0][0]._new((self.unit,))
        for f, e in self.factors:
            p = p * f ** e
        return p

    def irreducibles(self) -> list[UniPoly]:
        return [f for f, _ in self.factors]

    def __len__(self) -> int:
        return len(self.factors)


def _sort_key(p: UniPoly):
    return (p.degree, [str(c) for c in p.coeffs])


def factor(p: UniPoly) -> Factorization:
    """Complete factorization over the coefficient field of ``p``."""
    if not p:
        raise ValueError("cannot factor the zero polynomial")
    if p.field is QQ:
        return factor_q(p)
    if isinstance(p.field, NumberField):
        return factor_ext(p)
    raise TypeError(f"no factorization over {p.field!r}")


# modular arithmetic on int lists (low first) ---------------------------------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _mod(a, p):
    return _trim([c % p for c in a])


def _add(a, b, p):
    n = max(len(a), len(b))
    return _trim([((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % p for i in range(n)])


def _sub(a, b, p):
    n = max(len(a), len(b))
    return _trim([((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)])


def _mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _mod(out, p)


def _divmod(a, b, p):
    """Division modulo a prime ``p``."""
    a = list(a)
    inv = pow(b[-1], -1, p)
    db = len(b) - 1
    q = [0] * max(len(a) - db, 0)
    for k in range(len(a) - 1, db - 1, -1):
        c = a[k] % p
        if not c:
            continue
        c = c * inv % p
        q[k - db] = c
        for j, y in enumerate(b):
            a[k - db + j] = (a[k - db + j] - c * y) % p
    return _trim(q), _mod(a[:db], p)


def _monic(a, p):
    inv = pow(a[-1], -1, p)
    return [c * inv % p for c in a]


def _gcd(a, b, p):
    while b:
        a, b = b, _divmod(a, b, p)[1]
    return _monic(a, p) if a else a


def _xgcd(a, b, p):
    r0, r1, s0, s1, t0, t1 = a, b, [1], [], [], [1]
    while r1:
        q, r = _divmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, _sub(s0, _mul(q, s1, p), p)
        t0, t1 = t1, _sub(t0, _mul(q, t1, p), p)
    inv = pow(r0[-1], -1, p)
    return [c * inv % p for c in r0], [c * inv % p for c in s0], [c * inv % p for c in t0]


def _powmod(a, e, f, p):
    out, base = [1], _divmod(a, f, p)[1]
    while e:
        if e & 1:
            out = _divmod(_mul(out, base, p), f, p)[1]
        base = _divmod(_mul(base, base, p), f, p)[1]
        e >>= 1
    return out


def _deriv(a, p):
    return _mod([k * c for k, c in enumerate(a)][1:], p)


def _distinct_degree(f, p):
    out = []
    h = [0, 1]
    x = [0, 1]
    i = 1
    while len(f) - 1 >= 2 * i:
        h = _powmod(h, p, f, p)
        g = _gcd(_sub(h, x, p), f, p)
        if len(g) > 1:
            out.append((g, i))
            f = _divmod(f, g, p)[0]
            h = _divmod(h, f, p)[1]
        i += 1
    if len(f) > 1:
        out.append((f, len(f) - 1))
    return out


def _equal_degree(f, d, p, rng):
    if len(f) - 1 == d:
        return [_monic(f, p)]
    while True:
        a = [rng.randrange(p) for _ in range(len(f) - 1)]
        a = _trim(a)
        if len(a) < 2:
            continue
        b = _sub(_powmod(a, (p ** d - 1) // 2, f, p), [1], p)
        g = _gcd(b, f, p)
        if 1 < len(g) < len(f):
            return _equal_degree(g, d, p, rng) + _equal_degree(_divmod(f, g, p)[0], d, p, rng)


def _factor_mod_p(f, p, rng):
    out = []
    for g, d in _distinct_degree(_monic(f, p), p):
        out.extend(_equal_degree(g, d, p, rng))
    return out


# Hensel lifting ---------------------------------------------------------------------

def _sym(c, m):
    c %= m
    return c - m if c > m // 2 else c


def _hensel_pair(f, lc, A, B, p, k):
    """Lift ``f = lc*A*B mod p`` with monic coprime ``A, B`` to modulus ``p^k``."""
    _, s, t = _xgcd(A, B, p)
    lc_inv = pow(lc, -1, p)
    m = p
    for _ in range(1, k):
        prod = [lc * c for c in _int_mul(A, B)]
        err = [((f[i] if i < len(f) else 0) - (prod[i] if i < len(prod) else 0)) for i in range(max(len(f), len(prod)))]
        if any(c % m for c in err):
            raise ArithmeticError("Hensel invariant violated")
        e = _mod([(c // m) * lc_inv for c in err], p)
        q, a = _divmod(_mul(t, e, p), A, p)
        b = _add(_mul(s, e, p), _mul(q, B, p), p)
        A = _int_add(A, [c * m for c in a])
        B = _int_add(B, [c * m for c in b])
        m *= p
    return [c % m for c in A], [c % m for c in B]


def _int_mul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _int_add(a, b):
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]


def _hensel_multi(f, lc, factors, p, k):
    if len(factors) == 1:
        mod = p ** k
        inv = pow(lc, -1, mod)
        return [[c * inv % mod for c in f]]
    half = len(factors) // 2
    A, B = [1], [1]
    for g in factors[:half]:
        A = _mul(A, g, p)
    for g in factors[half:]:
        B = _mul(B, g, p)
    A_l, B_l = _hensel_pair(f, lc, A, B, p, k)
    return _hensel_multi(A_l, 1, factors[:half], p, k) + _hensel_multi(B_l, 1, factors[half:], p, k)


# Zassenhaus over Z ------------------------------------------------------------------

def _primitive_int(p: UniPoly) -> list[int]:
    den = 1
    for c in p.coeffs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(c * den) for c in p.coeffs]
    g = 0
    for c in ints:
        g = math.gcd(g, c)
    ints = [c // g for c in ints]
    if ints[-1] < 0:
        ints = [-c for c in ints]
    return ints


def _int_divides(f, g):
    """Exact division of integer polynomials, or None."""
    f = list(f)
    dg = len(g) - 1
    q = [0] * (len(f) - dg)
    for k in range(len(f) - 1, dg - 1, -1):
        if f[k] % g[-1]:
            return None
        c = f[k] // g[-1]
        q[k - dg] = c
        for j, y in enumerate(g):
            f[k - dg + j] -= c * y
    return q if not any(f[:dg]) else None


def _primes():
    n = 3
    while True:
        if all(n % d for d in range(3, int(n ** 0.5) + 1, 2)):
            yield n
        n += 2


def _zassenhaus(f: list[int]) -> list[list[int]]:
    """Irreducible factors over Z of a primitive squarefree ``f`` with positive leading coefficient."""
    n = len(f) - 1
    if n <= 1:
        return [f]
    lc = f[-1]
    for p in _primes():
        if lc % p == 0:
            continue
        fp = _mod(f, p)
        if len(_gcd(fp, _deriv(fp, p), p)) == 1:
            break
    rng = random.Random(p)
    modular = _factor_mod_p(fp, p, rng)
    if len(modular) == 1:
        return [f]
    bound = 2 * abs(lc) * (2 ** n) * math.isqrt(sum(c * c for c in f) + 1) + 2 * abs(lc)
    k = 1
    while p ** k <= bound:
        k += 1
    mod = p ** k
    lifted = _hensel_multi(f, lc, modular, p, k)
    out = []
    remaining = lifted
    size = 1
    while 2 * size <= len(remaining):
        found = False
        for combo in combinations(range(len(remaining)), size):
            cand = [lc]
            for i in combo:
                cand = _mul(cand, remaining[i], mod)
            cand = [_sym(c, mod) for c in cand]
            g = 0
            for c in cand:
                g = math.gcd(g, c)
            cand = [c // g for c in cand]
            q = _int_divides(f, cand)
            if q is None:
                continue
            if cand[-1] < 0:
                cand = [-c for c in cand]
            out.append(cand)
            f = q if q[-1] > 0 else [-c for c in q]
            lc = f[-1]
            remaining = [r for i, r in enumerate(remaining) if i not in combo]
            found = True
            break
        if not found:
            size += 1
    out.append(f)
    return out


def factor_q(p: UniPoly) -> Factorization:
    """Irreducible monic factors over the rationals, with multiplicities."""
    if p.field is not QQ:
        raise TypeError("factor_q expects a rational polynomial")
    if not p:
        raise ValueError("cannot factor the zero polynomial")
    unit = p.lc
    found: list[tuple[UniPoly, int]] = []
    for part, mult in p.squarefree_decomposition():
        ints = _primitive_int(part)
        for fac in _zassenhaus(ints):
            found.append((UniPoly(QQ, [Fraction(c) for c in fac], p.var).monic(), mult))
    found.sort(key=lambda fe: _sort_key(fe[0]))
    return Factorization(unit, tuple(found))


# Trager's norm method --------------------------------------------------------------

def _lift_to_bivariate(g: UniPoly):
    """Coefficients of ``g`` as polynomials in the generator over the base."""
    F = g.field
    return [c.poly for c in (F.coerce(x) for x in g.coeffs)]


def norm(g: UniPoly) -> UniPoly:
    """``Res_t(minpoly(t), g(x; t))``: the norm of ``g`` down to the base field."""
    F: NumberField = g.field
    base = F.base
    coeffs = _lift_to_bivariate(g)
    D = g.degree * F.n
    xs = [base.coerce(i) for i in range(D + 1)]
    values = []
    for x0 in xs:
        acc = UniPoly(base, (), F.gen_name)
        power = base.one
        for c in coeffs:
            acc = acc + c * power
            power = power * x0
        values.append(F.minpoly.resultant(acc))
    return _interpolate(base, xs, values, g.var)


def _interpolate(field, xs, ys, var):
    """Newton interpolation over ``field``."""
    n = len(xs)
    coef = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    poly = UniPoly(field, (coef[-1],), var)
    for i in range(n - 2, -1, -1):
        poly = poly * UniPoly(field, (-xs[i], field.one), var) + UniPoly(field, (coef[i],), var)
    return poly


def _shift(g: UniPoly, s) -> UniPoly:
    """``g(x - s)`` for a field element ``s``."""
    return g.compose(UniPoly(g.field, (-g.field.coerce(s), g.field.one), g.var))


def _factor_squarefree_ext(g: UniPoly) -> list[UniPoly]:
    F: NumberField = g.field
    if g.degree <= 1:
        return [g.monic()]
    alpha = F.gen
    for s in _shifts():
        gs = _shift(g, alpha * s)
        N = norm(gs)
        if N.is_squarefree():
            break
    out = []
    for Ni, _ in factor(N).factors:
        h = gs.gcd(Ni.change_field(F))
        if h.degree > 0:
            out.append(_shift(h, -(alpha * s)).monic())
    return out


def _shifts():
    yield 0
    k = 1
    while True:
        yield k
        yield -k
        k += 1


def factor_ext(p: UniPoly) -> Factorization:
    """Irreducible monic factors over a number field (recursive down the tower)."""
    if not isinstance(p.field, NumberField):
        raise TypeError("factor_ext expects a polynomial over a number field")
    if not p:
        raise ValueError("cannot factor the zero polynomial")
    found: list[tuple[UniPoly, int]] = []
    for part, mult in p.squarefree_decomposition():
        for fac in _factor_squarefree_ext(part):
            found.append((fac, mult))
    found.sort(key=lambda fe: _sort_key(fe[0]))
    fact = Factorization(p.lc, tuple(found))
    if fact.expand() != p:
        raise ArithmeticError("factor product check failed")
    return fact

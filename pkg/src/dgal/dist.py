"""Distributions on jet space and the constants of their bar-extensions.

A distribution is a finite list of vector fields; everything "generic" is
decided over the fraction field, so ranks and span memberships hold away from
the zero set of an explicit certificate.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Iterable, Mapping, Sequence

from .exactalg import MPoly, RatFunc, RankResult, gcd, generic_rank, rref, solve_linear, var_key
from .fieldops import VectorField, bracket_vf
from .jets import jet_order, parse_expr, total_derivative


@dataclass(frozen=True)
class Distribution:
    generators: tuple[VectorField, ...]
    label: str = "other"

    def __post_init__(self):
        gens = tuple(self.generators)
        if not gens:
            raise ValueError("a distribution needs at least one generator")
        object.__setattr__(self, "generators", gens)

    @classmethod
    def of(cls, *fields: VectorField | Mapping[str, str], label: str = "other") -> "Distribution":
        return cls(tuple(f if isinstance(f, VectorField) else VectorField(f) for f in fields), label)

    def __iter__(self):
        return iter(self.generators)

    def __len__(self) -> int:
        return len(self.generators)

    def __getitem__(self, i: int) -> VectorField:
        return self.generators[i]

    def support(self) -> list[str]:
        out: set[str] = set()
        for g in self.generators:
            out.update(g.support())
        return sorted(out, key=var_key)

    def variables(self) -> list[str]:
        out = set(self.support())
        for g in self.generators:
            for c in g.coefficients.values():
                out |= c.variables()
        return sorted(out, key=var_key)

    def matrix(self, columns: Sequence[str] | None = None) -> list[list[RatFunc]]:
        cols = self.support() if columns is None else list(columns)
        return [[g.coefficient(v) for v in cols] for g in self.generators]

    def rank(self) -> RankResult:
        return generic_rank(self.matrix())

    def to_json(self) -> dict:
        return {"label": self.label, "generators": [g.to_json() for g in self.generators]}

    @classmethod
    def from_json(cls, data: Mapping) -> "Distribution":
        return cls(tuple(VectorField.from_json(g) for g in data["generators"]), data.get("label", "other"))


# commutation and involutivity ---------------------------------------------------

def commutes(T: Distribution, D: Distribution) -> list[VectorField]:
    """All brackets ``[t, d]`` in row-major order."""
    return [bracket_vf(t, d) for t in T for d in D]


@dataclass(frozen=True)
class InvolutivityResult:
    involutive: bool
    witness: VectorField | None = None
    pair: tuple[int, int] | None = None

    def __bool__(self) -> bool:
        return self.involutive


def in_generic_span(D: Distribution, field: VectorField) -> bool:
    """Whether ``field`` is a combination of the generators over the fraction field."""
    cols = sorted(set(D.support()) | set(field.support()), key=var_key)
    base = generic_rank(D.matrix(cols)).rank
    return generic_rank(D.matrix(cols) + [[field.coefficient(v) for v in cols]]).rank == base


def is_involutive_frobenius(D: Distribution) -> InvolutivityResult:
    for i in range(len(D)):
        for j in range(i + 1, len(D)):
            b = bracket_vf(D[i], D[j])
            if b and not in_generic_span(D, b):
                return InvolutivityResult(False, b, (i, j))
    return InvolutivityResult(True)


# linear systems over Q from rational-function identities ---------------------

def _coefficient_equations(combination: Sequence[RatFunc]) -> list[list[Fraction]]:
    """Rows over Q expressing ``sum_j c_j f_j = 0`` as a polynomial identity."""
    den = MPoly.const(1)
    for f in combination:
        if f:
            den = den * f.den.divexact(gcd(den, f.den))
    rows: dict[tuple, list[Fraction]] = {}
    for j, f in enumerate(combination):
        if not f:
            continue
        scaled = f.num * den.divexact(f.den)
        for mono, c in scaled.terms.items():
            rows.setdefault(mono, [Fraction(0)] * len(combination))[j] += c
    return list(rows.values())


def _rational_nullspace(columns: Sequence[Sequence[RatFunc]]) -> list[tuple[Fraction, ...]]:
    """Null space over Q of ``c -> sum_j c_j columns[j]`` for vector-valued columns."""
    n = len(columns)
    if n == 0:
        return []
    rows: list[list[Fraction]] = []
    for comp in range(len(columns[0])):
        rows.extend(_coefficient_equations([col[comp] for col in columns]))
    if not rows:
        return [tuple(Fraction(int(i == j)) for i in range(n)) for j in range(n)]
    reduced, piv = rref(rows)
    reduced = reduced[: len(piv)]
    basis = []
    pivset = set(piv)
    for free in range(n):
        if free in pivset:
            continue
        v = [Fraction(0)] * n
        v[free] = Fraction(1)
        for row, pc in zip(reduced, piv):
            v[pc] = -row[free]
        basis.append(tuple(v))
    return basis


def _canonical_basis(vectors: list[tuple[Fraction, ...]]) -> list[tuple[Fraction, ...]]:
    if not vectors:
        return []
    reduced, piv = rref([list(v) for v in vectors])
    return [tuple(r) for r in reduced[: len(piv)]]


# commutant search ------------------------------------------------------------

def _monomials(variables: Sequence[str], degree: int) -> list[RatFunc]:
    out = []
    for d in range(degree + 1):
        for combo in combinations_with_replacement(variables, d):
            m = RatFunc.const(1)
            for v in combo:
                m = m * RatFunc.var(v)
            out.append(m)
    return out


def default_support(T: Distribution) -> list[str]:
    """Unbarred dependent jets of order at least one occurring in ``T``."""
    return [v for v in T.variables() if v.startswith("y") and jet_order(v) >= 1]


def commutant_search(
    T: Distribution,
    support: Sequence[str] | None = None,
    coefficient_vars: Sequence[str] | None = None,
    degree: int = 2,
) -> list[VectorField]:
    """Basis over Q of the fields with polynomial coefficients of degree at most
    ``degree`` on ``support`` that commute with every generator of ``T``.

    The default support leaves out the order-0 dependent variables, so every
    field found kills ``y``. An empty list means the ansatz is too small.
    """
    support = default_support(T) if support is None else list(support)
    coeff_vars = T.variables() if coefficient_vars is None else list(coefficient_vars)
    monos = _monomials(sorted(coeff_vars, key=var_key), degree)
    candidates = [VectorField({v: m}) for v in sorted(support, key=var_key, reverse=True) for m in reversed(monos)]
    if not candidates:
        return []
    columns = []
    names: list[tuple[int, str]] = []
    brackets = [[bracket_vf(t, c) for t in T] for c in candidates]
    for ti in range(len(T)):
        vs: set[str] = set()
        for b in brackets:
            vs.update(b[ti].support())
        for v in sorted(vs, key=var_key):
            names.append((ti, v))
    for b in brackets:
        columns.append([b[ti].coefficient(v) for ti, v in names])
    basis = _canonical_basis(_rational_nullspace(columns))
    out = []
    for vec in basis:
        field = VectorField()
        for c, cand in zip(vec, candidates):
            if c:
                field = field + cand.scale(RatFunc.const(c))
        if any(commutes(T, Distribution((field,)))):
            raise AssertionError("commutant basis element failed re-verification")
        out.append(field)
    return out


# invariants --------------------------------------------------------------------

@dataclass(frozen=True)
class InvarianceResult:
    invariant: bool
    residuals: tuple[RatFunc, ...]

    def __bool__(self) -> bool:
        return self.invariant


def is_invariant(T: Distribution, phi) -> InvarianceResult:
    phi = _expr(phi)
    res = tuple(t(phi) for t in T)
    return InvarianceResult(not any(res), res)


def derived_invariant(phi, i: int, T_next: Distribution) -> tuple[RatFunc, InvarianceResult]:
    """``d_i phi`` together with its invariance verdict one order higher."""
    d = total_derivative(_expr(phi), i)
    return d, is_invariant(T_next, d)


@dataclass(frozen=True)
class StabilityEntry:
    field: int
    generator: int
    value: RatFunc
    coefficients: tuple[Fraction, ...] | None  # constant term first, then one per generator

    @property
    def in_span(self) -> bool:
        return self.coefficients is not None


def span_coefficients(value: RatFunc, generators: Sequence[RatFunc]) -> tuple[Fraction, ...] | None:
    """Rationals ``c`` with ``value = c_0 + sum c_j g_j``, or None."""
    funcs = [RatFunc.const(1)] + [_expr(g) for g in generators]
    rows = _coefficient_equations(funcs + [value])
    if not rows:
        return tuple(Fraction(0) for _ in funcs)
    M = [row[:-1] for row in rows]
    b = [row[-1] for row in rows]
    sol = solve_linear(M, b, Fraction(0), Fraction(1))
    if not sol.consistent:
        return None
    return tuple(sol.particular)


def stability_check(D: Distribution, generators: Sequence) -> list[StabilityEntry]:
    """Apply every field to every generator and express the result over Q in
    the span of ``1`` and the generators when possible."""
    gens = [_expr(g) for g in generators]
    out = []
    for fi, field in enumerate(D):
        for gi, g in enumerate(gens):
            value = field(g)
            out.append(StabilityEntry(fi, gi, value, span_coefficients(value, gens)))
    return out


# freeness --------------------------------------------------------------------

@dataclass(frozen=True)
class FreenessReport:
    rank: int
    required_parametric_count: int
    degeneracy_certificate: RatFunc | None
    minor: RatFunc | None
    columns: tuple[str, ...]

    @property
    def free(self) -> bool:
        return self.rank == self.required_parametric_count

    @property
    def verdict(self) -> str:
        return "free" if self.free else "not-free"


def squarefree_part(p: MPoly) -> MPoly:
    """Product of the distinct irreducible factors of ``p``, made monic."""
    if p.is_constant():
        return MPoly.const(1) if p else p
    g = p
    for v in sorted(p.variables(), key=var_key):
        g = gcd(g, p.diff(v))
        if g.is_constant():
            break
    return p.divexact(g).monic()


def freeness_probe(T: Distribution, parametric_count: int, columns: Sequence[str] | None = None) -> FreenessReport:
    """Generic rank of the coefficient matrix; the certificate is the reduced
    numerator of a maximal nonzero minor, whose zero set contains the locus
    where the rank drops."""
    cols = T.support() if columns is None else list(columns)
    r = generic_rank(T.matrix(cols))
    cert = None
    if r.certificate is not None:
        cert = RatFunc.poly(squarefree_part(r.certificate.num))
    return FreenessReport(r.rank, parametric_count, cert, r.certificate, tuple(cols))


def symbol_distribution(invariants: Sequence, top_vars: Sequence[str], label: str = "symbol") -> Distribution:
    """Fields ``sum_v dPhi/dv d/dv`` over the top-order jets, one per invariant.

    Their generic rank equals the rank of the top-order Jacobian of the
    invariants, so the symbol of the system ``Phi = const`` vanishes exactly
    where this distribution is free.
    """
    gens = []
    for phi in invariants:
        phi = _expr(phi)
        gens.append(VectorField({v: phi.diff(v) for v in top_vars}))
    return Distribution(tuple(gens), label)


# tensor constants ---------------------------------------------------------------

_BARRABLE = re.compile(r"^(b*)([ya]\d(?:_\d+)?)$")


def bar_name(v: str) -> str:
    """Barred copy of a dependent jet or parameter; other variables are shared."""
    return "b" + v if _BARRABLE.match(v) else v


def bar(f: RatFunc) -> RatFunc:
    return f.rename({v: bar_name(v) for v in f.variables()})


def bar_extend(delta: VectorField) -> VectorField:
    """``delta`` plus its copy acting on the barred variables."""
    coeffs = delta.coefficients
    for v in coeffs:
        if v.startswith("b"):
            raise ValueError("bar_extend expects a field without barred components")
    out = dict(coeffs)
    for v, c in coeffs.items():
        w = bar_name(v)
        if w != v:
            out[w] = bar(c)
    return VectorField(out)


def bar_extend_all(D: Distribution) -> Distribution:
    return Distribution(tuple(bar_extend(d) for d in D), D.label)


Relation = tuple[str, RatFunc]


def apply_relations(f: RatFunc, relations: Iterable[Relation], max_rounds: int = 16) -> RatFunc:
    """Substitute directed relations ``v -> expr`` until nothing changes."""
    rel = [(v, _expr(e)) for v, e in relations]
    for _ in range(max_rounds):
        here = f.variables()
        active = {v: e for v, e in rel if v in here}
        if not active:
            return f
        f = f.subs(active)
    raise ValueError("relations did not reach a fixed point")


@dataclass(frozen=True)
class TensorConstantResult:
    constant: bool
    residuals: tuple[RatFunc, ...]

    def __bool__(self) -> bool:
        return self.constant


def is_tensor_constant(e, D: Distribution, relations: Iterable[Relation] = ()) -> TensorConstantResult:
    """Whether every field of ``D`` kills ``e`` once the relations are applied."""
    e = _expr(e)
    rel = list(relations)
    res = tuple(apply_relations(d(e), rel) for d in D)
    return TensorConstantResult(not any(res), res)


def relations_from_json(data: Mapping) -> list[Relation]:
    return [(r["solve_for"], parse_expr(r["equals"])) for r in data["relations"]]


# commutation of vertical fields with total derivatives -------------------------

_JET = re.compile(r"^y(\d)(?:_(\d+))?$")


def total_derivative_commutator_residual(W: VectorField, phi, i: int = 1) -> RatFunc:
    """``W(d_i phi) - d_i(W phi) + sum (d_i a^k_mu - a^k_{mu+1_i}) dphi/dy^k_mu``.

    ``W`` is a vertical field ``sum a^k_nu d/dy^k_nu``; the sum runs over the
    jets ``phi`` depends on. The residual is zero for every such ``W``.
    """
    phi = _expr(phi)
    for v in W.support():
        if not _JET.match(v):
            raise ValueError(f"vertical field expected, got a component along {v}")
    lhs = W(total_derivative(phi, i))
    rhs = total_derivative(W(phi), i)
    for v in phi.variables():
        mt = _JET.match(v)
        if mt is None:
            continue
        k, dirs = mt.group(1), mt.group(2) or ""
        up = f"y{k}_{''.join(sorted(dirs + str(i)))}"
        rhs = rhs - (total_derivative(W.coefficient(v), i) - W.coefficient(up)) * phi.diff(v)
    return lhs - rhs


def _expr(x) -> RatFunc:
    return parse_expr(x) if isinstance(x, str) else RatFunc._coerce(x)

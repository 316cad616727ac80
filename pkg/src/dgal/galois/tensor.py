"""Splitting of ``L (x)_K L``, isolated isomorphisms, discriminants, CRT
decompositions and linear disjointness."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ..exactalg import nullspace
from .factor import factor
from .fields import QQ, NFElem, NumberField
from .unipoly import UniPoly


@dataclass(frozen=True)
class IsolatedIsomorphism:
    """The ``base``-algebra map ``L -> L`` sending the generator to ``image``."""

    field: NumberField
    image: NFElem

    def __call__(self, x) -> NFElem:
        x = self.field.coerce(x)
        return x.poly.map_coeffs(self.field.coerce, self.field)(self.image)

    def compose(self, other: "IsolatedIsomorphism") -> "IsolatedIsomorphism":
        """``self o other``."""
        return IsolatedIsomorphism(self.field, self(other.image))

    def __pow__(self, n: int) -> "IsolatedIsomorphism":
        out = IsolatedIsomorphism(self.field, self.field.gen)
        for _ in range(n):
            out = self.compose(out)
        return out

    def is_identity(self) -> bool:
        return self.image == self.field.gen

    def order(self, bound: int = 64) -> int:
        g = self
        for k in range(1, bound + 1):
            if g.is_identity():
                return k
            g = self.compose(g)
        raise ArithmeticError("order exceeds bound")

    def __str__(self) -> str:
        return f"{self.field.gen_name} -> {self.image}"


@dataclass(frozen=True)
class SplitResult:
    field: NumberField
    factors: tuple[UniPoly, ...]
    roots_in_L: tuple[NFElem, ...]
    isolated_isomorphisms: tuple[IsolatedIsomorphism, ...]

    @property
    def conjugate_classes(self) -> tuple[UniPoly, ...]:
        return tuple(f for f in self.factors if f.degree > 1)

    def component_degrees(self) -> list[int]:
        return [f.degree for f in self.factors]

    def is_galois(self) -> bool:
        return all(f.degree == 1 for f in self.factors)

    def product(self) -> UniPoly:
        out = UniPoly(self.field, (self.field.one,), self.factors[0].var)
        for f in self.factors:
            out = out * f
        return out


def split_tensor(L: NumberField, var: str = "ybar") -> SplitResult:
    """Factor ``P(ybar)`` over ``L = K[y]/(P)``; the first factor is ``ybar - y``."""
    P = L.minpoly
    Pbar = P.change_field(L).with_var(var)
    gen_factor = UniPoly(L, (-L.gen, L.one), var)
    if Pbar % gen_factor:
        raise ArithmeticError("ybar - y does not divide Pbar - P")
    fac = factor(Pbar)
    if any(mult != 1 for _, mult in fac.factors):
        raise ArithmeticError("tensor product is not reduced")
    found = [f for f, _ in fac.factors]
    found.remove(gen_factor)
    linear = [f for f in found if f.degree == 1]
    rest = [f for f in found if f.degree > 1]
    factors = (gen_factor, *linear, *rest)
    if sum(f.degree for f in factors) != P.degree:
        raise ArithmeticError("degree bookkeeping failed")
    roots = tuple(-f[0] for f in factors if f.degree == 1)
    isos = tuple(IsolatedIsomorphism(L, r) for r in roots)
    result = SplitResult(L, factors, roots, isos)
    if result.product() != Pbar:
        raise ArithmeticError("factor product check failed")
    return result


def is_galois(L: NumberField) -> bool:
    return split_tensor(L).is_galois()


def cubic_discriminant(w1, w2, w3) -> Fraction:
    """Discriminant of ``y^3 - w1 y^2 + w2 y - w3`` from the closed formula."""
    w1, w2, w3 = Fraction(w1), Fraction(w2), Fraction(w3)
    return -27 * w3 ** 2 + 18 * w1 * w2 * w3 - 4 * w2 ** 3 - 4 * w1 ** 3 * w3 + (w1 * w2) ** 2


def cubic_discriminant_resultant(w1, w2, w3) -> Fraction:
    """The same discriminant as ``-Res(P, P')``; the sign is fixed by degree 3 and a monic ``P``."""
    P = UniPoly(QQ, (-Fraction(w3), Fraction(w2), -Fraction(w1), 1))
    return -P.resultant(P.derivative())


# Chinese remainder decomposition ------------------------------------------------

def bezout(a: UniPoly, b: UniPoly) -> tuple[UniPoly, UniPoly]:
    """``(u, v)`` with ``u*a + v*b = 1``, ``deg u < deg b`` and ``deg v < deg a``."""
    g, u, v = a.xgcd(b)
    if g.degree != 0:
        raise ValueError(f"{a} and {b} are not coprime")
    return u, v


@dataclass(frozen=True)
class CRTComponent:
    modulus: UniPoly
    idempotent: UniPoly


def crt_decomposition(P: UniPoly) -> list[CRTComponent]:
    """Orthogonal idempotents of ``F[y]/(P)`` for squarefree ``P``, one per irreducible factor."""
    fac = factor(P)
    if any(m != 1 for _, m in fac.factors):
        raise ValueError("CRT decomposition needs a squarefree polynomial")
    P = P.monic()
    out = []
    for Pi, _ in fac.factors:
        Qi = P.exact_div(Pi)
        _, inv = bezout(Pi, Qi)
        out.append(CRTComponent(Pi, (inv * Qi) % P))
    return out


def crt_reconstruct(P: UniPoly, components: Sequence[CRTComponent], residues: Sequence[UniPoly]) -> UniPoly:
    acc = UniPoly(P.field, (), P.var)
    for comp, r in zip(components, residues):
        acc = acc + comp.idempotent * r
    return acc % P


# linear disjointness -------------------------------------------------------------

@dataclass(frozen=True)
class DisjointnessResult:
    independent: bool
    relation: tuple[tuple[Fraction, ...], ...] | None
    nullspace: tuple[tuple[Fraction, ...], ...]

    def relation_terms(self) -> list[tuple[int, int, Fraction]]:
        """Nonzero ``(i, j, c)`` of the first relation: ``sum c * a_i * b_j = 0``."""
        if self.relation is None:
            return []
        return [(i, j, c) for i, row in enumerate(self.relation) for j, c in enumerate(row) if c]


def linear_disjointness_probe(basis_a: Sequence, basis_b: Sequence, ambient: NumberField) -> DisjointnessResult:
    """Decide whether the products ``a_i * b_j`` are linearly independent over the rationals."""
    A = [ambient.coerce(a) for a in basis_a]
    B = [ambient.coerce(b) for b in basis_b]
    columns = [ambient.flatten(a * b) for a in A for b in B]
    if not columns:
        return DisjointnessResult(True, None, ())
    matrix = [[col[r] for col in columns] for r in range(len(columns[0]))]
    kernel = nullspace(matrix, Fraction(0), Fraction(1))
    shaped = []
    for vec in kernel:
        shaped.append(tuple(tuple(vec[i * len(B) + j] for j in range(len(B))) for i in range(len(A))))
    for rel in shaped:
        total = ambient.zero
        for i, row in enumerate(rel):
            for j, c in enumerate(row):
                total = total + A[i] * B[j] * c
        if total:
            raise AssertionError("relation failed re-verification")
    return DisjointnessResult(not shaped, shaped[0] if shaped else None, tuple(tuple(v) for v in kernel))


def relation_holds(relation: Sequence[tuple[int, int, object]], basis_a, basis_b, ambient: NumberField) -> bool:
    """Evaluate ``sum c * a_i * b_j`` for a hand-written relation."""
    total = ambient.zero
    for i, j, c in relation:
        total = total + ambient.coerce(basis_a[i]) * ambient.coerce(basis_b[j]) * c
    return not total


__all__ = [
    "CRTComponent",
    "DisjointnessResult",
    "IsolatedIsomorphism",
    "SplitResult",
    "bezout",
    "crt_decomposition",
    "crt_reconstruct",
    "cubic_discriminant",
    "cubic_discriminant_resultant",
    "is_galois",
    "linear_disjointness_probe",
    "relation_holds",
    "split_tensor",
]

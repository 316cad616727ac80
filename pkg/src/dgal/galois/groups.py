"""Finite groups of rational maps ``y -> g(y)`` and their generating invariants."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .fields import FractionField, URat
from .unipoly import UniPoly


class NotAGroup(ValueError):
    def __init__(self, message: str, pair: tuple[int, int] | None = None):
        super().__init__(message)
        self.pair = pair


@dataclass(frozen=True)
class FiniteRationalGroup:
    field: FractionField
    elements: tuple[URat, ...]

    @classmethod
    def of(cls, field: FractionField, maps: Sequence) -> "FiniteRationalGroup":
        return cls(field, tuple(field.coerce(m) for m in maps))

    def __len__(self) -> int:
        return len(self.elements)

    def index(self, g: URat) -> int | None:
        for k, h in enumerate(self.elements):
            if h == g:
                return k
        return None


@dataclass(frozen=True)
class GroupVerdict:
    order: int
    table: tuple[tuple[int, ...], ...]
    identity: int
    inverses: tuple[int, ...]

    @property
    def abelian(self) -> bool:
        n = self.order
        return all(self.table[i][j] == self.table[j][i] for i in range(n) for j in range(n))

    def element_order(self, k: int) -> int:
        g, n = k, 1
        while g != self.identity:
            g = self.table[k][g]
            n += 1
        return n

    @property
    def cyclic(self) -> bool:
        return any(self.element_order(k) == self.order for k in range(self.order))


def verify_group(G: FiniteRationalGroup) -> GroupVerdict:
    """Cayley table under composition; ``table[i][j]`` is the index of ``g_i o g_j``."""
    y = G.field.gen
    if len(set(G.elements)) != len(G.elements):
        raise NotAGroup("repeated element")
    table = []
    for i, g in enumerate(G.elements):
        row = []
        for j, h in enumerate(G.elements):
            k = G.index(g.compose(h))
            if k is None:
                raise NotAGroup(f"composition of elements {i} and {j} leaves the set", (i, j))
            row.append(k)
        table.append(tuple(row))
    ident = G.index(y)
    if ident is None:
        raise NotAGroup("identity map missing")
    inverses = []
    for i in range(len(G)):
        inv = [j for j in range(len(G)) if table[i][j] == ident and table[j][i] == ident]
        if not inv:
            raise NotAGroup(f"element {i} has no inverse", (i, i))
        inverses.append(inv[0])
    return GroupVerdict(len(G), tuple(table), ident, tuple(inverses))


@dataclass(frozen=True)
class InvariantCheck:
    invariant: bool
    failing: tuple[int, ...]
    numerator: UniPoly
    unit: URat
    orbit_product: UniPoly
    factors_match: bool

    @property
    def passed(self) -> bool:
        return self.invariant and self.factors_match


def difference_numerator(phi: URat, var: str = "ybar") -> UniPoly:
    """Numerator of ``phi(ybar) - phi(y)`` as a polynomial in ``ybar`` over ``F(y)``."""
    F = phi.field
    n, d = phi.num, phi.den
    size = max(len(n), len(d))
    coeffs = [F.coerce(d) * n[k] - F.coerce(n) * d[k] for k in range(size)]
    return UniPoly(F, coeffs, var)


def generating_invariant_check(G: FiniteRationalGroup, phi: URat, var: str = "ybar") -> InvariantCheck:
    F = G.field
    phi = F.coerce(phi)
    failing = tuple(k for k, g in enumerate(G.elements) if phi.compose(g) != phi)
    num = difference_numerator(phi, var)
    orbit = UniPoly(F, (F.one,), var)
    for g in G.elements:
        orbit = orbit * UniPoly(F, (-g, F.one), var)
    unit = num.lc
    return InvariantCheck(not failing, failing, num, unit, orbit, num.monic() == orbit)


__all__ = [
    "FiniteRationalGroup",
    "GroupVerdict",
    "InvariantCheck",
    "NotAGroup",
    "difference_numerator",
    "generating_invariant_check",
    "verify_group",
]

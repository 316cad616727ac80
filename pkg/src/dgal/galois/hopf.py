"""Diagonal, augmentation and antipode comorphisms of a groupoid parameter.

A parameter is a tuple of rational functions in a doubled universe: plain
variables (``y1``, ``a2``) and their barred copies (``by1``, ``ba2``). The
group law is a callable ``law(b, a)`` returning the composite parameter.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from ..exactalg import RatFunc

Law = Callable[[Sequence[RatFunc], Sequence[RatFunc]], Sequence[RatFunc]]


class NotExpressible(ValueError):
    """The diagonal image is not the group law applied to middle-inserted parameters."""


@dataclass(frozen=True)
class HopfReport:
    parameter: tuple[RatFunc, ...]
    diagonal: tuple[RatFunc, ...]
    augmentation: tuple[RatFunc, ...]
    antipode: tuple[RatFunc, ...]
    coassociative: bool
    counit: bool
    antipode_law: bool

    @property
    def axioms_hold(self) -> bool:
        return self.coassociative and self.counit and self.antipode_law


def _base_names(params: Sequence[RatFunc]) -> list[str]:
    names = set()
    for p in params:
        names |= {v.removeprefix("b") for v in p.variables()}
    return sorted(names)


def _shift(params: Sequence[RatFunc], base: Sequence[str], lo: int, hi: int) -> tuple[RatFunc, ...]:
    """Move plain variables to ``lo`` bars and barred ones to ``hi`` bars (simultaneously)."""
    mapping = {}
    for n in base:
        mapping[n] = "b" * lo + n
        mapping["b" + n] = "b" * hi + n
    return tuple(p.rename(mapping) for p in params)


def hopf_comorphisms(params: Sequence[RatFunc], law: Law, base_names: Sequence[str] | None = None) -> HopfReport:
    params = tuple(params)
    base = list(base_names) if base_names is not None else _base_names(params)
    a = params
    b = _shift(params, base, 1, 2)
    diagonal = _shift(params, base, 0, 2)
    composite = tuple(law(b, a))
    if composite != diagonal:
        raise NotExpressible("diagonal image differs from the composite of middle-inserted parameters")
    augmentation = _shift(params, base, 0, 0)
    if not all(e.is_constant() for e in augmentation):
        raise NotExpressible("augmentation image is not constant")
    antipode = _shift(params, base, 1, 0)

    # coassociativity on the instance, in the quadrupled universe
    c = _shift(params, base, 2, 3)
    coassoc = tuple(law(law(c, b), a)) == tuple(law(c, law(b, a))) == _shift(params, base, 0, 3)

    # counit and antipode laws with a free parameter
    free = tuple(RatFunc.var(f"s{k + 1}") for k in range(len(params)))
    counit = tuple(law(augmentation, free)) == free == tuple(law(free, augmentation))
    anti = tuple(law(antipode, a)) == augmentation == tuple(law(a, antipode))
    return HopfReport(params, diagonal, augmentation, antipode, coassoc, counit, anti)


def multiplicative_law(b, a):
    return (b[0] * a[0],)


def affine_law(b, a):
    return (b[0] * a[0], b[0] * a[1] + b[1])


__all__ = ["HopfReport", "NotExpressible", "affine_law", "hopf_comorphisms", "multiplicative_law"]

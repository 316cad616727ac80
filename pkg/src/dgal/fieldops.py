"""Vector fields on jet space and the calculus of jet sections.

Sections of ``J_q(T)`` are stored as complete mappings ``(k, dirs) -> RatFunc``
where ``k`` runs over the base dimension and ``dirs`` is a sorted direction
string of length at most ``q``. A section lives either over the source (its
coefficients depend on ``x1..xn``) or over the target (coefficients depend on
``y1..ym``); the calculus below is the same in both cases, only the names of
the base coordinates change.

Brackets and prolongations that involve derivatives of the unknown vector
field are expanded on formal symbols first and only then specialised to the
given section components. This keeps every combinatorial coefficient a product
of the chain and Leibniz rules.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Mapping

from .exactalg import RatFunc, derive, var_key
from .jets import (
    add_dir,
    composite_jets,
    jet_name,
    jet_order,
    multi_indices,
    multi_indices_upto,
    parse_expr,
    total_derivative,
)

SOURCE = "source"
TARGET = "target"


# vector fields ---------------------------------------------------------------------

class VectorField:
    """A derivation ``sum_v c_v d/dv`` with rational-function coefficients."""

    __slots__ = ("_c",)

    def __init__(self, coefficients: Mapping[str, object] | None = None):
        c = {}
        for v, e in (coefficients or {}).items():
            e = parse_expr(e) if isinstance(e, str) else RatFunc._coerce(e)
            if e:
                c[v] = e
        self._c = c

    @property
    def coefficients(self) -> dict[str, RatFunc]:
        return dict(self._c)

    def coefficient(self, v: str) -> RatFunc:
        return self._c.get(v, RatFunc())

    def support(self) -> list[str]:
        return sorted(self._c, key=var_key)

    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self) -> bool:
        return bool(self._c)

    def __call__(self, f) -> RatFunc:
        f = RatFunc._coerce(f)
        return derive(f, self._c.get)

    apply = __call__

    def __add__(self, other: "VectorField") -> "VectorField":
        out = dict(self._c)
        for v, e in other._c.items():
            out[v] = out.get(v, RatFunc()) + e
        return VectorField(out)

    def __neg__(self) -> "VectorField":
        return VectorField({v: -e for v, e in self._c.items()})

    def __sub__(self, other: "VectorField") -> "VectorField":
        return self + (-other)

    def scale(self, f) -> "VectorField":
        f = RatFunc._coerce(f)
        return VectorField({v: e * f for v, e in self._c.items()})

    def __mul__(self, f) -> "VectorField":
        return self.scale(f)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, VectorField) and self._c == other._c

    def __hash__(self) -> int:
        return hash(frozenset(self._c.items()))

    def rename(self, mapping: Mapping[str, str]) -> "VectorField":
        return VectorField({mapping.get(v, v): e.rename(mapping) for v, e in self._c.items()})

    def __str__(self) -> str:
        if not self._c:
            return "0"
        out = ""
        for v in sorted(self._c, key=var_key, reverse=True):
            e = self._c[v]
            term = f"d/d{v}" if e == 1 else f"{e}*d/d{v}"
            if term.startswith("-"):
                out += (" - " if out else "-") + ("d/d" + v if e == -1 else term[1:])
            else:
                out += (" + " if out else "") + term
        return out

    def __repr__(self) -> str:
        return f"VectorField({str(self)!r})"

    def to_json(self) -> dict:
        return {"coefficients": {v: str(self._c[v]) for v in self.support()}}

    @classmethod
    def from_json(cls, data: Mapping) -> "VectorField":
        return cls({k: parse_expr(v) for k, v in data["coefficients"].items()})


def bracket_vf(A: VectorField, B: VectorField) -> VectorField:
    """Lie bracket computed coefficient-wise: ``A(b_v) - B(a_v)``."""
    out: dict[str, RatFunc] = {}
    for v in set(A._c) | set(B._c):
        out[v] = A(B.coefficient(v)) - B(A.coefficient(v))
    return VectorField(out)


# sections ------------------------------------------------------------------------

def base_coords(over: str, dim: int) -> list[str]:
    letter = "x" if over == SOURCE else "y"
    return [f"{letter}{i}" for i in range(1, dim + 1)]


@dataclass(frozen=True)
class JetSection:
    """Complete section of ``J_q(T)`` over a base of dimension ``dim``."""

    components: Mapping[tuple[int, str], RatFunc]
    q: int
    over: str = SOURCE
    dim: int = 1

    def __post_init__(self):
        comps = {}
        for (k, dirs), v in self.components.items():
            dirs = "".join(sorted(dirs))
            if not 1 <= k <= self.dim or len(dirs) > self.q or any(not 1 <= int(c) <= self.dim for c in dirs):
                raise ValueError(f"component ({k}, {dirs!r}) outside the section shape")
            comps[(k, dirs)] = parse_expr(v) if isinstance(v, str) else RatFunc._coerce(v)
        for key in self.keys():
            comps.setdefault(key, RatFunc())
        if self.over not in (SOURCE, TARGET):
            raise ValueError("over must be 'source' or 'target'")
        object.__setattr__(self, "components", comps)

    @classmethod
    def from_values(cls, values: Mapping, q: int, over: str = SOURCE, dim: int = 1) -> "JetSection":
        """Build a section, filling unspecified components with zero."""
        return cls(dict(values), q, over, dim)

    @classmethod
    def jet_of(cls, field: Iterable, q: int, over: str = SOURCE) -> "JetSection":
        """Holonomic section ``j_q`` of a vector field given by its components."""
        comps = [RatFunc._coerce(parse_expr(c) if isinstance(c, str) else c) for c in field]
        dim = len(comps)
        coords = base_coords(over, dim)
        out = {}
        for dirs in multi_indices_upto(dim, q):
            for k in range(1, dim + 1):
                f = comps[k - 1]
                for ch in dirs:
                    f = f.diff(coords[int(ch) - 1])
                out[(k, dirs)] = f
        return cls(out, q, over, dim)

    def keys(self) -> list[tuple[int, str]]:
        return [(k, d) for d in multi_indices_upto(self.dim, self.q) for k in range(1, self.dim + 1)]

    def __getitem__(self, key) -> RatFunc:
        k, dirs = key
        return self.components[(k, "".join(sorted(dirs)))]

    @property
    def coords(self) -> list[str]:
        return base_coords(self.over, self.dim)

    def truncate(self, q: int) -> "JetSection":
        return JetSection({k: v for k, v in self.components.items() if len(k[1]) <= q}, q, self.over, self.dim)

    def lift(self, extra: Mapping | None = None) -> "JetSection":
        """Order ``q+1`` section agreeing with this one; new components from ``extra`` or zero."""
        comps = dict(self.components)
        for (k, d), v in (extra or {}).items():
            d = "".join(sorted(d))
            if len(d) != self.q + 1:
                raise ValueError("lift components must have order q+1")
            comps[(k, d)] = v
        return JetSection(comps, self.q + 1, self.over, self.dim)

    def restricts_to(self, other: "JetSection") -> bool:
        return all(self.components[k] == v for k, v in other.components.items())

    def is_zero(self) -> bool:
        return not any(self.components.values())

    def __add__(self, other: "JetSection") -> "JetSection":
        _same_shape(self, other)
        return JetSection({k: v + other.components[k] for k, v in self.components.items()}, self.q, self.over, self.dim)

    def __neg__(self) -> "JetSection":
        return JetSection({k: -v for k, v in self.components.items()}, self.q, self.over, self.dim)

    def __sub__(self, other: "JetSection") -> "JetSection":
        return self + (-other)

    def scale(self, f) -> "JetSection":
        f = RatFunc._coerce(f)
        return JetSection({k: v * f for k, v in self.components.items()}, self.q, self.over, self.dim)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, JetSection)
            and (self.q, self.over, self.dim) == (other.q, other.over, other.dim)
            and self.components == other.components
        )

    def __hash__(self) -> int:
        return hash((self.q, self.over, self.dim, frozenset(self.components.items())))

    def nonzero(self) -> dict[tuple[int, str], RatFunc]:
        return {k: v for k, v in self.components.items() if v}

    def __str__(self) -> str:
        items = [f"{k}|{d}: {v}" for (k, d), v in sorted(self.components.items(), key=lambda t: (len(t[0][1]), t[0][1], t[0][0]))]
        return "{" + ", ".join(items) + "}"

    def to_json(self) -> dict:
        return {
            "order": self.q,
            "over": self.over,
            "dim": self.dim,
            "components": {f"{k}|{d}": str(v) for (k, d), v in self.components.items()},
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "JetSection":
        q = int(data["order"])
        over = data.get("over", SOURCE)
        comps = {}
        for key, expr in data["components"].items():
            k, _, d = key.partition("|")
            comps[(int(k), d)] = parse_expr(expr)
        dim = int(data.get("dim") or max([k for k, _ in comps] + [int(c) for _, d in comps for c in d] + [1]))
        return cls(comps, q, over, dim)


def _same_shape(a: JetSection, b: JetSection) -> None:
    if (a.q, a.over, a.dim) != (b.q, b.over, b.dim):
        raise ValueError("sections must share order, base and dimension")


def section_from_json_text(text: str) -> JetSection:
    return JetSection.from_json(json.loads(text))


# Spencer operator --------------------------------------------------------------

@dataclass(frozen=True)
class SpencerImage:
    """Entries ``(k, dirs, i) -> d_i xi^k_mu - xi^k_{mu+1_i}`` for ``|mu| <= q``."""

    entries: Mapping[tuple[int, str, int], RatFunc]
    q: int
    over: str
    dim: int

    def contract(self, i: int) -> JetSection:
        """The section ``d xi(d/d coord_i)`` of order ``q``."""
        return JetSection({(k, d): v for (k, d, j), v in self.entries.items() if j == i}, self.q, self.over, self.dim)

    def contract_with(self, field: JetSection | Iterable) -> JetSection:
        """Contraction with a vector field given by its order-0 components."""
        comps = [field[(i, "")] for i in range(1, self.dim + 1)] if isinstance(field, JetSection) else list(field)
        out = {}
        for (k, d, i), v in self.entries.items():
            out[(k, d)] = out.get((k, d), RatFunc()) + RatFunc._coerce(comps[i - 1]) * v
        return JetSection(out, self.q, self.over, self.dim)

    def is_zero(self) -> bool:
        return not any(self.entries.values())

    def to_json(self) -> dict:
        return {
            "order": self.q,
            "over": self.over,
            "entries": {f"{k}|{d}|{i}": str(v) for (k, d, i), v in sorted(self.entries.items(), key=lambda t: (len(t[0][1]), t[0][1], t[0][0], t[0][2]))},
        }


def spencer(xi: JetSection) -> SpencerImage:
    """Spencer operator on a section of order ``q+1``; the image has order ``q``."""
    if xi.q < 1:
        raise ValueError("the Spencer operator needs a section of order at least 1")
    q = xi.q - 1
    coords = xi.coords
    out = {}
    for dirs in multi_indices_upto(xi.dim, q):
        for k in range(1, xi.dim + 1):
            for i in range(1, xi.dim + 1):
                out[(k, dirs, i)] = xi[(k, dirs)].diff(coords[i - 1]) - xi[(k, add_dir(dirs, i))]
    return SpencerImage(out, q, xi.over, xi.dim)


def contraction(field: JetSection, d_eta: SpencerImage) -> JetSection:
    """``i(xi) d eta``: contract the Spencer image with the order-0 part of ``field``."""
    return d_eta.contract_with(field)


# formal jets of unknown functions ---------------------------------------------

_FORMAL = re.compile(r"^_([A-Z])(\d)(?:_(\d+))?$")


def _formal(tag: str, k: int, dirs: str = "") -> RatFunc:
    return RatFunc.var(f"_{tag}{k}_{dirs}" if dirs else f"_{tag}{k}")


def _formal_derivative(i: int) -> Callable[[str], RatFunc | None]:
    def image(v: str):
        mt = _FORMAL.match(v)
        if mt is None:
            return None
        tag, k, dirs = mt.groups()
        return _formal(tag, int(k), add_dir(dirs or "", i))

    return image


def _formal_bindings(tag: str, sec: JetSection) -> dict[str, RatFunc]:
    return {f"_{tag}{k}_{d}" if d else f"_{tag}{k}": v for (k, d), v in sec.components.items()}


@lru_cache(maxsize=None)
def _algebraic_bracket_template(dim: int, q: int) -> dict[tuple[int, str], RatFunc]:
    out = {}
    for k in range(1, dim + 1):
        e = RatFunc()
        for r in range(1, dim + 1):
            e = e + _formal("A", r) * _formal("B", k, str(r)) - _formal("B", r) * _formal("A", k, str(r))
        exprs = {"": e}
        for order in range(1, q + 1):
            for dirs in multi_indices(dim, order):
                parent, i = dirs[:-1], int(dirs[-1])
                exprs[dirs] = derive(exprs[parent], _formal_derivative(i))
        for dirs, v in exprs.items():
            out[(k, dirs)] = v
    return out


def algebraic_bracket(xi: JetSection, eta: JetSection) -> JetSection:
    """Pointwise bracket ``{xi_{q+1}, eta_{q+1}}`` with values in ``J_q(T)``."""
    _same_shape(xi, eta)
    if xi.q < 1:
        raise ValueError("the algebraic bracket needs sections of order at least 1")
    q = xi.q - 1
    template = _algebraic_bracket_template(xi.dim, q)
    bind = _formal_bindings("A", xi) | _formal_bindings("B", eta)
    return JetSection({key: expr.subs(bind) for key, expr in template.items()}, q, xi.over, xi.dim)


def _lift_of(sec: JetSection, lift: JetSection | None) -> JetSection:
    if lift is None:
        return sec.lift()
    if lift.q != sec.q + 1 or not lift.restricts_to(sec):
        raise ValueError("a lift must have order q+1 and restrict to the given section")
    return lift


def algebroid_bracket(
    xi: JetSection,
    eta: JetSection,
    lifts: tuple[JetSection | None, JetSection | None] | None = None,
) -> JetSection:
    """Bracket of sections of ``J_q(T)``; independent of the order-``q+1`` lifts."""
    _same_shape(xi, eta)
    lx, le = lifts or (None, None)
    xi1 = _lift_of(xi, lx)
    eta1 = _lift_of(eta, le)
    return algebraic_bracket(xi1, eta1) + contraction(xi, spencer(eta1)) - contraction(eta, spencer(xi1))


def formal_lie_derivative(xi: JetSection, eta: JetSection) -> JetSection:
    """``L(xi_{q+1}) eta_q = [xi_q, eta_q] + i(eta) d xi_{q+1}``."""
    if xi.q != eta.q + 1:
        raise ValueError("xi must have order one more than eta")
    xq = xi.truncate(eta.q)
    return algebroid_bracket(xq, eta, (xi, None)) + contraction(eta, spencer(xi))


def formal_lie_derivative_alt(xi: JetSection, eta: JetSection, eta_lift: JetSection | None = None) -> JetSection:
    """Second rewriting ``{xi_{q+1}, eta_{q+1}} + i(xi) d eta_{q+1}``."""
    eta1 = _lift_of(eta, eta_lift)
    return algebraic_bracket(xi, eta1) + contraction(xi.truncate(eta.q), spencer(eta1))


# sharp, flat and prolongations ----------------------------------------------------

def prolong_vertical(eta: VectorField, q: int, n: int = 1) -> VectorField:
    """Prolongation of a vertical field whose coefficients depend on ``y`` only."""
    out: dict[str, RatFunc] = {}
    for v, c in eta.coefficients.items():
        if jet_order(v) != 0 or not v.startswith("y"):
            raise ValueError(f"vertical field expected, got a component along {v}")
        for w in c.variables():
            if jet_order(w) != 0 or not w.startswith("y"):
                raise ValueError(f"coefficient {c} must depend on target coordinates only")
        k = int(v[1:])
        exprs = {"": c}
        for order in range(1, q + 1):
            for dirs in multi_indices(n, order):
                exprs[dirs] = total_derivative(exprs[dirs[:-1]], int(dirs[-1]))
        for dirs, e in exprs.items():
            out[jet_name(k, dirs)] = e
    return VectorField(out)


def sharp(eta: JetSection, n: int = 1, q: int | None = None) -> VectorField:
    """Vertical field on ``J_q(X x Y)`` induced by a target section of order ``q``."""
    if eta.over != TARGET:
        raise ValueError("sharp expects a section over the target")
    q = eta.q if q is None else q
    if q > eta.q:
        raise ValueError("section order too low")
    m = eta.dim
    template = composite_jets(n, m, q)
    bind = {jet_name(k, d, letter="g"): v for (k, d), v in eta.components.items() if len(d) <= q}
    out = {}
    for (k, dirs), expr in template.items():
        out[jet_name(k, dirs)] = expr.subs(bind)
    return VectorField(out)


@lru_cache(maxsize=None)
def _flat_template(n: int, m: int, q: int) -> dict[str, RatFunc]:
    def d(i: int):
        formal = _formal_derivative(i)

        def image(v: str):
            r = formal(v)
            if r is not None:
                return r
            mt = re.match(r"^y(\d)(?:_(\d+))?$", v)
            if mt is None:
                return None
            return RatFunc.var(jet_name(int(mt.group(1)), add_dir(mt.group(2) or "", i)))

        return image

    out: dict[str, RatFunc] = {}
    for i in range(1, n + 1):
        out[f"x{i}"] = _formal("X", i)
    zeta = {}
    for k in range(1, m + 1):
        zeta[(k, "")] = RatFunc()
    for order in range(1, q + 1):
        for dirs in multi_indices(n, order):
            parent, i = dirs[:-1], int(dirs[-1])
            for k in range(1, m + 1):
                z = derive(zeta[(k, parent)], d(i))
                for r in range(1, n + 1):
                    z = z - RatFunc.var(jet_name(k, add_dir(parent, r))) * _formal("X", r, str(i))
                zeta[(k, dirs)] = z
                out[jet_name(k, dirs)] = z
    return out


def flat(xi: JetSection, m: int = 1, q: int | None = None) -> VectorField:
    """Field on ``J_q(X x Y)`` induced by a source section of order ``q``."""
    if xi.over != SOURCE:
        raise ValueError("flat expects a section over the source")
    q = xi.q if q is None else q
    if q > xi.q:
        raise ValueError("section order too low")
    template = _flat_template(xi.dim, m, q)
    bind = _formal_bindings("X", xi)
    return VectorField({v: e.subs(bind) for v, e in template.items()})


# identities -----------------------------------------------------------------------

def commutation_residual(
    phi,
    section: JetSection,
    side: str = SOURCE,
    i: int = 1,
    other_dim: int = 1,
) -> RatFunc:
    """Left side minus right side of the commutation formula for ``d_i``.

    ``section`` has order ``q+1``. On the source side ``other_dim`` is the
    number of dependent variables; on the target side it is the number of
    independent variables.
    """
    phi = RatFunc._coerce(phi)
    q = section.q - 1
    if q < 0:
        raise ValueError("section must have order at least 1")
    d = spencer(section)
    if side == SOURCE:
        n = section.dim
        dphi = total_derivative(phi, i)
        lhs = flat(section, other_dim)(dphi)
        rhs = total_derivative(flat(section.truncate(q), other_dim)(phi), i)
        for r in range(1, n + 1):
            rhs = rhs - section[(r, str(i))] * total_derivative(phi, r)
        rhs = rhs - flat(d.contract(i), other_dim)(phi)
        return lhs - rhs
    if side == TARGET:
        n = other_dim
        dphi = total_derivative(phi, i)
        lhs = sharp(section, n)(dphi)
        rhs = total_derivative(sharp(section.truncate(q), n)(phi), i)
        for k in range(1, section.dim + 1):
            rhs = rhs - RatFunc.var(jet_name(k, str(i))) * sharp(d.contract(k), n)(phi)
        return lhs - rhs
    raise ValueError("side must be 'source' or 'target'")


def bracket_contraction_residual(xi: JetSection, eta: JetSection, zeta: Iterable) -> JetSection:
    """Residual of ``i(z) d{xi, eta} = {i(z) d xi, eta} + {xi, i(z) d eta}``.

    ``xi`` and ``eta`` have order ``q+2``; the brackets are algebraic, so the
    identity is pointwise in ``zeta`` and holds for non-constant fields too.
    """
    _same_shape(xi, eta)
    z = [RatFunc._coerce(parse_expr(c) if isinstance(c, str) else c) for c in zeta]
    lower = xi.q - 1
    lhs = contraction(z, spencer(algebraic_bracket(xi, eta)))
    rhs = algebraic_bracket(contraction(z, spencer(xi)), eta.truncate(lower)) + algebraic_bracket(
        xi.truncate(lower), contraction(z, spencer(eta))
    )
    return lhs - rhs


def field_bracket(a: Iterable, b: Iterable, over: str = SOURCE) -> list[RatFunc]:
    """Bracket of two plain vector fields on the base, given by component lists."""
    a = [RatFunc._coerce(c) for c in a]
    b = [RatFunc._coerce(c) for c in b]
    coords = base_coords(over, len(a))
    return [
        sum((a[i] * b[k].diff(coords[i]) - b[i] * a[k].diff(coords[i]) for i in range(len(a))), RatFunc())
        for k in range(len(a))
    ]


def spencer_lie_residual(xi: JetSection, eta: JetSection, zeta: Iterable) -> JetSection:
    """Residual of the compatibility of the Spencer operator with Lie derivatives.

    For sections of order ``q+1``:
    ``i(z) d[xi, eta] = L(xi)(i(z) d eta) - i([xi_0, z]) d eta - L(eta)(i(z) d xi) + i([eta_0, z]) d xi``.
    """
    _same_shape(xi, eta)
    z = [RatFunc._coerce(parse_expr(c) if isinstance(c, str) else c) for c in zeta]
    dxi, deta = spencer(xi), spencer(eta)
    x0 = [xi[(k, "")] for k in range(1, xi.dim + 1)]
    e0 = [eta[(k, "")] for k in range(1, eta.dim + 1)]
    lhs = contraction(z, spencer(algebroid_bracket(xi, eta)))
    rhs = (
        formal_lie_derivative(xi, contraction(z, deta))
        - contraction(field_bracket(x0, z, xi.over), deta)
        - formal_lie_derivative(eta, contraction(z, dxi))
        + contraction(field_bracket(e0, z, xi.over), dxi)
    )
    return lhs - rhs

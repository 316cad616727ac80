"""Jet coordinates, total derivatives, and composition of groupoid jets.

Variable names follow a fixed lexicon:

* ``x1`` .. ``x9`` independent (source) variables;
* ``y<k>`` and ``y<k>_<dirs>`` dependent variables and their jets, where
  ``<dirs>`` lists the differentiation directions in non-decreasing order
  (``y2_112`` is the jet with two derivatives along ``x1`` and one along ``x2``);
* a ``b`` prefix marks the barred copy used in tensor products (``by1_1``),
  repeated for further copies (``bby1``);
* ``g<u>_<dirs>`` derivatives of the target map with respect to the target
  coordinates, ``g<u>`` its value;
* ``a1`` .. ``a9`` parameters (also barrable: ``ba1``).

For a single independent variable the aliases ``x``, ``y``, ``y_x``,
``y1_xx`` and so on are accepted on input and rewritten to canonical names.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from itertools import combinations_with_replacement
from typing import Iterable, Mapping, Sequence

from .exactalg import RatFunc, derive, parse, rref, var_key

__all__ = [
    "GroupoidJetKey",
    "JetContext",
    "JetKind",
    "JetVar",
    "MultiIndex",
    "OrderOverflow",
    "Prolongation",
    "SingularJacobian",
    "canonical_name",
    "composite_jets",
    "multi_indices",
    "multi_indices_upto",
    "total_derivative_multi",
    "identity_groupoid_jet",
    "jet_compose",
    "jet_invert",
    "jet_name",
    "jet_order",
    "parse_expr",
    "prolong_linear_system",
    "section_basis",
    "total_derivative",
]


class OrderOverflow(ValueError):
    """A total derivative would produce a jet above the requested cap."""


class SingularJacobian(ZeroDivisionError):
    """The first-order block of a groupoid jet is not invertible."""


@dataclass(frozen=True, order=True)
class MultiIndex:
    counts: tuple[int, ...]

    @classmethod
    def zero(cls, n: int) -> "MultiIndex":
        return cls((0,) * n)

    @classmethod
    def from_dirs(cls, dirs: str, n: int) -> "MultiIndex":
        c = [0] * n
        for ch in dirs:
            d = int(ch)
            if not 1 <= d <= n:
                raise ValueError(f"direction {d} outside 1..{n}")
            c[d - 1] += 1
        return cls(tuple(c))

    @property
    def n(self) -> int:
        return len(self.counts)

    @property
    def order(self) -> int:
        return sum(self.counts)

    @property
    def dirs(self) -> str:
        return "".join(str(i + 1) * c for i, c in enumerate(self.counts))

    def succ(self, i: int) -> "MultiIndex":
        c = list(self.counts)
        c[i - 1] += 1
        return MultiIndex(tuple(c))

    def pred(self, i: int) -> "MultiIndex | None":
        if not self.counts[i - 1]:
            return None
        c = list(self.counts)
        c[i - 1] -= 1
        return MultiIndex(tuple(c))

    def __add__(self, other: "MultiIndex") -> "MultiIndex":
        return MultiIndex(tuple(a + b for a, b in zip(self.counts, other.counts)))

    def __str__(self) -> str:
        return self.dirs


def multi_indices(n: int, order: int) -> list[str]:
    """Direction strings of all multi-indices of exactly ``order`` over ``n`` directions."""
    digits = "".join(str(i) for i in range(1, n + 1))
    return ["".join(c) for c in combinations_with_replacement(digits, order)]


def multi_indices_upto(n: int, q: int) -> list[str]:
    out: list[str] = []
    for r in range(q + 1):
        out.extend(multi_indices(n, r))
    return out


def add_dir(dirs: str, i: int) -> str:
    return "".join(sorted(dirs + str(i)))


class JetKind(Enum):
    SOURCE = "source"
    SOURCE_JET = "source_jet"
    BAR_JET = "bar_jet"
    GROUPOID_JET = "groupoid_jet"
    PARAM = "param"


_NAME = re.compile(r"^(b*)([xyag])(\d)(?:_(\d+))?$")


@dataclass(frozen=True)
class JetVar:
    kind: JetKind
    component: int
    dirs: str = ""
    bars: int = 0

    @classmethod
    def parse(cls, name: str) -> "JetVar":
        m = _NAME.match(name)
        if m is None:
            raise ValueError(f"{name!r} is not a jet variable")
        bars, letter, comp, dirs = m.groups()
        comp = int(comp)
        if comp == 0:
            raise ValueError(f"{name!r}: components start at 1")
        dirs = dirs or ""
        if dirs != "".join(sorted(dirs)) or "0" in dirs:
            raise ValueError(f"{name!r}: directions must be a non-decreasing string of digits 1..9")
        nb = len(bars)
        if letter == "x":
            if dirs or nb:
                raise ValueError(f"{name!r} is not a jet variable")
            return cls(JetKind.SOURCE, comp)
        if letter == "a":
            if dirs:
                raise ValueError(f"{name!r}: parameters carry no derivatives")
            return cls(JetKind.PARAM, comp, "", nb)
        if letter == "g":
            if nb:
                raise ValueError(f"{name!r}: groupoid jets are not barred")
            return cls(JetKind.GROUPOID_JET, comp, dirs)
        return cls(JetKind.BAR_JET if nb else JetKind.SOURCE_JET, comp, dirs, nb)

    @property
    def order(self) -> int:
        return len(self.dirs)

    @property
    def name(self) -> str:
        if self.kind is JetKind.SOURCE:
            return f"x{self.component}"
        if self.kind is JetKind.PARAM:
            return "b" * self.bars + f"a{self.component}"
        letter = "g" if self.kind is JetKind.GROUPOID_JET else "y"
        base = "b" * self.bars + f"{letter}{self.component}"
        return f"{base}_{self.dirs}" if self.dirs else base

    def multi_index(self, n: int) -> MultiIndex:
        return MultiIndex.from_dirs(self.dirs, n)

    def __str__(self) -> str:
        return self.name


def jet_name(k: int, mu: MultiIndex | str = "", bars: int = 0, letter: str = "y") -> str:
    dirs = mu.dirs if isinstance(mu, MultiIndex) else "".join(sorted(mu))
    base = "b" * bars + f"{letter}{k}"
    return f"{base}_{dirs}" if dirs else base


def jet_order(name: str) -> int:
    """Jet order of a lexicon variable, 0 for anything else."""
    m = _NAME.match(name)
    return len(m.group(4) or "") if m else 0


_ALIAS = re.compile(r"^(b*)([xyg])(\d?)_?(x*)$")


def canonical_name(token: str) -> str:
    """Rewrite one identifier to its canonical lexicon name.

    Raises ``ValueError`` for identifiers outside the lexicon.
    """
    m = _ALIAS.match(token)
    if m and (m.group(4) or not m.group(3)):
        bars, letter, comp, xs = m.groups()
        comp = comp or "1"
        if letter == "x":
            if bars or xs:
                raise ValueError(f"unknown variable {token!r}")
            return "x" + comp
        name = f"{bars}{letter}{comp}"
        return f"{name}_{'1' * len(xs)}" if xs else name
    JetVar.parse(token)
    return token


def parse_expr(text: str) -> RatFunc:
    """Parse an expression over the jet lexicon into a canonical rational function."""
    return parse(text, canonical_name)


@dataclass(frozen=True)
class JetContext:
    n: int
    m: int
    q: int
    p: int = 0

    def __post_init__(self):
        if self.n < 1 or self.m < 1 or self.q < 0 or self.p < 0:
            raise ValueError("need n, m >= 1, q >= 0, p >= 0")
        if self.n > 9 or self.m > 9 or self.p > 9:
            raise ValueError("the lexicon supports at most 9 of each kind")

    def source_vars(self) -> list[str]:
        return [f"x{i}" for i in range(1, self.n + 1)]

    def jet_vars(self, lo: int = 0, hi: int | None = None, bars: int = 0) -> list[str]:
        hi = self.q if hi is None else hi
        out = []
        for r in range(lo, hi + 1):
            for dirs in multi_indices(self.n, r):
                for k in range(1, self.m + 1):
                    out.append(jet_name(k, dirs, bars))
        return out

    def param_vars(self, bars: int = 0) -> list[str]:
        return ["b" * bars + f"a{j}" for j in range(1, self.p + 1)]

    def with_order(self, q: int) -> "JetContext":
        return JetContext(self.n, self.m, q, self.p)


# total derivatives -------------------------------------------------------------

def _td_image(i: int, m: int | None, chain: bool, cap: int | None):
    def image(v: str):
        mt = _NAME.match(v)
        if mt is None:
            return None
        bars, letter, comp, dirs = mt.groups()
        dirs = dirs or ""
        if letter == "x":
            return RatFunc.const(1) if int(comp) == i and not bars else None
        if letter == "y":
            nd = add_dir(dirs, i)
            if cap is not None and len(nd) > cap:
                raise OrderOverflow(f"d_{i} of {v} exceeds order {cap}")
            return RatFunc.var(f"{bars}y{comp}_{nd}")
        if letter == "g" and chain:
            if m is None:
                raise ValueError("groupoid chain-rule mode needs the number of target variables")
            total = RatFunc()
            for r in range(1, m + 1):
                nd = add_dir(dirs, r)
                total = total + RatFunc.var(f"g{comp}_{nd}") * RatFunc.var(f"y{r}_{i}")
            return total
        return None

    return image


def total_derivative(
    f: RatFunc,
    i: int,
    ctx: JetContext | None = None,
    *,
    cap: int | None = None,
    groupoid_chain: bool = False,
) -> RatFunc:
    """Formal derivative ``d_i`` on jet space.

    Barred jets are differentiated like unbarred ones. Groupoid jets and
    parameters are constants unless ``groupoid_chain`` is set, in which case
    ``g<u>_<dirs>`` is read as a function of the ``y`` variables.
    """
    if ctx is not None and not 1 <= i <= ctx.n:
        raise ValueError(f"direction {i} outside 1..{ctx.n}")
    m = ctx.m if ctx is not None else None
    return derive(f, _td_image(i, m, groupoid_chain, cap))


def total_derivative_multi(f: RatFunc, dirs: str, ctx: JetContext | None = None, **kw) -> RatFunc:
    for ch in dirs:
        f = total_derivative(f, int(ch), ctx, **kw)
    return f


# groupoid jets -------------------------------------------------------------------

GroupoidJetKey = tuple[int, str]


def _key(k) -> GroupoidJetKey:
    comp, mu = k
    return comp, (mu.dirs if isinstance(mu, MultiIndex) else "".join(sorted(mu)))


def identity_groupoid_jet(m: int, q: int, point: Mapping[int, RatFunc] | None = None) -> dict[GroupoidJetKey, RatFunc]:
    out: dict[GroupoidJetKey, RatFunc] = {}
    for u in range(1, m + 1):
        out[(u, "")] = point[u] if point else RatFunc.var(f"y{u}")
        for r in range(1, q + 1):
            for dirs in multi_indices(m, r):
                out[(u, dirs)] = RatFunc.const(1 if dirs == str(u) else 0)
    return out


def composite_jets(n: int, m: int, q: int) -> dict[GroupoidJetKey, RatFunc]:
    """Chain-rule expressions of the jets of ``g(y(x))`` in ``g``- and ``y``-jets."""
    ctx = JetContext(n, m, max(q, 0))
    out: dict[GroupoidJetKey, RatFunc] = {}
    for u in range(1, m + 1):
        out[(u, "")] = RatFunc.var(f"g{u}")
    for r in range(1, q + 1):
        for dirs in multi_indices(n, r):
            i = int(dirs[-1])
            parent = dirs[:-1]
            for u in range(1, m + 1):
                out[(u, dirs)] = total_derivative(out[(u, parent)], i, ctx, groupoid_chain=True)
    return out


def jet_compose(
    source_jet: Mapping,
    groupoid_jet: Mapping,
    q: int,
    n: int | None = None,
    m: int | None = None,
) -> dict[GroupoidJetKey, RatFunc]:
    """Jets of ``g ∘ y`` from the jets of ``y`` (over ``x``) and of ``g`` (over ``y``).

    Keys are ``(component, direction string)``. The groupoid jet supplies
    the values of ``g`` and its derivatives at the target point of the
    source jet; nothing is re-evaluated.
    """
    src = {_key(k): RatFunc._coerce(v) for k, v in source_jet.items()}
    grp = {_key(k): RatFunc._coerce(v) for k, v in groupoid_jet.items()}
    if n is None:
        n = max((int(c) for _, d in src for c in d), default=1)
    if m is None:
        m = max(u for u, _ in grp)
    sym = composite_jets(n, m, q)
    bind: dict[str, RatFunc] = {}
    for (k, dirs), v in src.items():
        if dirs and len(dirs) <= q:
            bind[jet_name(k, dirs)] = v
    for (u, dirs), v in grp.items():
        if len(dirs) <= q:
            bind[jet_name(u, dirs, letter="g")] = v
    for r in range(1, q + 1):
        for dirs in multi_indices(n, r):
            for k in range(1, m + 1):
                if (k, dirs) not in src:
                    raise ValueError(f"source jet incomplete: missing ({k}, {dirs!r})")
        for dirs in multi_indices(m, r):
            for u in range(1, m + 1):
                if (u, dirs) not in grp:
                    raise ValueError(f"groupoid jet incomplete: missing ({u}, {dirs!r})")
    return {key: expr.subs(bind) for key, expr in sym.items()}


def jet_invert(
    groupoid_jet: Mapping,
    q: int,
    m: int | None = None,
    point: Mapping[int, RatFunc] | None = None,
) -> dict[GroupoidJetKey, RatFunc]:
    """Jets of the inverse map up to order 2.

    ``point`` gives the source point (the value of the inverse at order 0);
    it defaults to the symbols ``y<u>``.
    """
    if q > 2:
        raise NotImplementedError("inversion is implemented up to order 2")
    g = {_key(k): RatFunc._coerce(v) for k, v in groupoid_jet.items()}
    if m is None:
        m = max(u for u, _ in g)
    out: dict[GroupoidJetKey, RatFunc] = {}
    for u in range(1, m + 1):
        out[(u, "")] = RatFunc._coerce(point[u]) if point else RatFunc.var(f"y{u}")
    if q == 0:
        return out
    A = [[g[(u, str(r))] for r in range(1, m + 1)] for u in range(1, m + 1)]
    ident = [[RatFunc.const(1 if i == j else 0) for j in range(m)] for i in range(m)]
    rows, piv = rref([A[i] + ident[i] for i in range(m)])
    if piv[:m] != list(range(m)):
        raise SingularJacobian("first-order block is singular")
    inv = [row[m:] for row in rows[:m]]
    for k in range(1, m + 1):
        for a in range(1, m + 1):
            out[(k, str(a))] = inv[k - 1][a - 1]
    if q == 2:
        for dirs in multi_indices(m, 2):
            a, b = int(dirs[0]), int(dirs[1])
            for k in range(1, m + 1):
                total = RatFunc()
                for u in range(1, m + 1):
                    for r in range(1, m + 1):
                        for s in range(1, m + 1):
                            second = g[(u, "".join(sorted(f"{r}{s}")))]
                            if not second:
                                continue
                            total = total + inv[k - 1][u - 1] * second * inv[r - 1][a - 1] * inv[s - 1][b - 1]
                out[(k, dirs)] = -total
    return out


# linear systems for sections ----------------------------------------------------

@dataclass(frozen=True)
class Prolongation:
    """Result of one prolongation and projection step.

    ``equations`` is the original system followed by all first derivatives;
    ``projected`` lists equations of the original order implied by it that
    are not consequences of the original system.
    """

    equations: tuple[RatFunc, ...]
    derivatives: tuple[RatFunc, ...]
    projected: tuple[RatFunc, ...]


def _unknowns_of(eqs: Iterable[RatFunc]) -> set[str]:
    out = set()
    for e in eqs:
        for v in e.variables():
            mt = _NAME.match(v)
            if mt and mt.group(2) == "y" and not mt.group(1):
                out.add(v)
    return out


def _linear_row(eq: RatFunc, cols: Sequence[str]) -> list[RatFunc]:
    row = [eq.diff(c) for c in cols]
    rest = eq
    bind = {c: RatFunc() for c in cols}
    if rest.subs(bind):
        raise ValueError(f"equation {eq} is not linear homogeneous in the section components")
    return row


def _col_order(names: Iterable[str]) -> list[str]:
    # highest order first so elimination removes top-order unknowns first
    return sorted(names, key=lambda v: (-jet_order(v), var_key(v)))


def _normalize_form(row: Sequence[RatFunc], cols: Sequence[str]) -> RatFunc:
    lead = next(c for c in row if c)
    total = RatFunc()
    for c, v in zip(row, cols):
        if c:
            total = total + (c / lead) * RatFunc.var(v)
    return total


def prolong_linear_system(system: Sequence[RatFunc], ctx: JetContext) -> Prolongation:
    """Differentiate every equation once and project back to the original order."""
    system = [RatFunc._coerce(e) for e in system]
    if not system:
        return Prolongation((), (), ())
    q = max(jet_order(v) for v in _unknowns_of(system)) if _unknowns_of(system) else 0
    derivs = [total_derivative(e, i, ctx) for e in system for i in range(1, ctx.n + 1)]
    derivs = [d for d in derivs if d]
    cols = _col_order(_unknowns_of(system + derivs))
    top = [c for c in cols if jet_order(c) > q]
    low = [c for c in cols if jet_order(c) <= q]
    rows, piv = rref([_linear_row(d, cols) for d in derivs])
    candidates = []
    for row, pc in zip(rows, piv):
        if cols[pc] in top:
            continue
        candidates.append([row[cols.index(c)] for c in low])
    base_rows = [_linear_row(e, low) for e in system]
    accepted = []
    current = list(base_rows)
    rank = len(rref(current)[1]) if current else 0
    for cand in candidates:
        trial = current + [cand]
        r = len(rref(trial)[1])
        if r > rank:
            current = trial
            rank = r
            accepted.append(_normalize_form(cand, low))
    return Prolongation(tuple(system + derivs), tuple(derivs), tuple(accepted))


def section_basis(
    equations: Sequence[RatFunc],
    dims: int,
    q: int,
    n: int | None = None,
) -> list[dict[GroupoidJetKey, RatFunc]]:
    """Basis of solutions of a linear system for sections of order ``q``.

    Unknowns are ``y<k>_<dirs>`` with ``k`` in ``1..dims`` over ``n``
    directions (default ``dims``). Free unknowns are chosen among the lowest
    orders; each basis section has one free unknown equal to 1.
    """
    n = dims if n is None else n
    names = [jet_name(k, d) for d in multi_indices_upto(n, q) for k in range(1, dims + 1)]
    cols = _col_order(names)
    eqs = [RatFunc._coerce(e) for e in equations if e]
    if eqs:
        rows, piv = rref([_linear_row(e, cols) for e in eqs])
        rows = rows[: len(piv)]
    else:
        rows, piv = [], []
    pivset = set(piv)
    out = []
    frees = sorted((i for i in range(len(cols)) if i not in pivset), key=lambda i: (jet_order(cols[i]), var_key(cols[i])))
    for free in frees:
        vals = {c: RatFunc() for c in cols}
        vals[cols[free]] = RatFunc.const(1)
        for row, pc in zip(rows, piv):
            vals[cols[pc]] = -row[free]
        sec = {}
        for c, v in vals.items():
            jv = JetVar.parse(c)
            sec[(jv.component, jv.dirs)] = v
        out.append(sec)
    return out

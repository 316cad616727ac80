import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from dgal.exactalg import RatFunc
from dgal.jets import (
    JetContext,
    JetKind,
    JetVar,
    MultiIndex,
    OrderOverflow,
    SingularJacobian,
    canonical_name,
    composite_jets,
    identity_groupoid_jet,
    jet_compose,
    jet_invert,
    jet_order,
    parse_expr as P,
    prolong_linear_system,
    section_basis,
    total_derivative,
    total_derivative_multi,
)

from conftest import to_sympy


# lexicon

@pytest.mark.parametrize(
    "alias, name",
    [("x", "x1"), ("y", "y1"), ("y_x", "y1_1"), ("y2_xx", "y2_11"), ("by_x", "by1_1"), ("g", "g1"), ("g2_12", "g2_12")],
)
def test_aliases(alias, name):
    assert canonical_name(alias) == name


@pytest.mark.parametrize("bad", ["z", "y1_0", "y1_21", "q3", "x1_1"])
def test_unknown_names_rejected(bad):
    with pytest.raises(ValueError):
        canonical_name(bad)


def test_jetvar_parse_and_order():
    v = JetVar.parse("by2_112")
    assert v.kind is JetKind.BAR_JET and v.component == 2 and v.order == 3
    assert jet_order("y1_12") == 2 and jet_order("x1") == 0
    assert JetVar.parse("g1_12").kind is JetKind.GROUPOID_JET


def test_multi_index_successor():
    mu = MultiIndex.from_dirs("12", 2)
    assert mu.counts == (1, 1) and mu.order == 2
    assert mu.succ(1).dirs == "112"
    assert mu.succ(2).pred(1).dirs == "22"
    assert MultiIndex.zero(2).pred(1) is None


def test_context_variables():
    ctx = JetContext(2, 1, 1, 1)
    assert ctx.jet_vars() == ["y1", "y1_1", "y1_2"]
    assert ctx.param_vars(bars=1) == ["ba1"]
    with pytest.raises(ValueError):
        JetContext(0, 1, 1)


# total derivatives

def test_total_derivative_examples():
    assert total_derivative(P("y_x/y"), 1) == P("y_xx/y - (y_x/y)^2")
    assert total_derivative(P("y2*y1_x"), 1) == P("y2*y1_xx + y1_x*y2_x")
    assert total_derivative(P("7"), 1) == 0


def test_bar_jets_and_constants():
    assert total_derivative(P("by1*a1 + g1_1 + x1"), 1) == P("by1_1*a1 + 1")


def test_order_cap():
    with pytest.raises(OrderOverflow):
        total_derivative(P("y1_11"), 1, cap=2)


def _as_functions(expr, m):
    x = sympy.Symbol("x1")
    subs = {}
    for s in expr.free_symbols:
        name = s.name
        if name.startswith("y"):
            comp, _, dirs = name[1:].partition("_")
            f = sympy.Function(f"Y{comp}")(x)
            subs[s] = sympy.diff(f, x, len(dirs)) if dirs else f
    return expr.subs(subs)


@st.composite
def jet_functions(draw):
    names = ["y1", "y2", "y1_1", "y2_1", "y1_11", "x1"]
    f = RatFunc()
    for _ in range(draw(st.integers(1, 3))):
        t = RatFunc.const(draw(st.integers(-4, 4)))
        for v in draw(st.lists(st.sampled_from(names), max_size=3)):
            t = t * RatFunc.var(v)
        f = f + t
    den = RatFunc.var(draw(st.sampled_from(names))) + draw(st.integers(1, 3))
    return f / den


@settings(max_examples=40, deadline=None)
@given(jet_functions())
def test_total_derivative_matches_chain_rule_oracle(f):
    x = sympy.Symbol("x1")
    expected = sympy.diff(_as_functions(to_sympy(f), 2), x)
    got = _as_functions(to_sympy(total_derivative(f, 1)), 2)
    assert sympy.cancel(expected - got) == 0


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_total_derivatives_commute(seed):
    rng = random.Random(seed)
    names = ["y1", "y1_1", "y1_2", "y2_12", "y2", "x1", "x2"]
    f = RatFunc.const(1)
    for _ in range(3):
        f = f * (RatFunc.var(rng.choice(names)) + rng.randint(-2, 2))
    f = f / (RatFunc.var(rng.choice(names)) + 1)
    assert total_derivative(total_derivative(f, 1), 2) == total_derivative(total_derivative(f, 2), 1)
    assert total_derivative_multi(f, "12") == total_derivative_multi(f, "21")


def test_total_derivative_raises_order_by_one():
    f = P("y1_11*y2 + y1")
    assert max(jet_order(v) for v in total_derivative(f, 1).variables()) == 3


# groupoid jets

def test_composite_jets_second_and_third_order():
    c = composite_jets(1, 1, 3)
    assert c[(1, "11")] == P("g1_1*y_xx + g1_11*y_x^2")
    assert c[(1, "111")] == P("g1_1*y_xxx + 3*g1_11*y_x*y_xx + g1_111*y_x^3")


def test_jet_compose_with_identity_is_identity():
    src = {(1, ""): P("y1"), (1, "1"): P("y1_1"), (1, "11"): P("y1_11"), (2, ""): P("y2"), (2, "1"): P("y2_1"), (2, "11"): P("y2_11")}
    ident = identity_groupoid_jet(2, 2)
    assert jet_compose(src, ident, 2, n=1, m=2) == src


def test_jet_invert_second_order():
    g = {(1, ""): P("g1"), (1, "1"): P("g1_1"), (1, "11"): P("g1_11")}
    inv = jet_invert(g, 2, m=1)
    assert inv[(1, "1")] == P("1/g1_1")
    assert inv[(1, "11")] == P("-g1_11/g1_1^3")


def test_jet_invert_singular():
    with pytest.raises(SingularJacobian):
        jet_invert({(1, ""): P("g1"), (1, "1"): RatFunc()}, 1, m=1)


def _random_groupoid(rng, m, q):
    out = {}
    for u in range(1, m + 1):
        out[(u, "")] = RatFunc.var(f"y{u}") + rng.randint(-3, 3)
        for dirs in (["1", "2"][:m]):
            out[(u, dirs)] = RatFunc.const(rng.randint(-3, 3) + (5 if str(u) == dirs else 0))
        if q >= 2:
            for dirs in ["11", "12", "22"][: 1 if m == 1 else 3]:
                out[(u, dirs)] = RatFunc.const(rng.randint(-3, 3))
    return out


@pytest.mark.parametrize("seed", range(6))
@pytest.mark.parametrize("m", [1, 2])
def test_inverse_composes_to_identity(seed, m):
    rng = random.Random(seed)
    g = _random_groupoid(rng, m, 2)
    inv = jet_invert(g, 2, m=m)
    src = {key: v for key, v in identity_groupoid_jet(m, 2).items()}
    composed = jet_compose(jet_compose(src, g, 2, n=m, m=m), inv, 2, n=m, m=m)
    for (u, d), v in composed.items():
        if d:
            assert v == src[(u, d)]


@pytest.mark.parametrize("seed", range(4))
def test_composition_is_associative(seed):
    rng = random.Random(seed)
    a, b = _random_groupoid(rng, 2, 2), _random_groupoid(rng, 2, 2)
    src = {(k, d): P(f"y{k}_{d}" if d else f"y{k}") for k in (1, 2) for d in ("", "1", "11")}
    left = jet_compose(jet_compose(src, a, 2, n=1, m=2), b, 2, n=1, m=2)
    # a groupoid jet over the target is itself a jet with m source directions
    ab = jet_compose(a, b, 2, n=2, m=2)
    right = jet_compose(src, ab, 2, n=1, m=2)
    assert left == right


# linear systems

def test_crossed_derivatives_project_the_trace():
    system = [P("x2*y1_1 + y2"), P("y1_2")]
    out = prolong_linear_system(system, JetContext(2, 2, 1))
    assert out.projected == (P("y2_2 + y1_1"),)


def test_closed_and_empty_systems():
    assert prolong_linear_system([P("y1_1")], JetContext(1, 1, 1)).projected == ()
    assert prolong_linear_system([], JetContext(1, 1, 1)).projected == ()


def test_section_basis_for_pfaffian_algebroid():
    eqs = [P("x2*y1_1 + y2"), P("y1_2"), P("y2_2 + y1_1")]
    basis = section_basis(eqs, 2, 1)
    assert len(basis) == 6 - 3
    for sec in basis:
        values = {(f"y{k}_{d}" if d else f"y{k}"): v for (k, d), v in sec.items()}
        assert all(e.subs(values) == 0 for e in eqs)

import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dgal.exactalg import RatFunc
from dgal.fieldops import (
    JetSection,
    VectorField,
    algebraic_bracket,
    algebroid_bracket,
    bracket_contraction_residual,
    bracket_vf,
    commutation_residual,
    contraction,
    flat,
    formal_lie_derivative,
    formal_lie_derivative_alt,
    prolong_vertical,
    sharp,
    spencer,
    spencer_lie_residual,
)
from dgal.jets import parse_expr as P, total_derivative

from conftest import random_poly_expr, random_section

VF = lambda d: VectorField({k: P(v) for k, v in d.items()})
T = JetSection.from_values


# vector fields

def test_apply_and_bracket():
    th1, th2 = VF({"y1": "1"}), VF({"y1": "y", "y1_1": "y_x"})
    assert bracket_vf(th1, th2) == th1
    assert th2(P("y_x/y")) == 0
    assert bracket_vf(th2, th2).is_zero()


def test_vector_field_json_round_trip():
    v = VF({"y1_1": "y1_1", "y1_11": "2*y1_11"})
    assert VectorField.from_json(json.loads(json.dumps(v.to_json()))) == v
    assert VectorField().to_json() == {"coefficients": {}}


def test_vector_field_printing():
    assert str(VF({"y1": "-1", "y1_1": "-y1"})) == "-y1*d/dy1_1 - d/dy1"


# prolongations

def test_prolong_vertical_examples():
    assert prolong_vertical(VF({"y1": "y"}), 2) == VF({"y1": "y", "y1_1": "y_x", "y1_11": "y_xx"})
    assert prolong_vertical(VF({"y1": "1"}), 3) == VF({"y1": "1"})
    assert prolong_vertical(VectorField(), 2).is_zero()


def test_prolong_vertical_rejects_jet_dependence():
    with pytest.raises(ValueError):
        prolong_vertical(VF({"y1": "y_x"}), 1)


def test_sharp_order_three_table():
    rows = {
        "": {"y1": "1"},
        "1": {"y1_1": "y_x", "y1_11": "y_xx", "y1_111": "y_xxx"},
        "11": {"y1_11": "y_x^2", "y1_111": "3*y_x*y_xx"},
        "111": {"y1_111": "y_x^3"},
    }
    for dirs, expected in rows.items():
        assert sharp(T({(1, dirs): 1}, 3, "target"), 1) == VF(expected)


def test_sharp_single_first_order_component():
    assert sharp(T({(2, "1"): 1}, 1, "target", 2), 1) == VF({"y2_1": "y1_x"})
    assert sharp(T({}, 2, "target", 2), 1).is_zero()


def test_flat_order_three_table():
    rows = {
        "1": {"y1_1": "y_x", "y1_11": "2*y_xx", "y1_111": "3*y_xxx"},
        "11": {"y1_11": "y_x", "y1_111": "3*y_xx"},
        "111": {"y1_111": "y_x"},
    }
    for dirs, expected in rows.items():
        assert flat(T({(1, dirs): -1}, 3), 1) == VF(expected)


def test_flat_generic_second_order():
    xi = T({(1, ""): P("x1^2 + 1"), (1, "1"): P("x1"), (1, "11"): P("3")}, 2)
    expected = VF({"x1": "x^2 + 1", "y1_1": "-y_x*x", "y1_11": "-(3*y_x + 2*y_xx*x)"})
    assert flat(xi, 1) == expected
    assert flat(T({}, 2), 1).is_zero()


@pytest.mark.parametrize("seed", range(5))
def test_flat_recursion_matches_closed_prolongation_formula(seed):
    # zeta^k_mu = -d_mu(xi^i y^k_i) + xi^i y^k_{mu+1_i}, with d_mu acting on formal jets of xi
    rng = random.Random(seed)
    field = [random_poly_expr(rng, ["x1", "x2"]) for _ in range(2)]
    xi = JetSection.jet_of(field, 2)
    got = flat(xi, 2)
    for k in (1, 2):
        base = sum((field[i] * P(f"y{k}_{i + 1}") for i in range(2)), RatFunc())
        for dirs in ("1", "2", "11", "12", "22"):
            expected = base
            for ch in dirs:
                expected = total_derivative(expected, int(ch))
            expected = -expected + sum((field[i] * P(f"y{k}_{''.join(sorted(dirs + str(i + 1)))}") for i in range(2)), RatFunc())
            assert got.coefficient(f"y{k}_{dirs}") == expected


@pytest.mark.parametrize("seed", range(5))
def test_sharp_of_holonomic_section_is_prolongation(seed):
    rng = random.Random(seed)
    field = [random_poly_expr(rng, ["y1", "y2"]) for _ in range(2)]
    eta = JetSection.jet_of(field, 2, over="target")
    assert sharp(eta, 2) == prolong_vertical(VectorField({"y1": field[0], "y2": field[1]}), 2, 2)


# Spencer operator

def test_spencer_examples():
    d = spencer(T({(1, "1"): -1}, 2))
    assert d.entries == {(1, "", 1): 1, (1, "1", 1): 0}
    assert spencer(JetSection.jet_of([P("x^2")], 2)).is_zero()
    assert spencer(T({(1, ""): P("x")}, 2)).entries == {(1, "", 1): 1, (1, "1", 1): 0}


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 2), st.integers(1, 3))
def test_spencer_kills_holonomic_sections(seed, dim, q):
    rng = random.Random(seed)
    field = [random_poly_expr(rng, [f"x{i}" for i in range(1, dim + 1)], degree=3) for _ in range(dim)]
    assert spencer(JetSection.jet_of(field, q)).is_zero()


# brackets

EX_XI = T({(2, ""): P("-x2"), (1, "1"): 1}, 1, dim=2)
EX_ETA = T({(1, ""): 1, (2, "1"): 1, (2, "2"): 1}, 1, dim=2)


def test_algebraic_bracket_order_zero():
    b = algebraic_bracket(EX_XI, EX_ETA)
    assert b.nonzero() == {(1, ""): -1, (2, ""): P("-x2")}
    assert algebraic_bracket(EX_XI, EX_XI).is_zero()


def test_algebroid_bracket_of_printed_sections():
    b = algebroid_bracket(EX_XI, EX_ETA)
    assert b.nonzero() == {(2, "1"): 1}
    x2 = P("x2")
    assert x2 * b[(1, "1")] + b[(2, "")] == 0 and b[(1, "2")] == 0


@pytest.mark.parametrize("seed", range(4))
def test_bracket_of_jets_is_jet_of_bracket(seed):
    rng = random.Random(seed)
    a = [random_poly_expr(rng, ["x1", "x2"]) for _ in range(2)]
    b = [random_poly_expr(rng, ["x1", "x2"]) for _ in range(2)]
    br = bracket_vf(VectorField({"x1": a[0], "x2": a[1]}), VectorField({"x1": b[0], "x2": b[1]}))
    expected = JetSection.jet_of([br.coefficient("x1"), br.coefficient("x2")], 2)
    assert algebroid_bracket(JetSection.jet_of(a, 2), JetSection.jet_of(b, 2)) == expected
    assert algebraic_bracket(JetSection.jet_of(a, 3), JetSection.jet_of(b, 3)) == expected


@pytest.mark.parametrize("seed", range(8))
def test_lift_independence(seed):
    rng = random.Random(seed)
    xi, eta = random_section(rng, 1, 2), random_section(rng, 1, 2)
    lift = random_section(rng, 2, 2)
    xi_lift = xi.lift({key: v for key, v in lift.components.items() if len(key[1]) == 2})
    assert algebroid_bracket(xi, eta) == algebroid_bracket(xi, eta, (xi_lift, None))


def test_bad_lift_rejected():
    with pytest.raises(ValueError):
        algebroid_bracket(EX_XI, EX_ETA, (EX_ETA.lift(), None))


@pytest.mark.parametrize("seed", range(5))
def test_jacobi_and_antisymmetry(seed):
    rng = random.Random(seed)
    a, b, c = (random_section(rng, 1, 2) for _ in range(3))
    br = algebroid_bracket
    assert br(a, b) == -br(b, a)
    assert (br(a, br(b, c)) + br(b, br(c, a)) + br(c, br(a, b))).is_zero()


@pytest.mark.parametrize("seed", range(4))
def test_sharp_and_flat_are_bracket_morphisms(seed):
    rng = random.Random(seed)
    e1, e2 = random_section(rng, 2, 2, "target"), random_section(rng, 2, 2, "target")
    assert bracket_vf(sharp(e1, 1), sharp(e2, 1)) == sharp(algebroid_bracket(e1, e2), 1)
    s1, s2 = random_section(rng, 2, 2), random_section(rng, 2, 2)
    assert bracket_vf(flat(s1, 1), flat(s2, 1)) == flat(algebroid_bracket(s1, s2), 1)


@pytest.mark.parametrize("seed", range(4))
def test_source_and_target_fields_commute(seed):
    rng = random.Random(seed)
    xi, eta = random_section(rng, 2, 1), random_section(rng, 2, 2, "target")
    assert bracket_vf(flat(xi, 2), sharp(eta, 1)).is_zero()


# formal Lie derivative and identities

def test_formal_lie_derivative_on_printed_data():
    xi2 = EX_XI.lift()
    direct = algebroid_bracket(EX_XI, EX_ETA, (xi2, None)) + contraction(EX_ETA, spencer(xi2))
    assert formal_lie_derivative(xi2, EX_ETA) == direct
    assert formal_lie_derivative(xi2, EX_ETA) == formal_lie_derivative_alt(xi2, EX_ETA)


@pytest.mark.parametrize("seed", range(4))
def test_formal_lie_derivative_rewritings_agree(seed):
    rng = random.Random(seed)
    xi, eta = random_section(rng, 2, 2), random_section(rng, 1, 2)
    lift = eta.lift({(1, "11"): P("x1"), (2, "12"): P("x2^2")})
    assert formal_lie_derivative(xi, eta) == formal_lie_derivative_alt(xi, eta, lift)


def test_formal_lie_derivative_of_holonomic_section_has_no_correction():
    xi = JetSection.jet_of([P("x1^2"), P("x1*x2")], 2)
    eta = random_section(random.Random(1), 1, 2)
    assert formal_lie_derivative(xi, eta) == algebroid_bracket(xi.truncate(1), eta, (xi, None))


@pytest.mark.parametrize("phi", ["y", "y_x", "y*y_x^2", "y_x^3/y", "x*y_x + y^2"])
def test_commutation_identity_printed_instance(phi):
    assert commutation_residual(P(phi), T({(1, "1"): -1}, 2), "source") == 0


def test_commutation_identity_reduces_to_explicit_formula():
    # the printed instance with d(xi) = (1, 0) and Phi = Phi(y, y_x)
    phi = P("y^2*y_x + y_x^3")
    lhs = VF({"y1_1": "y_x", "y1_11": "2*y_xx"})(P("y_x") * phi.diff("y1") + P("y_xx") * phi.diff("y1_1"))
    rhs = total_derivative(P("y_x") * phi.diff("y1_1"), 1) + total_derivative(phi, 1)
    assert lhs == rhs


@pytest.mark.parametrize("seed", range(4))
@pytest.mark.parametrize("side", ["source", "target"])
def test_commutation_identity_random(seed, side):
    rng = random.Random(seed)
    section = random_section(rng, 2, 2, side)
    phis = ["y1*y2_1", "y1_1^2 + y2", "x1*y2_2/y1", "y1_2*y2_1"] if side == "source" else ["y2*y1_1", "y1_1^2/y2", "x1*y1*y2_1"]
    for phi in phis:
        for i in (1, 2) if side == "source" else (1,):
            assert commutation_residual(P(phi), section, side, i, 2 if side == "source" else 1) == 0


def test_commutation_identity_target_prolonged_generators():
    phi = P("y2*y1_x")
    for field in (["1", "0"], ["0", "y2"], ["y1", "0"]):
        eta = JetSection.jet_of([P(c) for c in field], 2, over="target")
        assert commutation_residual(phi, eta, "target", 1, 1) == 0


@pytest.mark.parametrize("seed", range(3))
def test_contraction_derivation_identity(seed):
    rng = random.Random(seed)
    xi, eta = random_section(rng, 3, 2), random_section(rng, 3, 2)
    for zeta in (["1", "0"], ["3", "-2"], ["x1", "x2^2"]):
        assert bracket_contraction_residual(xi, eta, zeta).is_zero()


@pytest.mark.parametrize("seed", range(3))
def test_spencer_operator_is_compatible_with_lie_derivatives(seed):
    rng = random.Random(seed)
    xi, eta = random_section(rng, 2, 2), random_section(rng, 2, 2)
    for zeta in (["1", "0"], ["x2", "x1^2"]):
        assert spencer_lie_residual(xi, eta, zeta).is_zero()


def test_contraction_identity_fails_for_the_algebroid_bracket():
    # with Spencer correction terms the naive derivation rule picks up extra terms
    rng = random.Random(3)
    xi, eta = random_section(rng, 2, 2), random_section(rng, 2, 2)
    z = [RatFunc.const(1), RatFunc()]
    lhs = contraction(z, spencer(algebroid_bracket(xi, eta)))
    rhs = algebroid_bracket(contraction(z, spencer(xi)), eta.truncate(1), (None, eta)) + algebroid_bracket(
        xi.truncate(1), contraction(z, spencer(eta)), (xi, None)
    )
    assert lhs != rhs


# serialisation

def test_section_json_round_trip():
    sec = random_section(random.Random(0), 2, 2, "target")
    data = json.loads(json.dumps(sec.to_json()))
    assert JetSection.from_json(data) == sec


def test_section_shape_validation():
    with pytest.raises(ValueError):
        JetSection({(3, ""): 1}, 1, "source", 2)
    with pytest.raises(ValueError):
        JetSection({(1, "111"): 1}, 2, "source", 1)

"""Acceptance checks, one test per criterion, all bit-exact.

The terminal summary (see conftest.py) prints one pass/fail line per test here.
"""

import random
from fractions import Fraction

import sympy

from dgal.dist import (
    Distribution,
    bar_extend_all,
    commutant_search,
    commutes,
    freeness_probe,
    is_invariant,
    is_tensor_constant,
    span_coefficients,
    stability_check,
    symbol_distribution,
)
from dgal.exactalg import RatFunc, generic_rank
from dgal.fieldops import (
    JetSection,
    VectorField,
    algebroid_bracket,
    commutation_residual,
    flat,
    prolong_vertical,
    sharp,
    spencer,
)
from dgal.galois import (
    QQ,
    FiniteRationalGroup,
    FractionField,
    NumberField,
    bezout,
    crt_decomposition,
    cubic_discriminant,
    generating_invariant_check,
    hopf_comorphisms,
    is_galois,
    multiplicative_law,
    qpoly,
    rational_map,
    split_tensor,
)
from dgal.jets import JetContext, parse_expr as P, prolong_linear_system, total_derivative
from dgal.scenarios.props import JACOBI_SHAPES, SMALL_SHAPES, random_poly, run_suite

from conftest import to_sympy

D = Distribution.of
VF = VectorField
T = JetSection.from_values


def sections_equal_span(basis, expected):
    """Q-span equality of two lists of vector fields, via generic weights."""
    support = sorted({v for f in basis + expected for v in f.support()})
    w = {v: RatFunc.var(f"w{k}") for k, v in enumerate(support)}

    def flatten(f):
        return sum((w[v] * f.coefficient(v) for v in support), RatFunc())

    fb, fe = [flatten(f) for f in basis], [flatten(f) for f in expected]
    return all(span_coefficients(f, fb) is not None and span_coefficients(f, fb)[0] == 0 for f in fe) and all(
        span_coefficients(f, fe) is not None and span_coefficients(f, fe)[0] == 0 for f in fb
    )


def test_01_cubic_discriminants():
    # y^3 - w1 y^2 + w2 y - w3
    assert cubic_discriminant(0, -3, -1) == 81
    assert cubic_discriminant(0, 1, -1) == -31
    rng = random.Random(1)
    y = sympy.Symbol("y")
    for _ in range(50):
        w = [Fraction(rng.randint(-20, 20), rng.randint(1, 6)) for _ in range(3)]
        p = y ** 3 - sympy.Rational(w[0].numerator, w[0].denominator) * y ** 2 \
            + sympy.Rational(w[1].numerator, w[1].denominator) * y - sympy.Rational(w[2].numerator, w[2].denominator)
        res = sympy.resultant(p, sympy.diff(p, y), y)
        assert cubic_discriminant(*w) == -Fraction(str(res))


def test_02_galois_splitting():
    L = NumberField(qpoly([1, -3, 0, 1]), "eta")
    s = split_tensor(L)
    assert s.component_degrees() == [1, 1, 1]
    sigma = s.isolated_isomorphisms[1]
    assert sigma.image == L.gen ** 2 - 2
    assert (sigma ** 3).is_identity()
    assert s.is_galois() and is_galois(L)
    s2 = split_tensor(NumberField(qpoly([-2, 0, 0, 1]), "eta"))
    assert s2.component_degrees() == [1, 2]
    assert not s2.is_galois()


def test_03_bezout_and_crt():
    P1, P2 = qpoly([-1, 1]), qpoly([1, 1, 1])
    u, v = bezout(P1, P2)
    assert u == qpoly([Fraction(-2, 3), Fraction(-1, 3)])
    assert v == qpoly([Fraction(1, 3)])
    assert u * P1 + v * P2 == qpoly([1])
    comps = crt_decomposition(qpoly([-1, 0, 0, 0, 0, 0, 0, 0, 1], "a"))
    assert [c.modulus for c in comps] == [
        qpoly([-1, 1], "a"), qpoly([1, 1], "a"), qpoly([1, 0, 1], "a"), qpoly([1, 0, 0, 0, 1], "a"),
    ]


def _phs_case(field, maps, phi):
    F = FractionField(field, "y")
    G = FiniteRationalGroup.of(F, [rational_map(t, F) for t in maps])
    chk = generating_invariant_check(G, rational_map(phi, F))
    assert chk.passed
    # independent route: sympy numerator of Phi(ybar) - Phi(y) divided by the orbit product
    y, yb, i = sympy.symbols("y ybar I")
    loc = {"y": y, "i": sympy.I}
    ph = sympy.sympify(phi.replace("^", "**"), locals=loc)
    num = sympy.numer(sympy.together(ph.subs(y, yb) - ph))
    orbit = sympy.Integer(1)
    for t in maps:
        orbit *= yb - sympy.sympify(t.replace("^", "**"), locals=loc)
    q = sympy.cancel(num / orbit)
    assert sympy.diff(q, yb) == 0
    return chk


def test_04_principal_homogeneous_factorizations():
    _phs_case(QQ, ["y", "1 - 1/y", "1/(1 - y)"], "(y^3 - 3*y + 1)/(y^2 - y)")
    _phs_case(QQ, ["y", "1/y"], "y + 1/y")
    Qi = NumberField(qpoly([1, 0, 1]), "i")
    chk = _phs_case(Qi, ["y", "-y", "i/y", "-i/y"], "(y^4 - 1)/y^2")
    assert chk.numerator.degree == 4


def test_05_jacobi_and_lift_independence():
    for name in ("jacobi", "lift-independence"):
        counts = run_suite(name, 2026, 100, JACOBI_SHAPES)
        assert [c.shape for c in counts] == list(JACOBI_SHAPES)
        assert all(c.passed == 100 for c in counts), counts


def test_06_bracket_morphisms_and_commuting_images():
    for name in ("bracket-morphisms", "source-target-commute"):
        counts = run_suite(name, 2026, 50, SMALL_SHAPES)
        assert all(c.passed == 50 for c in counts), counts


def test_07_spencer_operator():
    d = spencer(T({(1, "1"): -1}, 2))
    assert d.entries == {(1, "", 1): RatFunc.const(1), (1, "1", 1): RatFunc()}
    rng = random.Random(7)
    for k in range(20):
        n, q = 1 + k % 2, 1 + k % 3
        field = [random_poly(rng, [f"x{i}" for i in range(1, n + 1)], degree=3) for _ in range(n)]
        assert spencer(JetSection.jet_of(field, q + 1)).is_zero()


def test_08_commutation_formula_residuals():
    xi = T({(1, "1"): -1}, 2)
    for phi in ("y_x/y", "y*y_x", "y_x^2"):
        assert commutation_residual(P(phi), xi, "source") == 0
    phi = P("y2*y1_1")
    for field in (["1", "0"], ["0", "y2"], ["y1", "0"], ["y1", "-y2"], ["y1^2", "-2*y1*y2"]):
        eta = JetSection.jet_of(field, 2, "target")
        assert commutation_residual(phi, eta, "target", 1, 1) == 0


PF_THETA1 = D({"y1": "1"}, {"y2": "y2", "y1_1": "-y1_1", "y2_1": "y2_1"}, {"y2_1": "y1_1"})
PF_DELTA1 = D({"y1_1": "y1_1", "y2_1": "y2_1"}, {"y2_1": "y2"})
PF_DELTA2 = D(
    {"y1_1": "y1_1", "y2_1": "y2_1", "y1_11": "2*y1_11", "y2_11": "2*y2_11"},
    {"y2_1": "y2", "y2_11": "2*y2_1"},
    {"y2_11": "y2"},
    {"y1_11": "y1_1", "y2_11": "y2_1"},
)


def test_09_pfaffian_reciprocal_distribution():
    s1 = T({(1, ""): 1}, 1, "target", 2)
    s2 = T({(2, ""): 1, (1, "1"): "-1/y2", (2, "2"): "1/y2"}, 1, "target", 2)
    s3 = T({(2, "1"): 1}, 1, "target", 2)
    assert [sharp(s1), sharp(s2).scale(P("y2")), sharp(s3)] == list(PF_THETA1.generators)
    out = commutes(PF_THETA1, PF_DELTA1)
    assert len(out) == 6 and all(b.is_zero() for b in out)
    assert freeness_probe(PF_DELTA1, 2).degeneracy_certificate == P("y2*y1_1")
    phi = P("y2*y1_1")
    dphi = total_derivative(phi, 1)
    # recomputed by hand: delta_j applied coefficient-wise
    assert PF_DELTA2[0](phi) == phi
    assert PF_DELTA2[1](phi) == 0
    assert PF_DELTA2[0](dphi) == 2 * dphi
    assert PF_DELTA2[1](dphi) == phi
    assert PF_DELTA2[2](dphi) == 0
    assert PF_DELTA2[3](dphi) == phi
    table = stability_check(PF_DELTA2, [phi, dphi])
    assert all(e.in_span and e.coefficients[0] == 0 for e in table)


def test_10_freeness_certificates():
    W = P("y1*y2_1 - y2*y1_1")
    gl2 = Distribution(tuple(prolong_vertical(VF({f"y{k}": f"y{l}"}), 1) for k in (1, 2) for l in (1, 2)))
    assert freeness_probe(gl2, 4).degeneracy_certificate == W
    gamma, upsilon = "y1_1*y1_11 + y2_1*y2_11", "y1_11^2 + y2_11^2"
    sigma = P("y1_1*y2_11 - y2_1*y1_11")
    top = ["y1_11", "y2_11"]
    assert freeness_probe(symbol_distribution([gamma, upsilon], top), 2).degeneracy_certificate == sigma
    assert freeness_probe(symbol_distribution([gamma, sigma], top), 2).degeneracy_certificate == P("y1_1^2 + y2_1^2")

    # unimodular affine group: Phi at order two, then d_x Phi and a new Psi at order three
    gens = [VF({"y1": "1"}), VF({"y2": "1"})]
    sl2 = lambda q: [prolong_vertical(VF(c), q) for c in ({"y1": "y1", "y2": "-y2"}, {"y1": "y2"}, {"y2": "y1"})]
    theta2, theta3 = Distribution(tuple(gens + sl2(2))), Distribution(tuple(gens + sl2(3)))
    phi = P("y1_1*y2_11 - y2_1*y1_11")
    dphi = total_derivative(phi, 1)
    psi = P("y1_11*y2_111 - y2_11*y1_111")
    assert is_invariant(theta2, phi) and is_invariant(theta3, dphi) and is_invariant(theta3, psi)
    j3 = ["y1", "y2", "y1_1", "y2_1", "y1_11", "y2_11", "y1_111", "y2_111"]
    assert 8 - theta3.rank().rank == 3 and 6 - theta2.rank().rank == 1
    jac = lambda fs: generic_rank([[f.diff(v) for v in j3] for f in fs]).rank
    assert jac([phi, dphi]) == 2 and jac([phi, dphi, psi]) == 3
    sym = symbol_distribution([dphi, psi], ["y1_111", "y2_111"])
    assert freeness_probe(sym, 2).degeneracy_certificate == phi


def test_11_tensor_constants():
    affine = bar_extend_all(D({"a1": "a1"}, {"a2": "a1"}))
    assert is_tensor_constant("ba1/a1", affine) and is_tensor_constant("ba2 - ba1/a1*a2", affine)
    gl2 = bar_extend_all(D(
        {"y1": "y1", "y2": "y2"}, {"y1": "y1_1", "y2": "y2_1"}, {"y1_1": "y1", "y2_1": "y2"}, {"y1_1": "y1_1", "y2_1": "y2_1"},
    ))
    res = is_tensor_constant("(y2_1*by1 - y2*by1_1)/(y1*y2_1 - y2*y1_1)", gl2)
    assert res and len(res.residuals) == 4
    rel = [("by1_1", P("y2*y1_1/by2"))]
    ext = bar_extend_all(PF_DELTA1)
    for e in ("y2/by2", "by1_1/y1_1", "by2/y2", "by2_1/y1_1 - y2_1/by1_1"):
        assert is_tensor_constant(e, ext, rel)


def test_12_multiplicative_chain_and_commutant():
    phi = P("y_x/y")
    dphi = total_derivative(phi, 1)
    d1 = VF({"y1_1": "y_x"})
    d2 = VF({"y1_1": "y_x", "y1_11": "2*y_xx"})
    assert d1(phi) == phi and d2(dphi) == 2 * dphi
    theta = D({"y1": "1"}, {"y1_1": "y1_1", "y1_11": "y1_11"}, {"y1_11": "y1_1^2"})
    basis = commutant_search(theta, support=["y1_1", "y1_11"], degree=1)
    assert len(basis) == 2
    assert sections_equal_span(basis, [d2, VF({"y1_11": "y1_1"})])


def test_13_order_three_tables():
    sharp_rows = {
        "": {"y1": "1"},
        "1": {"y1_1": "y_x", "y1_11": "y_xx", "y1_111": "y_xxx"},
        "11": {"y1_11": "y_x^2", "y1_111": "3*y_x*y_xx"},
        "111": {"y1_111": "y_x^3"},
    }
    for dirs, expected in sharp_rows.items():
        assert sharp(T({(1, dirs): 1}, 3, "target"), 1) == VF(expected)
    flat_rows = {
        "1": {"y1_1": "y_x", "y1_11": "2*y_xx", "y1_111": "3*y_xxx"},
        "11": {"y1_11": "y_x", "y1_111": "3*y_xx"},
        "111": {"y1_111": "y_x"},
    }
    for dirs, expected in flat_rows.items():
        assert flat(T({(1, dirs): -1}, 3), 1) == VF(expected)


def test_14_linear_system_and_bracket():
    out = prolong_linear_system([P("x2*y1_1 + y2"), P("y1_2")], JetContext(2, 2, 1))
    assert out.projected == (P("y2_2 + y1_1"),)
    xi = T({(2, ""): "-x2", (1, "1"): 1}, 1, dim=2)
    eta = T({(1, ""): 1, (2, "1"): 1, (2, "2"): 1}, 1, dim=2)
    b = algebroid_bracket(xi, eta)
    for s in (xi, eta, b):
        assert P("x2") * s[(1, "1")] + s[(2, "")] == 0 and s[(1, "2")] == 0


def test_15_hopf_axioms():
    rep = hopf_comorphisms([P("by1/y1")], multiplicative_law)
    assert rep.coassociative and rep.counit and rep.antipode_law
    assert rep.augmentation == (RatFunc.const(1),)
    assert rep.antipode == (P("y1/by1"),)


def test_16_isometries():
    omega = P("y1_1^2 + y2_1^2")
    gamma = P("y1_1*y1_11 + y2_1*y2_11")
    upsilon = P("y1_11^2 + y2_11^2")
    sigma = P("y1_1*y2_11 - y2_1*y1_11")
    assert sigma * sigma + gamma * gamma - omega * upsilon == 0
    assert sympy.expand(to_sympy(sigma) ** 2 + to_sympy(gamma) ** 2 - to_sympy(omega) * to_sympy(upsilon)) == 0
    deltas = D(
        {"y1_1": "y1_1", "y2_1": "y2_1"},
        {"y1_1": "y1_11", "y2_1": "y2_11"},
        {"y1_11": "y1_1", "y2_11": "y2_1"},
        {"y1_11": "y1_11", "y2_11": "y2_11"},
    )
    assert [d(sigma) for d in deltas] == [sigma, 0, 0, sigma]
    assert 2 * gamma == total_derivative(omega, 1)

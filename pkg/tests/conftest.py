import random

import pytest
import sympy
from hypothesis import strategies as st

from dgal.exactalg import MPoly, RatFunc
from dgal.jets import multi_indices_upto
from dgal.fieldops import JetSection, base_coords


def to_sympy(f):
    return sympy.sympify(str(f).replace("^", "**"))


def sympy_equal(f, expr):
    return sympy.cancel(to_sympy(f) - expr) == 0


VARS = ["y1", "y2", "y1_1", "x1"]


@st.composite
def polys(draw, variables=VARS, max_terms=4, max_deg=2):
    p = MPoly()
    for _ in range(draw(st.integers(0, max_terms))):
        c = draw(st.integers(-5, 5))
        mono = MPoly.const(c)
        for v in variables:
            e = draw(st.integers(0, max_deg))
            if e:
                mono = mono * MPoly.var(v) ** e
        p = p + mono
    return p


@st.composite
def ratfuncs(draw, variables=VARS):
    num = draw(polys(variables))
    den = draw(polys(variables).filter(bool))
    return RatFunc(num, den)


def random_poly_expr(rng, coords, degree=2):
    """Integer polynomial of total degree <= ``degree`` in ``coords``."""
    f = RatFunc.const(rng.randint(-3, 3))
    for _ in range(3):
        term = RatFunc.const(rng.randint(-3, 3))
        for _ in range(rng.randint(1, degree)):
            term = term * RatFunc.var(rng.choice(coords))
        f = f + term
    return f


def random_section(rng, q, dim, over="source"):
    coords = base_coords(over, dim)
    comps = {(k, d): random_poly_expr(rng, coords) for k in range(1, dim + 1) for d in multi_indices_upto(dim, q)}
    return JetSection(comps, q, over, dim)


@pytest.fixture
def rng():
    return random.Random(20261016)


# one summary line per acceptance criterion ------------------------------------------

_ACCEPTANCE: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1][len("test_"):]
    if report.failed:
        _ACCEPTANCE[name] = "FAIL"
    elif report.when == "call":
        _ACCEPTANCE.setdefault(name, "PASS")


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE):
        num, _, label = name.partition("_")
        terminalreporter.write_line(f"acceptance {num} {label} {_ACCEPTANCE[name]}")
    passed = sum(v == "PASS" for v in _ACCEPTANCE.values())
    terminalreporter.write_line(f"{passed}/{len(_ACCEPTANCE)} criteria passed")

"""Seeded randomized checks of the bracket, prolongation and Spencer identities."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Iterable

from ..exactalg import RatFunc
from ..fieldops import (
    SOURCE,
    TARGET,
    JetSection,
    algebroid_bracket,
    base_coords,
    bracket_contraction_residual,
    bracket_vf,
    commutation_residual,
    flat,
    sharp,
    spencer,
    spencer_lie_residual,
)
from ..jets import jet_name, multi_indices_upto
from .core import STRUCTURAL, AssertionResult, Report

JACOBI_SHAPES = ((1, 1, 1), (1, 1, 2), (1, 2, 1), (2, 1, 1), (2, 2, 1))
SMALL_SHAPES = tuple((n, m, q) for q in (1, 2) for n in (1, 2) for m in (1, 2))


def random_poly(rng: random.Random, variables, degree: int = 2, terms: int = 3) -> RatFunc:
    f = RatFunc.const(rng.randint(-3, 3))
    for _ in range(terms):
        t = RatFunc.const(rng.randint(-3, 3))
        for _ in range(rng.randint(1, degree)):
            t = t * RatFunc.var(rng.choice(variables))
        f = f + t
    return f


def random_section(rng: random.Random, q: int, dim: int, over: str = SOURCE) -> JetSection:
    coords = base_coords(over, dim)
    comps = {(k, d): random_poly(rng, coords) for d in multi_indices_upto(dim, q) for k in range(1, dim + 1)}
    return JetSection(comps, q, over, dim)


def jet_coordinates(n: int, m: int, q: int) -> list[str]:
    out = [f"x{i}" for i in range(1, n + 1)]
    for d in multi_indices_upto(n, q):
        out += [jet_name(k, d) for k in range(1, m + 1)]
    return out


def _jacobi(a, b, c) -> bool:
    br = algebroid_bracket
    return (br(a, br(b, c)) + br(b, br(c, a)) + br(c, br(a, b))).is_zero()


def _random_lift(rng: random.Random, s: JetSection) -> JetSection:
    top = random_section(rng, s.q + 1, s.dim, s.over)
    return s.lift({key: v for key, v in top.components.items() if len(key[1]) == s.q + 1})


# one trial of each identity; every function returns True when it holds exactly

def trial_jacobi(rng, n, m, q) -> bool:
    src = [random_section(rng, q, n, SOURCE) for _ in range(3)]
    tgt = [random_section(rng, q, m, TARGET) for _ in range(3)]
    return _jacobi(*src) and _jacobi(*tgt)


def trial_lift(rng, n, m, q) -> bool:
    ok = True
    for dim, over in ((n, SOURCE), (m, TARGET)):
        a, b = random_section(rng, q, dim, over), random_section(rng, q, dim, over)
        base = algebroid_bracket(a, b)
        ok &= base == algebroid_bracket(a, b, (_random_lift(rng, a), _random_lift(rng, b)))
    return ok


def trial_morphisms(rng, n, m, q) -> bool:
    e1, e2 = random_section(rng, q, m, TARGET), random_section(rng, q, m, TARGET)
    s1, s2 = random_section(rng, q, n, SOURCE), random_section(rng, q, n, SOURCE)
    sharp_ok = bracket_vf(sharp(e1, n), sharp(e2, n)) == sharp(algebroid_bracket(e1, e2), n)
    flat_ok = bracket_vf(flat(s1, m), flat(s2, m)) == flat(algebroid_bracket(s1, s2), m)
    return sharp_ok and flat_ok


def trial_commute(rng, n, m, q) -> bool:
    xi, eta = random_section(rng, q, n, SOURCE), random_section(rng, q, m, TARGET)
    return bracket_vf(flat(xi, m), sharp(eta, n)).is_zero()


def trial_commutation(rng, n, m, q) -> bool:
    phi = random_poly(rng, jet_coordinates(n, m, q), degree=3)
    i = rng.randint(1, n)
    xi = random_section(rng, q + 1, n, SOURCE)
    eta = random_section(rng, q + 1, m, TARGET)
    return not commutation_residual(phi, xi, SOURCE, i, m) and not commutation_residual(phi, eta, TARGET, i, n)


def trial_contraction(rng, n, m, q) -> bool:
    xi, eta = random_section(rng, q + 2, n), random_section(rng, q + 2, n)
    zeta = [random_poly(rng, base_coords(SOURCE, n)) for _ in range(n)]
    return bracket_contraction_residual(xi, eta, zeta).is_zero()


def trial_spencer_lie(rng, n, m, q) -> bool:
    xi, eta = random_section(rng, q + 1, n), random_section(rng, q + 1, n)
    zeta = [random_poly(rng, base_coords(SOURCE, n)) for _ in range(n)]
    return spencer_lie_residual(xi, eta, zeta).is_zero()


def trial_holonomic(rng, n, m, q) -> bool:
    field = [random_poly(rng, base_coords(SOURCE, n), degree=3) for _ in range(n)]
    return spencer(JetSection.jet_of(field, q + 1)).is_zero()


Trial = Callable[[random.Random, int, int, int], bool]

SUITES: dict[str, tuple[Trial, tuple[tuple[int, int, int], ...]]] = {
    "jacobi": (trial_jacobi, JACOBI_SHAPES),
    "lift-independence": (trial_lift, JACOBI_SHAPES),
    "bracket-morphisms": (trial_morphisms, SMALL_SHAPES),
    "source-target-commute": (trial_commute, SMALL_SHAPES),
    "commutation-identity": (trial_commutation, ((1, 1, 1), (1, 2, 1), (2, 1, 1), (1, 1, 2))),
    "bracket-contraction": (trial_contraction, ((1, 1, 0), (1, 1, 1), (2, 1, 0))),
    "spencer-lie": (trial_spencer_lie, ((1, 1, 1), (2, 1, 1))),
    "spencer-holonomic": (trial_holonomic, ((1, 1, 1), (1, 1, 2), (2, 1, 1))),
}


@dataclass(frozen=True)
class SuiteCount:
    suite: str
    shape: tuple[int, int, int]
    passed: int
    trials: int

    @property
    def label(self) -> str:
        n, m, q = self.shape
        return f"{self.suite} (n={n}, m={m}, q={q})"


@dataclass(frozen=True)
class PropertyReport(Report):
    counts: tuple[SuiteCount, ...] = ()

    heading = "properties"

    def to_json(self) -> dict:
        data = super().to_json()
        data["counts"] = [
            {"suite": c.suite, "n": c.shape[0], "m": c.shape[1], "q": c.shape[2], "passed": c.passed, "trials": c.trials}
            for c in self.counts
        ]
        return data


def run_suite(name: str, seed: int, trials: int, shapes: Iterable[tuple[int, int, int]] | None = None) -> list[SuiteCount]:
    trial, default_shapes = SUITES[name]
    out = []
    for shape in default_shapes if shapes is None else shapes:
        # one independent stream per (suite, shape) so subsets reproduce the full run
        rng = random.Random(f"{seed}:{name}:{shape}")
        passed = sum(bool(trial(rng, *shape)) for _ in range(trials))
        out.append(SuiteCount(name, tuple(shape), passed, trials))
    return out


def run_property_suites(seed: int = 42, trials: int = 100, suites: Iterable[str] | None = None) -> PropertyReport:
    if trials < 1:
        raise ValueError("trials must be at least 1")
    names = list(SUITES) if suites is None else list(suites)
    for name in names:
        if name not in SUITES:
            raise KeyError(f"unknown property suite {name!r}")
    counts: list[SuiteCount] = []
    for name in names:
        counts += run_suite(name, seed, trials)
    results = tuple(
        AssertionResult(f"{c.label}: {c.passed}/{c.trials}", c.passed == c.trials, STRUCTURAL, "" if c.passed == c.trials else f"{c.trials - c.passed} failing trials")
        for c in counts
    )
    return PropertyReport(f"seed={seed} trials={trials}", results, (), tuple(counts))

"""Assertion recording, reports and the scenario registry."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable

# Where an expected value comes from.
PRINTED = "printed"  # a value displayed in the worked example being reproduced
STRUCTURAL = "structural"  # forced by definitions (identity maps, zero checks, counts)
RECOMPUTED = "recomputed"  # obtained here by an independent route

PROVENANCES = (PRINTED, STRUCTURAL, RECOMPUTED)


class UnknownScenario(KeyError):
    def __str__(self) -> str:
        return f"unknown scenario {self.args[0]!r}"


def canonical(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(canonical(v) for v in value) + "]"
    return str(value)


@dataclass(frozen=True)
class AssertionResult:
    name: str
    passed: bool
    provenance: str
    residual: str = ""

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "status": self.status,
            "expected_provenance": self.provenance,
            "residual": self.residual,
        }


@dataclass(frozen=True)
class Report:
    scenario: str
    assertions: tuple[AssertionResult, ...]
    notes: tuple[str, ...] = ()

    heading = "scenario"

    @property
    def passed(self) -> bool:
        return all(a.passed for a in self.assertions)

    @property
    def failures(self) -> list[AssertionResult]:
        return [a for a in self.assertions if not a.passed]

    def to_json(self) -> dict:
        return {
            "scenario": self.scenario,
            "assertions": [a.to_json() for a in self.assertions],
            "notes": list(self.notes),
        }

    def to_json_text(self) -> str:
        return json.dumps(self.to_json(), indent=2, ensure_ascii=False, sort_keys=False) + "\n"

    def to_text(self) -> str:
        lines = [f"{self.heading} {self.scenario}: {'PASS' if self.passed else 'FAIL'}"]
        width = max((len(a.name) for a in self.assertions), default=0)
        for a in self.assertions:
            line = f"  [{a.status}] {a.name.ljust(width)}  ({a.provenance})"
            if not a.passed and a.residual:
                line += f"  residual: {a.residual}"
            lines.append(line)
        for n in self.notes:
            lines.append(f"  note: {n}")
        return "\n".join(lines) + "\n"


class Recorder:
    """Collects assertion outcomes while a scenario runs."""

    def __init__(self, scenario: str):
        self.scenario = scenario
        self._results: list[AssertionResult] = []
        self._notes: list[str] = []
        self._names: set[str] = set()

    def _add(self, name: str, ok: bool, provenance: str, residual: str) -> bool:
        if provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {provenance!r}")
        if name in self._names:
            raise ValueError(f"duplicate assertion name {name!r}")
        self._names.add(name)
        self._results.append(AssertionResult(name, bool(ok), provenance, residual))
        return bool(ok)

    def check(self, name: str, ok, provenance: str, detail=None) -> bool:
        """Record a boolean outcome; ``detail`` is shown when it fails."""
        return self._add(name, ok, provenance, "" if ok else canonical(detail))

    def equal(self, name: str, got, expected, provenance: str) -> bool:
        """Exact equality; the residual is ``got - expected`` when that is defined."""
        ok = got == expected
        residual = ""
        if not ok:
            try:
                residual = canonical(got - expected)
            except TypeError:
                residual = f"got {canonical(got)}, expected {canonical(expected)}"
        return self._add(name, ok, provenance, residual)

    def zero(self, name: str, value, provenance: str = STRUCTURAL) -> bool:
        return self._add(name, not value, provenance, canonical(value) if value else "")

    def note(self, text: str) -> None:
        self._notes.append(text)

    def report(self) -> Report:
        return Report(self.scenario, tuple(self._results), tuple(self._notes))


@dataclass(frozen=True)
class Scenario:
    id: str
    topic: str
    summary: str
    body: Callable[[Recorder], None] = field(repr=False)

    def run(self) -> Report:
        rec = Recorder(self.id)
        try:
            self.body(rec)
        except Exception as exc:  # a crash is reported as a failing assertion
            rec._add("scenario completed", False, STRUCTURAL, f"{type(exc).__name__}: {exc}")
        return rec.report()


_REGISTRY: dict[str, Scenario] = {}


def scenario(id: str, topic: str, summary: str):
    def wrap(fn: Callable[[Recorder], None]) -> Callable[[Recorder], None]:
        if id in _REGISTRY:
            raise ValueError(f"scenario {id!r} registered twice")
        _REGISTRY[id] = Scenario(id, topic, summary, fn)
        return fn

    return wrap


def registry() -> dict[str, Scenario]:
    from . import catalog  # noqa: F401  registers on import

    return _REGISTRY


def list_scenarios() -> list[tuple[str, str, str]]:
    return [(s.id, s.topic, s.summary) for s in registry().values()]


def get_scenario(id: str) -> Scenario:
    try:
        return registry()[id]
    except KeyError:
        raise UnknownScenario(id) from None


def run_scenario(id: str) -> Report:
    return get_scenario(id).run()

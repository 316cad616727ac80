"""Executable reproductions of worked examples, property suites and the command line."""

from .core import (
    PRINTED,
    PROVENANCES,
    RECOMPUTED,
    STRUCTURAL,
    AssertionResult,
    Report,
    Scenario,
    UnknownScenario,
    get_scenario,
    list_scenarios,
    run_scenario,
)

__all__ = [
    "PRINTED",
    "PROVENANCES",
    "RECOMPUTED",
    "STRUCTURAL",
    "AssertionResult",
    "Report",
    "Scenario",
    "UnknownScenario",
    "get_scenario",
    "list_scenarios",
    "run_scenario",
]

import json

import pytest

from dgal.scenarios import PROVENANCES, UnknownScenario, get_scenario, list_scenarios, run_scenario
from dgal.scenarios.cli import main
from dgal.scenarios.core import Recorder
from dgal.scenarios.props import SUITES, run_property_suites, run_suite

IDS = [sid for sid, _, _ in list_scenarios()]


def test_registry_is_large_and_stable():
    first = list_scenarios()
    assert len(first) >= 20
    assert first == list_scenarios()
    assert len(set(IDS)) == len(IDS)
    assert all(topic and summary for _, topic, summary in first)


def test_registry_ids_are_lowercase_slugs():
    for sid in IDS:
        assert sid == sid.lower() and " " not in sid and "_" not in sid


@pytest.mark.parametrize("sid", IDS)
def test_scenario_passes(sid):
    rep = run_scenario(sid)
    assert rep.passed, rep.to_text()
    assert rep.assertions
    assert all(a.provenance in PROVENANCES for a in rep.assertions)


def test_unknown_scenario():
    with pytest.raises(UnknownScenario):
        run_scenario("nope")
    with pytest.raises(KeyError):
        get_scenario("nope")


@pytest.mark.parametrize("sid", ["cyclic-cubic", "euclidean-isometries", "pfaffian-groupoid-constants"])
def test_reports_are_byte_identical(sid):
    a, b = run_scenario(sid), run_scenario(sid)
    assert a.to_json_text() == b.to_json_text()
    assert a.to_text() == b.to_text()


def test_json_schema():
    data = json.loads(run_scenario("affine-group-tensor-constants").to_json_text())
    assert set(data) == {"scenario", "assertions", "notes"}
    for a in data["assertions"]:
        assert set(a) == {"name", "status", "expected_provenance", "residual"}
        assert a["status"] in ("pass", "fail")
    assert data["notes"]


def test_discrepancy_notes_are_reported():
    notes = run_scenario("cyclic-cubic").notes
    assert any("-eta^2 - eta + 2" in n for n in notes)


def test_isometry_identity_assertions():
    names = {a.name: a for a in run_scenario("euclidean-isometries").assertions}
    assert names["Sigma^2 + Gamma^2 - Omega Upsilon = 0"].passed
    assert names["Delta Sigma = (Sigma, 0, 0, Sigma)"].passed


def test_failing_assertion_carries_a_residual():
    from dgal.jets import parse_expr as P

    r = Recorder("demo")
    r.equal("wrong", P("y1 + 1"), P("y1"), "recomputed")
    r.zero("nonzero", P("y1_1"))
    rep = r.report()
    assert not rep.passed
    assert [a.residual for a in rep.failures] == ["1", "y1_1"]
    assert "residual: 1" in rep.to_text()


def test_recorder_rejects_bad_input():
    r = Recorder("demo")
    with pytest.raises(ValueError):
        r.check("x", True, "folklore")
    r.check("x", True, "structural")
    with pytest.raises(ValueError):
        r.check("x", True, "structural")


def test_crashing_scenario_is_reported_as_failure():
    from dgal.scenarios.core import Scenario

    def body(r):
        r.check("ok", True, "structural")
        raise ZeroDivisionError("boom")

    rep = Scenario("crash", "t", "s", body).run()
    assert not rep.passed and rep.failures[0].residual == "ZeroDivisionError: boom"


# property suites ---------------------------------------------------------------------

def test_property_suites_small_run_is_deterministic():
    a = run_property_suites(seed=3, trials=2)
    b = run_property_suites(seed=3, trials=2)
    assert a.passed
    assert json.dumps(a.to_json()) == json.dumps(b.to_json())
    assert {c.suite for c in a.counts} == set(SUITES)


def test_subset_reproduces_full_run_counts():
    full = {(c.suite, c.shape): c.passed for c in run_property_suites(seed=5, trials=2).counts}
    part = run_suite("source-target-commute", 5, 2)
    assert all(full[(c.suite, c.shape)] == c.passed for c in part)


def test_property_suite_argument_checks():
    with pytest.raises(ValueError):
        run_property_suites(trials=0)
    with pytest.raises(KeyError):
        run_property_suites(suites=["nope"])


def test_source_target_suite_with_fifty_trials():
    counts = run_suite("source-target-commute", 7, 50, [(1, 2, 1)])
    assert counts[0].passed == counts[0].trials == 50


# command line ------------------------------------------------------------------------

def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cli_scenario_list(capsys):
    code, out, _ = run_cli(capsys, "scenario", "list")
    assert code == 0 and "cyclic-cubic" in out
    code, out, _ = run_cli(capsys, "--format", "json", "scenario", "list")
    assert len(json.loads(out)) == len(IDS)


def test_cli_scenario_run(capsys):
    code, out, _ = run_cli(capsys, "scenario", "run", "cube-roots-of-unity-crt")
    assert code == 0 and out.startswith("scenario cube-roots-of-unity-crt: PASS")
    code, out, _ = run_cli(capsys, "scenario", "run", "cube-roots-of-unity-crt", "--json")
    assert json.loads(out)["scenario"] == "cube-roots-of-unity-crt"


def test_cli_exit_codes(capsys):
    assert run_cli(capsys, "scenario", "run", "nope")[0] == 2
    assert run_cli(capsys, "bogus")[0] == 2
    assert run_cli(capsys, "eval", "--expr", "y1 +")[0] == 2
    assert run_cli(capsys, "spencer", "--file", "/nonexistent.json")[0] == 2


def test_cli_eval(capsys):
    code, out, _ = run_cli(capsys, "eval", "--expr", "y*y_x", "--dx", "1")
    assert code == 0 and out.strip() == "(y1*y1_11 + y1_1^2)"


def test_cli_props(capsys):
    code, out, _ = run_cli(capsys, "--seed", "1", "props", "--trials", "1", "--suite", "spencer-holonomic")
    assert code == 0 and "spencer-holonomic (n=1, m=1, q=1): 1/1" in out


def test_cli_galois(capsys):
    code, out, _ = run_cli(capsys, "galois", "disc", "--poly", "1", "-3", "0", "1")
    assert code == 0 and out.splitlines() == ["discriminant 81", "galois true"]
    code, out, _ = run_cli(capsys, "galois", "split", "--minpoly", "-2", "0", "0", "1")
    assert "galois false" in out
    code, out, _ = run_cli(capsys, "--format", "json", "galois", "factor", "--poly=-1,0,0,0,0,0,0,0,1", "--var", "a")
    assert [f["factor"] for f in json.loads(out)["factors"]] == ["a - 1", "a + 1", "a^2 + 1", "a^4 + 1"]
    code, out, _ = run_cli(capsys, "galois", "group", "--maps", "y", "1/y", "--invariant", "y^2 + 1/y")
    assert code == 1 and "invariant false" in out


def test_cli_files(capsys, tmp_path):
    sec = tmp_path / "xi.json"
    sec.write_text(json.dumps({"order": 2, "over": "source", "dim": 1, "components": {"1|1": "-1"}}))
    code, out, _ = run_cli(capsys, "--format", "json", "spencer", "--file", str(sec))
    assert json.loads(out)["entries"] == {"1||1": "1", "1|1|1": "0"}
    code, out, _ = run_cli(capsys, "prolong", "--file", str(sec), "--order", "2", "--kind", "flat")
    assert out.strip() == "2*y1_11*d/dy1_11 + y1_1*d/dy1_1"

    vf = tmp_path / "v.json"
    vf.write_text(json.dumps({"coefficients": {"y1": "y1"}}))
    code, out, _ = run_cli(capsys, "prolong", "--file", str(vf), "--order", "1", "--kind", "vertical")
    assert out.strip() == "y1_1*d/dy1_1 + y1*d/dy1"

    a, b = tmp_path / "a.json", tmp_path / "b.json"
    a.write_text(json.dumps({"order": 1, "dim": 2, "components": {"2|": "-x2", "1|1": "1"}}))
    b.write_text(json.dumps({"order": 1, "dim": 2, "components": {"1|": "1", "2|1": "1", "2|2": "1"}}))
    code, out, _ = run_cli(capsys, "--format", "json", "bracket", "--a", str(a), "--b", str(b))
    comps = json.loads(out)["components"]
    assert comps["2|1"] == "1" and sum(v != "0" for v in comps.values()) == 1


def test_cli_dist(capsys, tmp_path):
    d = tmp_path / "d.json"
    d.write_text(json.dumps({"generators": [
        {"coefficients": {"y1_1": "y1_1", "y2_1": "y2_1"}},
        {"coefficients": {"y2_1": "y2"}},
    ]}))
    code, out, _ = run_cli(capsys, "dist", "rank", "--file", str(d))
    assert code == 0 and "certificate y2*y1_1" in out
    assert run_cli(capsys, "dist", "involutive", "--file", str(d))[0] == 0
    assert run_cli(capsys, "dist", "invariant", "--file", str(d), "--expr", "y2*y1_1")[0] == 1
    rel = tmp_path / "r.json"
    rel.write_text(json.dumps({"relations": [{"solve_for": "by1_1", "equals": "y2*y1_1/by2"}]}))
    code, out, _ = run_cli(capsys, "dist", "tensor-const", "--file", str(d), "--expr", "by2_1/y1_1 - y2_1/by1_1", "--relations", str(rel))
    assert code == 0
    assert run_cli(capsys, "dist", "tensor-const", "--file", str(d), "--expr", "by2_1/y1_1 - y2_1/by1_1")[0] == 1
    code, out, _ = run_cli(capsys, "dist", "commute", "--theta", str(d), "--delta", str(d))
    assert code == 1
    code, out, _ = run_cli(capsys, "--format", "json", "dist", "commutant", "--file", str(d), "--support", "y1_1", "y2_1")
    assert code == 0 and json.loads(out)

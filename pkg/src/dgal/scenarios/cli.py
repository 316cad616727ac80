"""Command line interface: ``dgal <command> ...``.

Exit status is 0 on success, 1 when a check or predicate fails and 2 on
usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from ..dist import (
    Distribution,
    bar_extend_all,
    commutant_search,
    commutes,
    freeness_probe,
    is_involutive_frobenius,
    is_invariant,
    is_tensor_constant,
    relations_from_json,
)
from ..fieldops import JetSection, VectorField, algebroid_bracket, flat, prolong_vertical, sharp, spencer
from ..galois import (
    FiniteRationalGroup,
    FractionField,
    NotAGroup,
    NumberField,
    cubic_discriminant,
    factor,
    generating_invariant_check,
    is_galois,
    number_field_from_json,
    poly_from_coeffs,
    qpoly,
    rational_map,
    split_tensor,
    verify_group,
)
from ..jets import parse_expr, total_derivative
from .core import UnknownScenario, list_scenarios, run_scenario
from .props import SUITES, run_property_suites

OK, FAILED, USAGE = 0, 1, 2


class InputError(Exception):
    pass


def _load_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc.msg})") from None


def _emit(args, text: str, data) -> None:
    if args.format == "json":
        sys.stdout.write(json.dumps(data, indent=2, ensure_ascii=False) + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _coeffs(tokens: list[str]) -> list[str]:
    """Coefficients given as separate values or comma lists, lowest degree first."""
    return [c.strip() for t in tokens for c in t.split(",") if c.strip()]


def _field(args):
    return number_field_from_json(_load_json(args.field)) if getattr(args, "field", None) else number_field_from_json(None)


# scenario and property commands -------------------------------------------------

def cmd_scenario_list(args) -> int:
    rows = list_scenarios()
    text = "\n".join(f"{sid:36} {topic}" for sid, topic, _ in rows)
    _emit(args, text, [{"id": s, "topic": t, "summary": m} for s, t, m in rows])
    return OK


def cmd_scenario_run(args) -> int:
    rep = run_scenario(args.id)
    if args.json or args.format == "json":
        sys.stdout.write(rep.to_json_text())
    else:
        sys.stdout.write(rep.to_text())
    return OK if rep.passed else FAILED


def cmd_props(args) -> int:
    rep = run_property_suites(args.seed, args.trials, args.suite)
    if args.format == "json":
        sys.stdout.write(json.dumps(rep.to_json(), indent=2) + "\n")
    else:
        sys.stdout.write(rep.to_text())
    return OK if rep.passed else FAILED


# jets and sections --------------------------------------------------------------

def cmd_eval(args) -> int:
    f = parse_expr(args.expr)
    for i in args.dx or []:
        f = total_derivative(f, i)
    _emit(args, str(f), {"result": str(f)})
    return OK


def cmd_prolong(args) -> int:
    data = _load_json(args.file)
    if args.kind == "vertical":
        field = prolong_vertical(VectorField.from_json(data), args.order, int(data.get("n", 1)))
    elif args.kind == "horizontal":
        comps = data["field"]
        field = flat(JetSection.jet_of(comps, args.order), int(data.get("m", 1)))
    elif args.kind == "sharp":
        field = sharp(JetSection.from_json(data), int(data.get("n", 1)), args.order)
    else:
        field = flat(JetSection.from_json(data), int(data.get("m", 1)), args.order)
    _emit(args, str(field), field.to_json())
    return OK


def cmd_bracket(args) -> int:
    a, b = JetSection.from_json(_load_json(args.a)), JetSection.from_json(_load_json(args.b))
    if args.order is not None:
        a, b = a.truncate(args.order), b.truncate(args.order)
    out = algebroid_bracket(a, b)
    _emit(args, str(out), out.to_json())
    return OK


def cmd_spencer(args) -> int:
    img = spencer(JetSection.from_json(_load_json(args.file)))
    data = img.to_json()
    text = "\n".join(f"{k}: {v}" for k, v in data["entries"].items()) or "0"
    _emit(args, text, data)
    return OK


# distributions ------------------------------------------------------------------

def _dist(path: str) -> Distribution:
    return Distribution.from_json(_load_json(path))


def cmd_dist_rank(args) -> int:
    D = _dist(args.file)
    rep = freeness_probe(D, args.count if args.count is not None else len(D))
    cert = "" if rep.degeneracy_certificate is None else str(rep.degeneracy_certificate)
    text = f"rank {rep.rank}\nverdict {rep.verdict}\ncertificate {cert}"
    _emit(args, text, {"rank": rep.rank, "verdict": rep.verdict, "certificate": cert})
    return OK if rep.free else FAILED


def cmd_dist_involutive(args) -> int:
    res = is_involutive_frobenius(_dist(args.file))
    data = {"involutive": bool(res)}
    if not res:
        data["pair"] = list(res.pair)
        data["witness"] = res.witness.to_json()
    text = "involutive" if res else f"not involutive: pair {res.pair}, witness {res.witness}"
    _emit(args, text, data)
    return OK if res else FAILED


def cmd_dist_commute(args) -> int:
    T, D = _dist(args.theta), _dist(args.delta)
    out = commutes(T, D)
    nonzero = [(i // len(D), i % len(D), str(b)) for i, b in enumerate(out) if not b.is_zero()]
    text = "commute" if not nonzero else "\n".join(f"[{i}, {j}] = {b}" for i, j, b in nonzero)
    _emit(args, text, {"commute": not nonzero, "brackets": [{"theta": i, "delta": j, "value": b} for i, j, b in nonzero]})
    return OK if not nonzero else FAILED


def cmd_dist_commutant(args) -> int:
    basis = commutant_search(_dist(args.file), support=args.support, degree=args.degree)
    _emit(args, "\n".join(str(b) for b in basis) or "empty", [b.to_json() for b in basis])
    return OK


def cmd_dist_invariant(args) -> int:
    res = is_invariant(_dist(args.file), args.expr)
    residuals = [str(r) for r in res.residuals]
    _emit(args, "invariant" if res else "residuals " + ", ".join(residuals), {"invariant": bool(res), "residuals": residuals})
    return OK if res else FAILED


def cmd_dist_tensor_const(args) -> int:
    D = bar_extend_all(_dist(args.file))
    rel = relations_from_json(_load_json(args.relations)) if args.relations else []
    res = is_tensor_constant(args.expr, D, rel)
    residuals = [str(r) for r in res.residuals]
    _emit(args, "tensor constant" if res else "residuals " + ", ".join(residuals), {"constant": bool(res), "residuals": residuals})
    return OK if res else FAILED


# Galois computations ---------------------------------------------------------------

def cmd_galois_factor(args) -> int:
    K = _field(args)
    p = poly_from_coeffs(_coeffs(args.poly), K, args.var)
    fac = factor(p)
    items = [{"factor": str(f), "multiplicity": m} for f, m in fac.factors]
    text = "\n".join([f"unit {fac.unit}"] + [f"({i['factor']})^{i['multiplicity']}" for i in items])
    _emit(args, text, {"unit": str(fac.unit), "factors": items})
    return OK


def cmd_galois_split(args) -> int:
    L = NumberField(poly_from_coeffs(_coeffs(args.minpoly), _field(args), args.gen), args.gen, _field(args))
    s = split_tensor(L)
    data = {
        "factors": [str(f) for f in s.factors],
        "degrees": s.component_degrees(),
        "galois": s.is_galois(),
        "isomorphisms": [str(t) for t in s.isolated_isomorphisms],
    }
    text = "\n".join(data["factors"] + [f"galois {str(data['galois']).lower()}"] + data["isomorphisms"])
    _emit(args, text, data)
    return OK


def cmd_galois_group(args) -> int:
    F = FractionField(_field(args), "y")
    G = FiniteRationalGroup.of(F, [rational_map(t, F) for t in args.maps])
    v = verify_group(G)
    data = {"order": v.order, "abelian": v.abelian, "cyclic": v.cyclic, "table": [list(r) for r in v.table]}
    lines = [f"order {v.order}", f"abelian {str(v.abelian).lower()}", f"cyclic {str(v.cyclic).lower()}"]
    status = OK
    if args.invariant:
        chk = generating_invariant_check(G, rational_map(args.invariant, F))
        data["invariant"] = {"invariant": chk.invariant, "generating": chk.passed, "orbit_product": str(chk.orbit_product)}
        lines += [f"invariant {str(chk.invariant).lower()}", f"generating {str(chk.passed).lower()}", f"orbit product {chk.orbit_product}"]
        status = OK if chk.passed else FAILED
    _emit(args, "\n".join(lines), data)
    return status


def cmd_galois_disc(args) -> int:
    c = [Fraction(x) for x in _coeffs(args.poly)]
    if len(c) != 4 or c[3] != 1:
        raise InputError("disc expects a monic cubic, coefficients lowest degree first")
    d = cubic_discriminant(-c[2], c[1], -c[0])
    try:
        galois = is_galois(NumberField(qpoly(c), "t"))
    except ValueError:
        galois = None
    _emit(args, f"discriminant {d}" + ("" if galois is None else f"\ngalois {str(galois).lower()}"),
          {"discriminant": str(d), "galois": galois})
    return OK


# parser --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "json"], default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)

    p = argparse.ArgumentParser(prog="dgal", description="Exact jets, Lie algebroids and Galois-type splittings.")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--seed", type=int, default=42)
    sub = p.add_subparsers(dest="command", required=True)

    def add(parent, name, func, help=None):
        sp = parent.add_parser(name, parents=[common], help=help)
        sp.set_defaults(func=func)
        return sp

    sc = sub.add_parser("scenario", help="list or run worked reproductions").add_subparsers(dest="action", required=True)
    add(sc, "list", cmd_scenario_list)
    run = add(sc, "run", cmd_scenario_run)
    run.add_argument("id")
    run.add_argument("--json", action="store_true")

    props = add(sub, "props", cmd_props, "seeded randomized identity checks")
    props.add_argument("--trials", type=int, default=100)
    props.add_argument("--suite", action="append", choices=sorted(SUITES))

    ev = add(sub, "eval", cmd_eval, "parse an expression and apply total derivatives")
    ev.add_argument("--expr", required=True)
    ev.add_argument("--dx", type=int, action="append", help="direction of a total derivative; repeatable")

    pr = add(sub, "prolong", cmd_prolong, "prolong a field or section to jet space")
    pr.add_argument("--file", required=True)
    pr.add_argument("--order", type=int, required=True)
    pr.add_argument("--kind", choices=["vertical", "horizontal", "sharp", "flat"], required=True)

    br = add(sub, "bracket", cmd_bracket, "algebroid bracket of two sections")
    br.add_argument("--a", required=True)
    br.add_argument("--b", required=True)
    br.add_argument("--order", type=int)

    sp = add(sub, "spencer", cmd_spencer, "Spencer operator of a section")
    sp.add_argument("--file", required=True)

    dist = sub.add_parser("dist", help="distribution queries").add_subparsers(dest="action", required=True)
    d = add(dist, "rank", cmd_dist_rank)
    d.add_argument("--file", required=True)
    d.add_argument("--count", type=int)
    d = add(dist, "involutive", cmd_dist_involutive)
    d.add_argument("--file", required=True)
    d = add(dist, "commute", cmd_dist_commute)
    d.add_argument("--theta", required=True)
    d.add_argument("--delta", required=True)
    d = add(dist, "commutant", cmd_dist_commutant)
    d.add_argument("--file", required=True)
    d.add_argument("--support", nargs="+")
    d.add_argument("--degree", type=int, default=1)
    d = add(dist, "invariant", cmd_dist_invariant)
    d.add_argument("--file", required=True)
    d.add_argument("--expr", required=True)
    d = add(dist, "tensor-const", cmd_dist_tensor_const)
    d.add_argument("--file", required=True)
    d.add_argument("--expr", required=True)
    d.add_argument("--relations")

    gal = sub.add_parser("galois", help="number fields and finite groups of maps").add_subparsers(dest="action", required=True)
    g = add(gal, "factor", cmd_galois_factor)
    g.add_argument("--poly", nargs="+", required=True, help="coefficients, lowest degree first")
    g.add_argument("--field", help="JSON descriptor of the coefficient field")
    g.add_argument("--var", default="y")
    g = add(gal, "split", cmd_galois_split)
    g.add_argument("--minpoly", nargs="+", required=True, help="coefficients, lowest degree first")
    g.add_argument("--gen", default="eta")
    g.add_argument("--field")
    g = add(gal, "group", cmd_galois_group)
    g.add_argument("--maps", nargs="+", required=True)
    g.add_argument("--invariant")
    g.add_argument("--field")
    g = add(gal, "disc", cmd_galois_disc)
    g.add_argument("--poly", nargs="+", required=True, help="monic cubic, lowest degree first")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (InputError, UnknownScenario, NotAGroup, KeyError, ValueError, ZeroDivisionError) as exc:
        print(f"dgal: error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())

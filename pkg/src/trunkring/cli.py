"""Command-line front end.

Exit status: 0 success, 1 negative answer under ``--exit-status``, 2 usage or
input error, 3 internal error (for example an oracle disagreement).
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Sequence

import numpy as np

from . import decomposer, fields, hensel
from .errors import InputError, TrunkringError
from .formula.ast import free_vars
from .formula.evaluate import DEFAULT_BUDGET, evaluate, truth_table
from .formula.parser import parse
from .formula.tp2 import tp2_witness
from .ring import Modulus
from .toag import (
    check_presburger_toag,
    check_toag_axioms,
    decide_toag_formula,
    modular_table,
    realize_as_initial_segment,
)

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3
SOLUTION_LIMIT = 1000


class Outcome:
    """Result of a subcommand: JSON payload, text lines and a yes/no verdict."""

    def __init__(self, payload: dict, text: str, positive: bool = True):
        self.payload = payload
        self.text = text
        self.positive = positive


def _budget(args) -> Optional[int]:
    if args.budget is not None:
        return args.budget
    env = os.environ.get("TRUNKRING_BUDGET")
    if env:
        try:
            return int(env)
        except ValueError:
            raise InputError(f"TRUNKRING_BUDGET must be an integer, got {env!r}") from None
    return DEFAULT_BUDGET


def _assignment(pairs: Sequence[str]) -> dict[str, int]:
    out = {}
    for pair in pairs or ():
        name, sep, value = pair.partition("=")
        if not sep:
            raise InputError(f"assignment {pair!r} must look like name=value")
        try:
            out[name.strip()] = int(value)
        except ValueError:
            raise InputError(f"value of {name!r} must be an integer, got {value!r}") from None
    return out


def _modulus_spec(text: str) -> Modulus:
    for sep in ("^", ":"):
        if sep in text:
            p, k = text.split(sep, 1)
            return Modulus(int(p), int(k))
    raise InputError(f"modulus {text!r} must look like P^K")


def _poly(args, modulus: Modulus) -> hensel.Poly:
    return hensel.Poly.from_ints(args.coeffs, modulus)


# -- handlers ----------------------------------------------------------------


def cmd_solve(args) -> Outcome:
    m = Modulus(args.p, args.k)
    f = _poly(args, m)
    beta = hensel.hensel_lift(f, args.alpha)
    payload = {"modulus": m.to_dict(), "poly": f.to_dict(), "alpha": str(args.alpha), "root": beta.to_dict()}
    return Outcome(payload, str(beta.rep))


def cmd_roots(args) -> Outcome:
    m = Modulus(args.p, args.k)
    f = _poly(args, m)
    roots = sorted(r.rep for r in hensel.all_roots(f, cap=args.cap))
    payload = {"modulus": m.to_dict(), "poly": f.to_dict(), "roots": [str(r) for r in roots], "count": len(roots)}
    return Outcome(payload, " ".join(map(str, roots)) if roots else "(none)", bool(roots))


def cmd_decide(args) -> Outcome:
    m = Modulus(args.p, args.k)
    phi = parse(args.formula)
    assignment = _assignment(args.assign)
    free = [v for v in free_vars(phi) if v not in assignment]
    if not free:
        value = evaluate(phi, m, assignment, budget=_budget(args))
        payload = {"modulus": m.to_dict(), "formula": args.formula, "value": value}
        return Outcome(payload, "true" if value else "false", value)
    domains = {v: [x] for v, x in assignment.items()}
    names = free + list(assignment)
    table = truth_table(phi, m, names, domains, budget=_budget(args))
    sols = [dict(zip(names, (int(i) for i in idx))) for idx in np.argwhere(table)]
    for s in sols:
        for v, x in assignment.items():
            s[v] = x % m.n
    payload = {
        "modulus": m.to_dict(),
        "formula": args.formula,
        "variables": free,
        "count": len(sols),
        "solutions": [{v: str(x) for v, x in s.items()} for s in sols[:SOLUTION_LIMIT]],
        "truncated": len(sols) > SOLUTION_LIMIT,
    }
    lines = [", ".join(f"{v}={s[v]}" for v in free) for s in sols[:SOLUTION_LIMIT]]
    return Outcome(payload, "\n".join(lines) if lines else "(no solutions)", bool(sols))


def cmd_toag_check(args) -> Outcome:
    structure = modular_table(args.tau) if args.table == "modular" else args.tau
    if args.presburger:
        rep = check_presburger_toag(structure, n_bound=args.n_bound)
        text = f"presburger-toag tau={args.tau}: {'holds' if rep.holds else 'fails'}"
        if rep.failing_axioms:
            text += f" (failing axioms: {', '.join(map(str, rep.failing_axioms))})"
        return Outcome(rep.to_dict(), text, rep.holds)
    mode = "sample" if args.sample else "exhaustive"
    rep = check_toag_axioms(structure, mode, seed=args.seed, count=args.sample or 0)
    lines = []
    for r in rep.results:
        line = f"axiom {r.axiom_id:>2} {r.status:<11} {r.name}"
        if r.flag:
            line += f" [{r.flag}]"
        if r.counterexample:
            line += f" counterexample {r.counterexample}"
        lines.append(line)
    lines.append(f"overall: {'pass' if rep.passed else 'fail'}")
    return Outcome(rep.to_dict(), "\n".join(lines), rep.passed)


def cmd_toag_decide(args) -> Outcome:
    res = decide_toag_formula(args.formula, args.tau, _assignment(args.assign))
    if isinstance(res, bool):
        payload = {"tau": args.tau, "formula": args.formula, "value": res}
        return Outcome(payload, "true" if res else "false", res)
    payload = {"formula": args.formula, **res.to_dict(SOLUTION_LIMIT)}
    text = f"{payload['quantifier_free']}\n{payload['count']} solution(s)"
    return Outcome(payload, text, payload["count"] > 0)


def cmd_toag_realize(args) -> Outcome:
    emb = realize_as_initial_segment(args.tau)
    text = f"[0, {args.tau}] = initial segment [0, {emb.tau_gamma}] of {emb.group}: {'verified' if emb.verified else 'mismatch'}"
    return Outcome(emb.to_dict(), text, emb.verified)


def cmd_field_sol(args) -> Outcome:
    n = len(args.coeffs) - 1
    roots = fields.sol_roots(n, args.coeffs, args.p)
    payload = {"p": str(args.p), "n": n, "coeffs": [str(c) for c in args.coeffs], "value": bool(roots), "roots": [str(r) for r in roots]}
    return Outcome(payload, ("true " + " ".join(map(str, roots))) if roots else "false", bool(roots))


def cmd_field_irreducible(args) -> Outcome:
    count = fields.count_irreducible_monic(args.p, args.n)
    payload = {"p": str(args.p), "n": args.n, "count": str(count)}
    text = str(count)
    if args.exhaustive:
        found = len(fields.irreducible_monic_exhaustive(args.p, args.n))
        payload["exhaustive"] = found
        payload["agree"] = found == count
        text += f" (exhaustive {found})"
        return Outcome(payload, text, found == count)
    return Outcome(payload, text)


def cmd_field_curve(args) -> Outcome:
    if args.curated:
        results = [fields.curve_point_search(c.curve, args.p) for c in fields.curated_curves() if args.p not in c.excluded]
        payload = {"p": str(args.p), "searches": [r.to_dict() for r in results], "all_found": all(r.found for r in results)}
        lines = [f"{r.curve}: {r.point if r.found else 'no point'}" for r in results]
        return Outcome(payload, "\n".join(lines), payload["all_found"])
    if not args.curve:
        raise InputError("give a curve or --curated")
    curve = fields.PlaneCurve.parse(args.curve, projective=args.projective)
    res = fields.curve_point_search(curve, args.p)
    text = f"point {res.point}" + (" (at infinity)" if res.at_infinity else "") if res.found else "no point"
    return Outcome(res.to_dict(), text, res.found)


def cmd_invariants(args) -> Outcome:
    f = decomposer.elementary_invariants(Modulus(args.p, args.k))
    cong = ", ".join(f"{n}:{r}" for n, r in f.congruences[:6])
    text = f"p={f.p} k={f.k} penultimate={f.penultimate} residues mod 2..7 [{cong}]"
    return Outcome(f.to_dict(), text)


def cmd_compare(args) -> Outcome:
    r = decomposer.same_theory(_modulus_spec(args.m1), _modulus_spec(args.m2), budget=_budget(args))
    text = "same theory" if r.same else f"different; witness {r.witness} is {r.values[0]} / {r.values[1]}"
    return Outcome(r.to_dict(), text, r.same)


def cmd_decompose_power(args) -> Outcome:
    m = Modulus(args.p, args.k)
    dec = decomposer.nth_power_decomposition(args.n, m)
    if args.drop_parity:
        dec = decomposer.parity_dropped(dec)
    return Outcome({"modulus": m.to_dict(), "n": args.n, "decomposition": dec.to_dict()}, str(dec))


def _load_tree(text: str) -> dict:
    if text == "-":
        return json.load(sys.stdin)
    if os.path.exists(text):
        with open(text) as fh:
            return json.load(fh)
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"decomposition is neither a file nor JSON: {e}") from None


def cmd_decompose_verify(args) -> Outcome:
    m = Modulus(args.p, args.k)
    if args.power:
        dec = decomposer.nth_power_decomposition(args.power, m, verify=False)
        if args.drop_parity:
            dec = decomposer.parity_dropped(dec)
    elif args.decomposition:
        data = _load_tree(args.decomposition)
        dec = decomposer.Decomposition.from_dict(data if "tree" in data else {"tree": data})
    else:
        raise InputError("give --power N or --decomposition JSON")
    source = args.source or (decomposer.to_text(dec.source) if dec.source is not None else None)
    if source is None:
        raise InputError("no source formula: pass --source")
    res = decomposer.verify_decomposition(source, dec, m, budget=_budget(args))
    payload = {"modulus": m.to_dict(), "source": source, "decomposition": dec.to_dict(), **res.to_dict()}
    text = f"pass ({res.checked} assignments)" if res.passed else f"counterexample {res.counterexample}"
    return Outcome(payload, text, res.passed)


def cmd_tp2(args) -> Outcome:
    w = tp2_witness(args.primes, args.exponents, search_bound=args.search_bound)
    text = f"b = {w.b}; rows {'ok' if w.path_ok else 'FAIL'}; pairwise inconsistency {'ok' if w.inconsistency_ok else 'FAIL'}"
    return Outcome(w.to_dict(), text, w.ok)


# -- parser ------------------------------------------------------------------


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="emit JSON")
    common.add_argument(
        "--exit-status", action="store_true", default=argparse.SUPPRESS, help="exit 1 when the answer is negative"
    )
    common.add_argument("--budget", type=int, default=argparse.SUPPRESS, help="evaluator work budget (default 10^8)")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="trunkring", description=__doc__.splitlines()[0], parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(subs, name, handler, help_text):
        sp = subs.add_parser(name, parents=[common], help=help_text, description=help_text)
        sp.set_defaults(handler=handler)
        return sp

    def ring_args(sp):
        sp.add_argument("-p", type=int, required=True, help="prime")
        sp.add_argument("-k", type=int, required=True, help="exponent")

    sp = add(sub, "solve", cmd_solve, "lift a simple root of a polynomial by Hensel iteration")
    ring_args(sp)
    sp.add_argument("--alpha", type=int, required=True, help="approximate root")
    sp.add_argument("coeffs", type=int, nargs="+", help="coefficients, constant term first")

    sp = add(sub, "roots", cmd_roots, "all roots of a polynomial by exhaustive scan")
    ring_args(sp)
    sp.add_argument("--cap", type=int, default=hensel.DEFAULT_ROOT_CAP)
    sp.add_argument("coeffs", type=int, nargs="+", help="coefficients, constant term first")

    sp = add(sub, "decide", cmd_decide, "evaluate a formula over Z/p^kZ")
    ring_args(sp)
    sp.add_argument("formula")
    sp.add_argument("--assign", action="append", metavar="VAR=VALUE")

    toag = sub.add_parser("toag", help="truncated ordered abelian groups [0, tau]")
    tsub = toag.add_subparsers(dest="toag_command", required=True)
    sp = add(tsub, "check", cmd_toag_check, "check the TOAG axioms")
    sp.add_argument("--tau", type=int, required=True)
    group = sp.add_mutually_exclusive_group()
    group.add_argument("--exhaustive", action="store_true", help="all tuples (default)")
    group.add_argument("--sample", type=int, metavar="COUNT", help="random tuples per axiom")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--table", choices=["truncated", "modular"], default="truncated")
    sp.add_argument("--presburger", action="store_true", help="also check discreteness and division")
    sp.add_argument("--n-bound", type=int, default=10)
    sp = add(tsub, "decide", cmd_toag_decide, "decide a value-sort formula by quantifier elimination")
    sp.add_argument("--tau", type=int, required=True)
    sp.add_argument("formula")
    sp.add_argument("--assign", action="append", metavar="VAR=VALUE")
    sp = add(tsub, "realize", cmd_toag_realize, "embed [0, tau] as an initial segment of Z")
    sp.add_argument("--tau", type=int, required=True)

    field = sub.add_parser("field", help="prime fields F_p")
    fsub = field.add_subparsers(dest="field_command", required=True)
    sp = add(fsub, "sol", cmd_field_sol, "solvability of c0 + c1 T + ... + cn T^n = 0 in F_p")
    sp.add_argument("-p", type=int, required=True)
    sp.add_argument("coeffs", type=int, nargs="+", help="coefficients, constant term first")
    sp = add(fsub, "irreducible", cmd_field_irreducible, "number of monic irreducible polynomials of degree n")
    sp.add_argument("-p", type=int, required=True)
    sp.add_argument("-n", type=int, required=True)
    sp.add_argument("--exhaustive", action="store_true", help="cross-check by enumeration")
    sp = add(fsub, "curve", cmd_field_curve, "search for an F_p-point on a plane curve")
    sp.add_argument("-p", type=int, required=True)
    sp.add_argument("curve", nargs="?", help="polynomial in x, y: infix (y^2 - x^3 - 2) or a DSL ring term")
    sp.add_argument("--projective", action="store_true")
    sp.add_argument("--curated", action="store_true", help="run the curated curve list")

    sp = add(sub, "invariants", cmd_invariants, "elementary-invariant fingerprint of Z/p^kZ")
    ring_args(sp)

    sp = add(sub, "compare", cmd_compare, "same elementary theory? (moduli as P^K)")
    sp.add_argument("m1")
    sp.add_argument("m2")

    dec = sub.add_parser("decompose", help="decompositions into poly / residue / value conditions")
    dsub = dec.add_subparsers(dest="decompose_command", required=True)
    sp = add(dsub, "power", cmd_decompose_power, "decompose 'x is an n-th power'")
    ring_args(sp)
    sp.add_argument("-n", type=int, required=True)
    sp.add_argument("--drop-parity", action="store_true", help="remove the valuation congruence leaf")
    sp = add(dsub, "verify", cmd_decompose_verify, "check a decomposition against brute force")
    ring_args(sp)
    sp.add_argument("--source", help="source formula (defaults to the one stored with the decomposition)")
    sp.add_argument("--decomposition", help="JSON tree, a file name, or - for stdin")
    sp.add_argument("--power", type=int, help="use the n-th power decomposition")
    sp.add_argument("--drop-parity", action="store_true")

    sp = add(sub, "tp2", cmd_tp2, "product witness for the prime-power array")
    sp.add_argument("--primes", type=int, nargs="+", required=True)
    sp.add_argument("--exponents", type=int, nargs="+", required=True)
    sp.add_argument("--search-bound", type=int, default=10_000)
    return parser


def _emit(args, outcome: Outcome, out):
    if args.json:
        command = " ".join(
            c for c in (args.command, getattr(args, "toag_command", None), getattr(args, "field_command", None), getattr(args, "decompose_command", None)) if c
        )
        json.dump({"command": command, "ok": outcome.positive, "result": outcome.payload}, out, indent=2)
        out.write("\n")
    else:
        out.write(outcome.text + "\n")


def main(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE
    for flag in ("json", "exit_status", "budget"):
        if not hasattr(args, flag):
            setattr(args, flag, None if flag == "budget" else False)
    try:
        outcome = args.handler(args)
    except (InputError, ValueError) as e:
        return _fail(args, e, EXIT_USAGE, out, err)
    except TrunkringError as e:
        return _fail(args, e, EXIT_INTERNAL, out, err)
    _emit(args, outcome, out)
    return EXIT_NEGATIVE if args.exit_status and not outcome.positive else EXIT_OK


def _fail(args, e: Exception, code: int, out, err) -> int:
    info = e.to_dict() if isinstance(e, TrunkringError) else {"code": "InvalidInput", "message": str(e)}
    if args.json:
        json.dump({"error": info}, out, indent=2)
        out.write("\n")
    err.write(f"trunkring: {info['code']}: {info['message']}\n")
    return code


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()

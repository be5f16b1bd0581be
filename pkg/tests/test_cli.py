from __future__ import annotations

import io
import json
import pathlib
import subprocess
import sys

import jsonschema
import pytest
from referencing import Registry, Resource

from trunkring.cli import main

SCHEMAS = pathlib.Path(__file__).resolve().parent.parent / "docs" / "schemas"


def _registry() -> Registry:
    resources = []
    for path in SCHEMAS.glob("*.json"):
        doc = json.loads(path.read_text())
        resources.append((doc["$id"], Resource.from_contents(doc)))
    return Registry().with_resources(resources)


REGISTRY = _registry()


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def validate(doc: dict):
    name = "error.json" if "error" in doc else doc["command"].replace(" ", "-") + ".json"
    schema = json.loads((SCHEMAS / name).read_text())
    jsonschema.Draft202012Validator(schema, registry=REGISTRY).validate(doc)


JSON_CASES = [
    ["solve", "-p", "7", "-k", "3", "--alpha", "1", "-8", "0", "1"],
    ["roots", "-p", "7", "-k", "3", "-8", "0", "1"],
    ["decide", "-p", "7", "-k", "3", "(exists x:ring (= (* x x) 8))"],
    ["decide", "-p", "3", "-k", "2", "(= (* x y) 0)", "--assign", "y=3"],
    ["toag", "check", "--tau", "10", "--exhaustive"],
    ["toag", "check", "--tau", "12", "--sample", "200", "--seed", "4"],
    ["toag", "check", "--tau", "10", "--table", "modular", "--presburger"],
    ["toag", "decide", "--tau", "9", "(exists y:value (= (+ y y) x))"],
    ["toag", "decide", "--tau", "9", "(exists y:value (= (+ y y) tau))"],
    ["toag", "realize", "--tau", "6"],
    ["field", "sol", "-p", "7", "1", "0", "1"],
    ["field", "sol", "-p", "7", "-2", "0", "1"],
    ["field", "irreducible", "-p", "3", "-n", "4", "--exhaustive"],
    ["field", "curve", "-p", "11", "y^2 - x^3 - 2"],
    ["field", "curve", "-p", "13", "--curated"],
    ["invariants", "-p", "3", "-k", "4"],
    ["compare", "3^4", "3^5"],
    ["compare", "3^4", "3^4"],
    ["decompose", "power", "-p", "3", "-k", "4", "-n", "2"],
    ["decompose", "verify", "-p", "3", "-k", "4", "--power", "2", "--drop-parity"],
    ["tp2", "--primes", "2", "3", "5", "--exponents", "1", "2", "1"],
    ["decide", "-p", "4", "-k", "1", "true"],
]


@pytest.mark.parametrize("argv", JSON_CASES, ids=lambda a: " ".join(a[:2]))
def test_json_matches_schema(argv):
    _, out, _ = run("--json", *argv)
    validate(json.loads(out))


def test_documented_examples():
    assert run("decide", "-p", "7", "-k", "3", "(exists x:ring (= (* x x) 8))")[1].strip() == "true"
    code, out, _ = run("toag", "check", "--tau", "10", "--exhaustive")
    assert code == 0 and "axiom 11 not-checked" in out and "axiom 13 pass" in out and "as-stated-ambiguous" in out
    doc = json.loads(run("invariants", "-p", "3", "-k", "4", "--json")[1])
    assert doc["result"]["penultimate"] == 3 and doc["result"]["congruences"]["2"] == 1


def test_exit_status():
    assert run("field", "sol", "-p", "7", "1", "0", "1")[0] == 0
    assert run("field", "sol", "-p", "7", "1", "0", "1", "--exit-status")[0] == 1
    assert run("decompose", "verify", "-p", "3", "-k", "4", "--power", "2", "--exit-status")[0] == 0
    assert run("decompose", "verify", "-p", "3", "-k", "4", "--power", "2", "--drop-parity", "--exit-status")[0] == 1
    assert run("compare", "3^2", "5^2", "--exit-status")[0] == 1


@pytest.mark.parametrize(
    "argv, code",
    [
        (["decide", "-p", "4", "-k", "1", "true"], "NotPrime"),
        (["decide", "-p", "3", "-k", "2", "(= x"], "SyntaxError"),
        (["decompose", "power", "-p", "3", "-k", "2", "-n", "3"], "RamifiedCase"),
        (["solve", "-p", "7", "-k", "3", "--alpha", "2", "-8", "0", "1"], "PreconditionViolated"),
        (["tp2", "--primes", "2", "2", "--exponents", "1", "1"], "DuplicatePrime"),
        (["decide", "-p", "101", "-k", "2", "(forall x:ring (exists y:ring (= x (* y y y))))"], "BudgetExceeded"),
    ],
)
def test_errors_have_codes(argv, code):
    rc, out, err = run("--json", *argv)
    assert rc == 2
    doc = json.loads(out)
    assert doc["error"]["code"] == code and code in err
    validate(doc)


def test_usage_errors():
    assert run("bogus")[0] == 2
    assert run("decide", "-p", "3")[0] == 2
    assert run("toag", "check", "--tau", "5", "--unknown-flag")[0] == 2


def test_budget_flag_and_env(monkeypatch):
    phi = "(exists x:ring (exists y:ring (= (* x y) 1)))"
    assert run("decide", "-p", "3", "-k", "3", phi)[0] == 0
    assert run("--budget", "10", "decide", "-p", "3", "-k", "3", phi)[0] == 2
    monkeypatch.setenv("TRUNKRING_BUDGET", "10")
    assert run("decide", "-p", "3", "-k", "3", phi)[0] == 2
    assert run("decide", "-p", "3", "-k", "3", phi, "--budget", "1000000")[0] == 0


def test_big_numbers_are_not_truncated():
    p = "170141183460469231731687303715884105727"  # 2^127 - 1
    _, out, _ = run("--json", "solve", "-p", p, "-k", "2", "--alpha", "1", "-1", "0", "1")
    doc = json.loads(out)
    assert doc["result"]["modulus"]["p"] == p and doc["result"]["root"]["value"] == "1"


def test_decide_and_verify_agree(tmp_path):
    # the evaluator and the verifier must agree on a hand-written decomposition
    tree = {"op": "or", "args": [{"leaf": {"kind": "poly", "payload": "(= x 0)"}},
                                 {"leaf": {"kind": "value", "payload": "(congr (v x) 2 0)"}}]}
    f = tmp_path / "dec.json"
    f.write_text(json.dumps(tree))
    src = "(exists y:ring (= (* y y) x))"
    _, out, _ = run("--json", "decompose", "verify", "-p", "5", "-k", "2", "--source", src, "--decomposition", str(f))
    doc = json.loads(out)["result"]
    x = int(doc["counterexample"]["x"])
    decided = run("decide", "-p", "5", "-k", "2", src.replace(" x)", f" {x})"))[1].strip()
    assert decided == str(doc["source_value"]).lower()


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "trunkring", "tp2", "--primes", "7", "--exponents", "3"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("b = 343")

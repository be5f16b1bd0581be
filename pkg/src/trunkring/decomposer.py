"""Decompositions into polynomial, residue and value conditions.

A decomposition is a Boolean tree whose leaves are basic conditions of one of
three kinds: polynomial equations in ring terms, Sol conditions on angular
components, and Presburger conditions on valuations. The module builds such
trees for n-th power predicates, fingerprints the elementary invariants of a
ring Z/p^kZ, compares theories with witness sentences, and checks any
decomposition against the brute-force evaluator.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional, Sequence, Union

import numpy as np

from .errors import BadArity, BudgetExceeded, CapExceeded, InputError, RamifiedCase
from .fields import sol
from .formula.ast import (
    TRUE,
    App,
    Congr,
    Eq,
    Leq,
    Lt,
    Not,
    Sol,
    Sort,
    conj,
    disj,
    free_vars,
    is_quantifier_free,
    walk,
)
from .formula.evaluate import DEFAULT_BUDGET, evaluate, truth_table
from .formula.parser import parse, to_text
from .ring import Modulus

POLY = "poly"
RESIDUE = "residue"
VALUE = "value"
KINDS = (POLY, RESIDUE, VALUE)

# exhaustive verification limit on the number of assignments
VERIFY_CAP = 10**6
# nth_power_decomposition checks itself against brute force up to this ring size
SELF_VERIFY_CAP = 10**4
CONGRUENCE_MODULI = tuple(range(2, 65))


# -- basic conditions --------------------------------------------------------


def _leaf_violations(kind: str, payload) -> list[str]:
    """Reasons a payload does not belong to the fragment of its kind."""
    out = []
    if not is_quantifier_free(payload):
        out.append("payload has a quantifier")
    home = {POLY: Sort.RING, RESIDUE: Sort.RES, VALUE: Sort.VALUE}[kind]
    bridge = {POLY: None, RESIDUE: "ac", VALUE: "v"}[kind]

    def term_ok(t, inside_bridge: bool) -> bool:
        if isinstance(t, App) and t.op in ("v", "ac"):
            if t.op != bridge or inside_bridge:
                out.append(f"'{t.op}' not allowed in a {kind} condition")
                return False
            return all(term_ok(a, True) for a in t.args)
        if inside_bridge:
            if t.sort is not Sort.RING:
                out.append(f"non-ring term under '{bridge}'")
                return False
        elif t.sort is not home:
            out.append(f"{t.sort} term in a {kind} condition")
            return False
        if isinstance(t, App):
            return all(term_ok(a, inside_bridge) for a in t.args)
        return True

    for node in walk(payload):
        if isinstance(node, Eq):
            if kind == POLY and node.lhs.sort is not Sort.RING:
                out.append("polynomial condition compares non-ring terms")
            term_ok(node.lhs, False)
            term_ok(node.rhs, False)
        elif isinstance(node, (Leq, Lt)):
            if kind != VALUE:
                out.append(f"order atom in a {kind} condition")
            term_ok(node.lhs, False)
            term_ok(node.rhs, False)
        elif isinstance(node, Congr):
            if kind != VALUE:
                out.append(f"congruence atom in a {kind} condition")
            term_ok(node.term, False)
        elif isinstance(node, Sol):
            if kind != RESIDUE:
                out.append(f"Sol atom in a {kind} condition")
            for a in node.args:
                term_ok(a, False)
    return out


@dataclass(frozen=True)
class BasicCondition:
    """One leaf: ``kind`` is poly, residue or value; ``payload`` a formula."""

    kind: str
    payload: object

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InputError(f"unknown condition kind {self.kind!r}", kind=self.kind)
        if isinstance(self.payload, str):
            object.__setattr__(self, "payload", parse(self.payload))
        problems = _leaf_violations(self.kind, self.payload)
        if problems:
            raise InputError(f"{self.kind} condition {to_text(self.payload)}: {problems[0]}", kind=self.kind)

    @classmethod
    def poly(cls, text) -> "BasicCondition":
        return cls(POLY, text)

    @classmethod
    def residue(cls, text) -> "BasicCondition":
        return cls(RESIDUE, text)

    @classmethod
    def value(cls, text) -> "BasicCondition":
        return cls(VALUE, text)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "payload": to_text(self.payload)}


# -- decomposition trees -----------------------------------------------------


@dataclass(frozen=True)
class Node:
    """Boolean combination: ``op`` is and, or or not."""

    op: str
    args: tuple

    def __post_init__(self):
        if self.op not in ("and", "or", "not"):
            raise InputError(f"unknown tree operator {self.op!r}")
        if self.op == "not" and len(self.args) != 1:
            raise BadArity("'not' takes one argument")


Tree = Union[Node, BasicCondition]


def d_and(*args: Tree) -> Node:
    return Node("and", tuple(args))


def d_or(*args: Tree) -> Node:
    return Node("or", tuple(args))


def d_not(arg: Tree) -> Node:
    return Node("not", (arg,))


def _tree_formula(tree: Tree):
    if isinstance(tree, BasicCondition):
        return tree.payload
    parts = [_tree_formula(a) for a in tree.args]
    if tree.op == "not":
        return Not(parts[0])
    return conj(*parts) if tree.op == "and" else disj(*parts)


def _tree_dict(tree: Tree) -> dict:
    if isinstance(tree, BasicCondition):
        return {"leaf": tree.to_dict()}
    return {"op": tree.op, "args": [_tree_dict(a) for a in tree.args]}


def _tree_from_dict(d: Mapping) -> Tree:
    if "leaf" in d:
        return BasicCondition(d["leaf"]["kind"], d["leaf"]["payload"])
    return Node(d["op"], tuple(_tree_from_dict(a) for a in d["args"]))


def _leaves(tree: Tree):
    if isinstance(tree, BasicCondition):
        yield tree
    else:
        for a in tree.args:
            yield from _leaves(a)


def _drop(tree: Tree, leaf: BasicCondition) -> Optional[Tree]:
    if isinstance(tree, BasicCondition):
        return None if tree == leaf else tree
    kept = tuple(t for t in (_drop(a, leaf) for a in tree.args) if t is not None)
    if not kept:
        return None
    return Node(tree.op, kept)


@dataclass
class Decomposition:
    tree: Tree
    source: Optional[object] = None
    variables: tuple[str, ...] = ()

    def __post_init__(self):
        if isinstance(self.source, str):
            self.source = parse(self.source)
        if not self.variables:
            names = list(free_vars(self.formula()))
            if self.source is not None:
                names = list(free_vars(self.source)) + [v for v in names if v not in free_vars(self.source)]
            self.variables = tuple(names)

    def formula(self):
        return _tree_formula(self.tree)

    def leaves(self) -> list[BasicCondition]:
        return list(_leaves(self.tree))

    def structure_violations(self) -> list[str]:
        """Empty when every leaf stays in its fragment and no stray variables appear."""
        out = []
        for leaf in self.leaves():
            out += _leaf_violations(leaf.kind, leaf.payload)
        for name, sort in free_vars(self.formula()).items():
            if sort is not Sort.RING:
                out.append(f"free variable {name} has sort {sort}")
            if self.source is not None and name not in free_vars(self.source):
                out.append(f"free variable {name} not free in the source")
        return out

    def without(self, leaf: BasicCondition) -> "Decomposition":
        tree = _drop(self.tree, leaf)
        return Decomposition(tree if tree is not None else BasicCondition(POLY, TRUE), self.source, self.variables)

    def holds(self, modulus: Modulus, assignment: Mapping[str, int]) -> bool:
        return evaluate(self.formula(), modulus, assignment)

    def to_dict(self) -> dict:
        return {
            "tree": _tree_dict(self.tree),
            "variables": list(self.variables),
            "source": to_text(self.source) if self.source is not None else None,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "Decomposition":
        return cls(_tree_from_dict(d["tree"]), d.get("source"), tuple(d.get("variables") or ()))

    def __str__(self):
        return to_text(self.formula())


# -- verification ------------------------------------------------------------


@dataclass
class Verification:
    passed: bool
    checked: int
    counterexample: Optional[dict] = None
    source_value: Optional[bool] = None
    decomposition_value: Optional[bool] = None

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "checked": self.checked,
            "counterexample": {k: str(v) for k, v in self.counterexample.items()} if self.counterexample else None,
            "source_value": self.source_value,
            "decomposition_value": self.decomposition_value,
        }


def verify_decomposition(
    source, dec: Decomposition, modulus: Modulus, *, cap: int = VERIFY_CAP, budget: Optional[int] = DEFAULT_BUDGET
) -> Verification:
    """Compare source and decomposition on every assignment of the free ring variables.

    The counterexample is the lexicographically least disagreeing assignment.
    """
    if isinstance(source, str):
        source = parse(source)
    names = list(free_vars(source))
    names += [v for v in dec.variables if v not in names]
    names += [v for v in free_vars(dec.formula()) if v not in names]
    size = modulus.n ** len(names)
    if size > cap:
        raise CapExceeded(f"{size} assignments exceed the verification cap {cap}", size=size, cap=cap)
    doms = {v: range(modulus.n) for v in names}
    a = truth_table(source, modulus, names, doms, budget=budget)
    b = truth_table(dec.formula(), modulus, names, doms, budget=budget)
    diff = np.flatnonzero((a != b).reshape(-1))
    if diff.size == 0:
        return Verification(True, size)
    idx = np.unravel_index(int(diff[0]), a.shape) if names else ()
    cex = {v: int(i) for v, i in zip(names, idx)}
    return Verification(False, size, cex, bool(a.reshape(-1)[diff[0]]), bool(b.reshape(-1)[diff[0]]))


# -- n-th powers -------------------------------------------------------------


def _nth_power_source(n: int, var: str = "x", witness: str = "y") -> str:
    return f"(exists {witness}:ring (= (* {' '.join([witness] * n)}) {var}))"


def nth_power_decomposition(n: int, modulus: Modulus, var: str = "x", *, verify: Optional[bool] = None) -> Decomposition:
    """Decompose "x is an n-th power" in Z/p^kZ for n prime to p.

    x = 0, or v(x) < k with v(x) divisible by n and ac(x) an n-th power in
    F_p. Unit n-th power conditions reduce to the residue field by Hensel
    lifting; this needs gcd(n, p) = 1. The result is checked against brute
    force when p^k <= SELF_VERIFY_CAP (or when ``verify`` is forced).
    """
    if n < 2:
        raise BadArity(f"power n must be >= 2, got {n}", n=n)
    if n % modulus.p == 0:
        raise RamifiedCase(f"p = {modulus.p} divides n = {n}; use the root scan instead", p=modulus.p, n=n)
    zeros = " ".join(["0"] * (n - 1))
    tree = d_or(
        BasicCondition.poly(f"(= {var} 0)"),
        d_and(
            BasicCondition.value(f"(lt (v {var}) tau)"),
            BasicCondition.value(f"(congr (v {var}) {n} 0)"),
            BasicCondition.residue(f"(sol {n} (- (ac {var})) {zeros} 1)"),
        ),
    )
    dec = Decomposition(tree, _nth_power_source(n, var), (var,))
    if verify if verify is not None else modulus.n <= SELF_VERIFY_CAP:
        check = verify_decomposition(dec.source, dec, modulus)
        if not check.passed:
            raise AssertionError(f"n-th power decomposition failed at {check.counterexample}")
    return dec


def parity_dropped(dec: Decomposition) -> Decomposition:
    """The decomposition with its valuation congruence leaf removed."""
    leaf = next(l for l in dec.leaves() if isinstance(l.payload, Congr))
    return dec.without(leaf)


# -- elementary invariants ---------------------------------------------------


def sol_corpus() -> tuple[tuple[int, tuple[int, ...]], ...]:
    """Fixed integer tuples for the residue-field fingerprint, degree first."""
    out = [(1, (1, q)) for q in range(2, 65)]
    out += [(2, (-a, 0, 1)) for a in range(-8, 9)]
    out += [(2, (1, 1, 1)), (2, (2, 1, 1))]
    out += [(3, (-a, 0, 0, 1)) for a in range(2, 9)]
    out += [(3, (1, 1, 0, 1)), (3, (-2, 0, 1, 1))]
    return tuple(out)


@dataclass(frozen=True)
class InvariantFingerprint:
    p: int
    k: int
    penultimate: int
    congruences: tuple[tuple[int, int], ...]
    residue: tuple[tuple[int, tuple[int, ...], bool], ...]

    def sol_value(self, n: int, coeffs: Sequence[int]) -> bool:
        for m, c, val in self.residue:
            if m == n and c == tuple(coeffs):
                return val
        raise KeyError((n, tuple(coeffs)))

    def to_dict(self) -> dict:
        return {
            "p": str(self.p),
            "k": self.k,
            "penultimate": self.penultimate,
            "congruences": {str(n): r for n, r in self.congruences},
            "residue": [{"n": n, "coeffs": list(c), "value": v} for n, c, v in self.residue],
        }


def elementary_invariants(modulus: Modulus) -> InvariantFingerprint:
    """Penultimate value k-1 with its residues mod n <= 64, plus Sol truth values."""
    p, k = modulus.p, modulus.k
    top = k - 1
    residue = tuple((n, c, sol(n, c, p)) for n, c in sol_corpus())
    return InvariantFingerprint(p, k, top, tuple((n, top % n) for n in CONGRUENCE_MODULI), residue)


@dataclass
class TheoryComparison:
    same: bool
    m1: Modulus
    m2: Modulus
    witness: Optional[str] = None
    values: Optional[tuple[bool, bool]] = None
    schema: Optional[str] = None

    def __bool__(self):
        return self.same

    def to_dict(self) -> dict:
        return {
            "same": self.same,
            "m1": self.m1.to_dict(),
            "m2": self.m2.to_dict(),
            "witness": self.witness,
            "values": list(self.values) if self.values else None,
            "schema": self.schema,
        }


def _t_power(j: int) -> str:
    return "t" if j == 1 else "(* " + " ".join(["t"] * j) + ")"


def witness_schemas(m1: Modulus, m2: Modulus):
    """Candidate sentences, smallest schema first: (schema name, text)."""
    for q in range(2, max(m1.p, m2.p) + 1):
        yield "unit", f"(exists y:ring (= (* {q} y) 1))"
    for j in range(1, max(m1.k, m2.k) + 1):
        yield "depth", f"(exists x:ring (and (not (= x 0)) (exists y:ring (= x (* {_t_power(j)} y)))))"
        yield "depth-qf", f"(not (= {_t_power(j)} 0))"
    for n, c in sol_corpus():
        args = " ".join(str(x) for x in c)
        yield "sol", f"(sol {n} {args})"


def _value(text: str, modulus: Modulus, budget: Optional[int]) -> Optional[bool]:
    try:
        return evaluate(parse(text), modulus, budget=budget)
    except BudgetExceeded:
        return None


def same_theory(m1: Modulus, m2: Modulus, *, budget: Optional[int] = DEFAULT_BUDGET) -> TheoryComparison:
    """Compare fingerprints; on a difference, find a sentence the rings disagree on.

    Every witness is confirmed by evaluating it in both rings. Sentences too
    expensive to evaluate within ``budget`` are skipped.
    """
    if elementary_invariants(m1) == elementary_invariants(m2):
        return TheoryComparison(True, m1, m2)
    for schema, text in witness_schemas(m1, m2):
        a = _value(text, m1, budget)
        if a is None:
            continue
        b = _value(text, m2, budget)
        if b is not None and a != b:
            return TheoryComparison(False, m1, m2, text, (a, b), schema)
    raise AssertionError(f"no witness sentence separates {m1} and {m2}")

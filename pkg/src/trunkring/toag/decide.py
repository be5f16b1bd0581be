"""Deciding value-sort formulas over [0, tau] by quantifier elimination.

Truncated terms are split into linear pieces guarded by order conditions:
``a + b`` is ``a + b`` when the sum is at most tau and ``tau`` otherwise, and
``a -. b`` is ``a - b`` or ``0``. Quantifiers are then eliminated innermost
first with Cooper's method, every bound variable ranging over [0, tau].
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Optional

import numpy as np

from ..errors import OracleDisagreement, OutOfRange, UnboundVariable, UnsupportedTerm
from ..formula.ast import (
    And,
    App,
    BoolConst,
    Congr,
    Const,
    Eq,
    Exists,
    Forall,
    Iff,
    Implies,
    Leq,
    Lit,
    Lt,
    Not,
    Or,
    Sol,
    Sort,
    Var,
    free_vars,
    quantifier_count,
)
from ..formula.evaluate import truth_table
from ..formula.parser import parse, to_text
from . import presburger as pb
from .presburger import Lin

ORACLE_CAP = 2_000_000
# sliced brute force may spend this many times the cap in total
ORACLE_SLICE_FACTOR = 16


def parse_toag(text: str):
    """Parse a formula whose free variables all range over the value sort."""
    return parse(text, default_sort=Sort.VALUE)


# -- linearization -----------------------------------------------------------


class _Linearizer:
    def __init__(self, tau: int):
        self.tau = tau
        self.fresh = itertools.count()

    def pieces(self, term, names: Mapping[str, str]) -> list[tuple[pb.QF, Lin]]:
        """Guarded linear pieces; the guards partition the variable space."""
        tau = self.tau
        if getattr(term, "sort", None) is not Sort.VALUE:
            raise UnsupportedTerm(f"term of sort {getattr(term, 'sort', '?')} in a value-sort formula")
        if isinstance(term, Var):
            return [(pb.TOP, Lin.var(names.get(term.name, term.name)))]
        if isinstance(term, Lit):
            return [(pb.TOP, Lin.num(min(term.value, tau)))]
        if isinstance(term, Const) and term.name == "tau":
            return [(pb.TOP, Lin.num(tau))]
        if isinstance(term, App) and term.op == "+":
            acc = self.pieces(term.args[0], names)
            for arg in term.args[1:]:
                nxt = []
                for (ga, la), (gb, lb) in itertools.product(acc, self.pieces(arg, names)):
                    s = la + lb
                    g = pb.mk_and(ga, gb)
                    nxt.append((pb.mk_and(g, pb.mk_le(s - tau)), s))
                    nxt.append((pb.mk_and(g, pb.mk_le(-s + tau + 1)), Lin.num(tau)))
                acc = [(g, l) for g, l in nxt if not isinstance(g, pb.Bot)]
            return acc
        if isinstance(term, App) and term.op == "monus":
            out = []
            for (ga, la), (gb, lb) in itertools.product(
                self.pieces(term.args[0], names), self.pieces(term.args[1], names)
            ):
                d = la - lb
                g = pb.mk_and(ga, gb)
                out.append((pb.mk_and(g, pb.mk_le(-d)), d))
                out.append((pb.mk_and(g, pb.mk_le(d + 1)), Lin.num(0)))
            return [(g, l) for g, l in out if not isinstance(g, pb.Bot)]
        raise UnsupportedTerm(f"term {to_text(term)!r} is outside the linear value fragment")

    def _compare(self, lhs, rhs, names, build) -> pb.QF:
        cases = []
        for (ga, la), (gb, lb) in itertools.product(self.pieces(lhs, names), self.pieces(rhs, names)):
            cases.append(pb.mk_and(ga, gb, build(la - lb)))
        return pb.mk_or(*cases)

    def formula(self, phi, names: Mapping[str, str]) -> pb.QF:
        if isinstance(phi, BoolConst):
            return pb.TOP if phi.value else pb.BOT
        if isinstance(phi, Eq):
            if phi.lhs.sort is not Sort.VALUE:
                raise UnsupportedTerm(f"equation between {phi.lhs.sort} terms")
            return self._compare(phi.lhs, phi.rhs, names, lambda d: pb.mk_and(pb.mk_le(d), pb.mk_le(-d)))
        if isinstance(phi, Leq):
            return self._compare(phi.lhs, phi.rhs, names, pb.mk_le)
        if isinstance(phi, Lt):
            return self._compare(phi.lhs, phi.rhs, names, lambda d: pb.mk_le(d + 1))
        if isinstance(phi, Congr):
            return pb.mk_or(
                *(pb.mk_and(g, pb.mk_dvd(phi.n, lin - phi.residue)) for g, lin in self.pieces(phi.term, names))
            )
        if isinstance(phi, Sol):
            raise UnsupportedTerm("Sol atoms live in the residue sort")
        if isinstance(phi, Not):
            return pb.negate(self.formula(phi.arg, names))
        if isinstance(phi, And):
            return pb.mk_and(*(self.formula(a, names) for a in phi.args))
        if isinstance(phi, Or):
            return pb.mk_or(*(self.formula(a, names) for a in phi.args))
        if isinstance(phi, Implies):
            return pb.mk_or(pb.negate(self.formula(phi.lhs, names)), self.formula(phi.rhs, names))
        if isinstance(phi, Iff):
            a, b = self.formula(phi.lhs, names), self.formula(phi.rhs, names)
            return pb.mk_or(pb.mk_and(a, b), pb.mk_and(pb.negate(a), pb.negate(b)))
        if isinstance(phi, (Exists, Forall)):
            if phi.sort is not Sort.VALUE:
                raise UnsupportedTerm(f"quantifier over the {phi.sort} sort")
            inner = f"{phi.var}#{next(self.fresh)}"
            body = self.formula(phi.body, {**names, phi.var: inner})
            if isinstance(phi, Exists):
                return pb.eliminate_bounded_exists(inner, body, 0, self.tau)
            return pb.negate(pb.eliminate_bounded_exists(inner, pb.negate(body), 0, self.tau))
        raise UnsupportedTerm(f"unsupported node {type(phi).__name__}")


def eliminate_quantifiers(phi, tau: int) -> pb.QF:
    """Quantifier-free linear formula equivalent to ``phi`` on [0, tau]."""
    if isinstance(tau, bool) or not isinstance(tau, int) or tau < 0:
        raise OutOfRange(f"tau must be a non-negative integer, got {tau!r}")
    for name, sort in free_vars(phi).items():
        if sort is not Sort.VALUE:
            raise UnsupportedTerm(f"free variable {name!r} has sort {sort}")
    return _Linearizer(tau).formula(phi, {})


# -- results -----------------------------------------------------------------


@dataclass
class ToagSolution:
    """Solution set of an open formula: a quantifier-free description plus enumeration."""

    formula: object = field(repr=False)
    tau: int
    variables: tuple[str, ...]
    qf: pb.QF
    oracle_checked: bool

    def holds(self, assignment: Mapping[str, int]) -> bool:
        env = {v: int(assignment[v]) for v in self.variables}
        return bool(pb.holds(self.qf, env))

    def table(self) -> np.ndarray:
        return _qf_table(self.qf, self.variables, self.tau)

    def solutions(self) -> Iterator[dict[str, int]]:
        """Satisfying assignments over [0, tau] in lexicographic order."""
        for idx in np.argwhere(self.table()):
            yield dict(zip(self.variables, (int(i) for i in idx)))

    def count(self) -> int:
        return int(self.table().sum())

    def to_dict(self, limit: int = 1000) -> dict:
        sols = list(itertools.islice(self.solutions(), limit))
        return {
            "tau": self.tau,
            "variables": list(self.variables),
            "quantifier_free": pb.to_text(self.qf),
            "count": self.count(),
            "solutions": sols,
            "truncated": self.count() > limit,
            "oracle_checked": self.oracle_checked,
        }


def _qf_table(qf: pb.QF, variables, tau: int) -> np.ndarray:
    n = len(variables)
    axes = np.ix_(*([np.arange(tau + 1, dtype=np.int64)] * n)) if n else ()
    env = dict(zip(variables, axes))
    out = pb.holds(qf, env)
    return np.broadcast_to(np.asarray(out, dtype=bool), (tau + 1,) * n).copy()


def _brute_force_table(phi, variables, tau, cap):
    """Truth table by exhaustive expansion, sliced along the first variable if large."""
    cost = (tau + 1) ** (len(variables) + quantifier_count(phi))
    if cost <= cap:
        return truth_table(phi, variables=list(variables), tau=tau, budget=None)
    if not variables or cost > cap * ORACLE_SLICE_FACTOR:
        return None
    head = variables[0]
    slices = [
        truth_table(phi, variables=list(variables), domains={head: [v]}, tau=tau, budget=None)
        for v in range(tau + 1)
    ]
    return np.concatenate(slices, axis=0)


def _oracle_check(phi, qf, variables, tau, cap):
    expected = _brute_force_table(phi, variables, tau, cap)
    if expected is None:
        return False
    got = _qf_table(qf, variables, tau)
    if not np.array_equal(expected, got):
        bad = tuple(int(i) for i in np.argwhere(expected != got)[0])
        raise OracleDisagreement(
            "quantifier elimination disagrees with brute force",
            formula=to_text(phi),
            tau=tau,
            assignment=dict(zip(variables, bad)),
            brute_force=bool(expected[bad]),
            eliminated=bool(got[bad]),
        )
    return True


def decide_toag_formula(
    phi,
    tau: int,
    assignment: Optional[Mapping[str, int]] = None,
    *,
    oracle: bool = True,
    oracle_cap: int = ORACLE_CAP,
):
    """Decide ``phi`` over [0, tau].

    Returns a bool when ``phi`` is a sentence or ``assignment`` covers every
    free variable, and a :class:`ToagSolution` otherwise. When the structure
    is small enough the brute-force evaluator runs alongside and any
    disagreement raises :class:`OracleDisagreement`.
    """
    if isinstance(phi, str):
        phi = parse_toag(phi)
    qf = eliminate_quantifiers(phi, tau)
    variables = tuple(free_vars(phi))
    checked = oracle and _oracle_check(phi, qf, variables, tau, oracle_cap)
    env = {}
    for v, x in (assignment or {}).items():
        if v not in variables:
            raise UnboundVariable(f"{v!r} is not a free variable of the formula", var=v)
        x = int(x)
        if not 0 <= x <= tau:
            raise OutOfRange(f"{v}={x} outside [0, {tau}]", var=v, value=x, tau=tau)
        env[v] = x
    if len(env) == len(variables):
        return bool(pb.holds(qf, env))
    for v, x in env.items():
        qf = pb.substitute(qf, v, Lin.num(x))
    rest = tuple(v for v in variables if v not in env)
    return ToagSolution(phi, tau, rest, qf, checked)


def cross_check(phi, tau: int, *, cap: int = ORACLE_CAP) -> bool:
    """Compare quantifier elimination with brute force over [0, tau].

    Returns True when both agree and False when the formula is too large to
    brute force; raises :class:`OracleDisagreement` on a mismatch.
    """
    if isinstance(phi, str):
        phi = parse_toag(phi)
    qf = eliminate_quantifiers(phi, tau)
    return _oracle_check(phi, qf, tuple(free_vars(phi)), tau, cap)


# -- random corpus -----------------------------------------------------------


def random_toag_formula(rng: random.Random, max_quantifiers: int = 3, free: tuple[str, ...] = ()):
    """A random value-sort formula with at most ``max_quantifiers`` quantifiers."""
    nq = rng.randint(0, max_quantifiers)
    bound = [f"q{i}" for i in range(nq)]

    def term(scope, depth):
        roll = rng.random()
        if depth == 0 or roll < 0.45:
            choice = rng.random()
            if scope and choice < 0.6:
                return Var(rng.choice(scope), Sort.VALUE)
            if choice < 0.8:
                return Lit(rng.randint(0, 4), Sort.VALUE)
            return Const("tau", Sort.VALUE)
        op = "+" if roll < 0.8 else "monus"
        return App(op, (term(scope, depth - 1), term(scope, depth - 1)), Sort.VALUE)

    def atom(scope):
        kind = rng.choice(("eq", "leq", "lt", "congr"))
        a = term(scope, 2)
        if kind == "congr":
            n = rng.randint(2, 5)
            return Congr(a, n, rng.randrange(n))
        b = term(scope, 2)
        return {"eq": Eq, "leq": Leq, "lt": Lt}[kind](a, b)

    def body(scope, depth):
        if depth == 0 or rng.random() < 0.35:
            return atom(scope)
        kind = rng.choice(("and", "or", "not", "implies"))
        if kind == "not":
            return Not(body(scope, depth - 1))
        if kind == "implies":
            return Implies(body(scope, depth - 1), body(scope, depth - 1))
        return (And if kind == "and" else Or)((body(scope, depth - 1), body(scope, depth - 1)))

    def build(i, scope):
        if i == nq:
            return body(scope, 2)
        q = Exists if rng.random() < 0.5 else Forall
        return q(bound[i], Sort.VALUE, build(i + 1, scope + [bound[i]]))

    return build(0, list(free))


def random_corpus(count: int, seed: int = 0, max_quantifiers: int = 3) -> list:
    rng = random.Random(seed)
    out = []
    for i in range(count):
        free = ("x",) if i % 3 == 1 else ("x", "y") if i % 3 == 2 else ()
        out.append(random_toag_formula(rng, max_quantifiers, free))
    return out

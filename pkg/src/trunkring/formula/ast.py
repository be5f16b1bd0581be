"""Three-sorted formula AST: ring sort, residue-field sort and value (TOAG) sort."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterator, Union


class Sort(str, enum.Enum):
    RING = "ring"
    RES = "res"
    VALUE = "value"

    def __str__(self):
        return self.value


SORT_ALIASES = {
    "ring": Sort.RING,
    "res": Sort.RES,
    "residue": Sort.RES,
    "value": Sort.VALUE,
    "val": Sort.VALUE,
}

# term operators: name -> (argument sort rule, result sort rule)
RING_OPS = ("+", "-", "*")
VALUE_OPS = ("+", "monus")
TRANS_OPS = {"v": Sort.VALUE, "ac": Sort.RES}


# -- terms -------------------------------------------------------------------


@dataclass(frozen=True)
class Var:
    name: str
    sort: Sort


@dataclass(frozen=True)
class Lit:
    value: int
    sort: Sort


@dataclass(frozen=True)
class Const:
    """Named constant: ``t`` (ring, interpreted as p) or ``tau`` (value top)."""

    name: str
    sort: Sort


@dataclass(frozen=True)
class App:
    op: str
    args: tuple
    sort: Sort


Term = Union[Var, Lit, Const, App]


# -- formulas ----------------------------------------------------------------


@dataclass(frozen=True)
class BoolConst:
    value: bool


@dataclass(frozen=True)
class Eq:
    lhs: Term
    rhs: Term

    @property
    def sort(self) -> Sort:
        return self.lhs.sort


@dataclass(frozen=True)
class Leq:
    lhs: Term
    rhs: Term


@dataclass(frozen=True)
class Lt:
    lhs: Term
    rhs: Term


@dataclass(frozen=True)
class Congr:
    """``term`` is congruent to ``residue`` modulo ``n`` (n >= 2)."""

    term: Term
    n: int
    residue: int


@dataclass(frozen=True)
class Sol:
    """Solvability over the residue field of sum(args[i] * T^i) = 0."""

    n: int
    args: tuple


@dataclass(frozen=True)
class Not:
    arg: "Formula"


@dataclass(frozen=True)
class And:
    args: tuple


@dataclass(frozen=True)
class Or:
    args: tuple


@dataclass(frozen=True)
class Implies:
    lhs: "Formula"
    rhs: "Formula"


@dataclass(frozen=True)
class Iff:
    lhs: "Formula"
    rhs: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    sort: Sort
    body: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    sort: Sort
    body: "Formula"


Atom = Union[BoolConst, Eq, Leq, Lt, Congr, Sol]
Formula = Union[Atom, Not, And, Or, Implies, Iff, Exists, Forall]

ATOM_TYPES = (BoolConst, Eq, Leq, Lt, Congr, Sol)
QUANTIFIERS = (Exists, Forall)
TRUE = BoolConst(True)
FALSE = BoolConst(False)


def is_term(node) -> bool:
    return isinstance(node, (Var, Lit, Const, App))


def children(node) -> tuple:
    """Immediate sub-terms / sub-formulas of a node."""
    if isinstance(node, App):
        return node.args
    if isinstance(node, (Eq, Leq, Lt, Implies, Iff)):
        return (node.lhs, node.rhs)
    if isinstance(node, Congr):
        return (node.term,)
    if isinstance(node, Sol):
        return node.args
    if isinstance(node, Not):
        return (node.arg,)
    if isinstance(node, (And, Or)):
        return node.args
    if isinstance(node, QUANTIFIERS):
        return (node.body,)
    return ()


def walk(node) -> Iterator:
    yield node
    for c in children(node):
        yield from walk(c)


def free_vars(node, bound: frozenset = frozenset()) -> dict[str, Sort]:
    """Free variables with their sorts, in order of first occurrence."""
    out: dict[str, Sort] = {}

    def visit(n, bnd):
        if isinstance(n, Var):
            if n.name not in bnd and n.name not in out:
                out[n.name] = n.sort
        elif isinstance(n, QUANTIFIERS):
            visit(n.body, bnd | {n.var})
        else:
            for c in children(n):
                visit(c, bnd)

    visit(node, bound)
    return out


def quantifier_count(node) -> int:
    return sum(1 for n in walk(node) if isinstance(n, QUANTIFIERS))


def binders(node) -> list[tuple[str, Sort]]:
    return [(n.var, n.sort) for n in walk(node) if isinstance(n, QUANTIFIERS)]


def sorts_used(node) -> set[Sort]:
    used = set()
    for n in walk(node):
        if is_term(n):
            used.add(n.sort)
        elif isinstance(n, QUANTIFIERS):
            used.add(n.sort)
        elif isinstance(n, (Leq, Lt, Congr)):
            used.add(Sort.VALUE)
        elif isinstance(n, Sol):
            used.add(Sort.RES)
    return used


def is_quantifier_free(node) -> bool:
    return not any(isinstance(n, QUANTIFIERS) for n in walk(node))


def conj(*args) -> "Formula":
    args = tuple(a for a in args if a != TRUE)
    if any(a == FALSE for a in args):
        return FALSE
    if not args:
        return TRUE
    return args[0] if len(args) == 1 else And(args)


def disj(*args) -> "Formula":
    args = tuple(a for a in args if a != FALSE)
    if any(a == TRUE for a in args):
        return TRUE
    if not args:
        return FALSE
    return args[0] if len(args) == 1 else Or(args)


def ring_power(base: Term, e: int) -> Term:
    if e == 0:
        return Lit(1, Sort.RING)
    if e == 1:
        return base
    return App("*", (base,) * e, Sort.RING)

"""Reader, sort inference and printer for the prefix formula DSL.

Grammar (fully parenthesised prefix notation)::

    formula := true | false | atom
             | (not F) | (and F ...) | (or F ...) | (implies F F) | (iff F F)
             | (exists name:sort F) | (forall name:sort F)
    atom    := (= T T) | (leq V V) | (lt V V) | (congr V n c) | (sol n R ... R)
    term    := integer | name | t | tau
             | (+ T ...) | (- T) | (- T T) | (* T ...) | (monus V V)
             | (v T) | (ac T)

Sorts are ``ring``, ``res`` and ``value``. Sorts of free variables and
integer literals are inferred by unification; anything left unconstrained
takes ``default_sort``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping, Optional, Union

from ..errors import FormulaSyntaxError, SortError
from .ast import (
    SORT_ALIASES,
    App,
    And,
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
)

RESERVED = {"t", "tau", "true", "false"}
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_']*\Z")
_INT = re.compile(r"[+-]?[0-9]+\Z")
_TYPED_INT = re.compile(r"^(-?\d+):([a-z]+)$")
_TOKEN = re.compile(r"\s*(?:(\()|(\))|([^\s()]+))")

FORMULA_HEADS = {"not", "and", "or", "implies", "iff", "exists", "forall", "=", "leq", "lt", "congr", "sol"}


@dataclass
class Atom:
    text: str
    pos: int


@dataclass
class SList:
    items: list
    pos: int


SExpr = Union[Atom, SList]


def _line_col(text: str, pos: int) -> tuple[int, int]:
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


def read(text: str) -> SExpr:
    """Read exactly one s-expression."""
    stack: list[SList] = []
    result: Optional[SExpr] = None
    i = 0
    n = len(text)

    def err(msg, pos):
        line, col = _line_col(text, pos)
        return FormulaSyntaxError(msg, position=pos, line=line, column=col)

    while i < n:
        m = _TOKEN.match(text, i)
        if not m or m.end() == i:
            break
        if m.group(1):
            pos = m.start(1)
            if result is not None and not stack:
                raise err("unexpected text after formula", pos)
            stack.append(SList([], pos))
        elif m.group(2):
            pos = m.start(2)
            if not stack:
                raise err("unbalanced ')'", pos)
            done = stack.pop()
            if stack:
                stack[-1].items.append(done)
            else:
                result = done
        else:
            pos = m.start(3)
            atom = Atom(m.group(3), pos)
            if stack:
                stack[-1].items.append(atom)
            elif result is None:
                result = atom
            else:
                raise err("unexpected text after formula", pos)
        i = m.end()
    if text[i:].strip():
        raise err("unexpected character", i)
    if stack:
        raise err("unclosed '('", stack[-1].pos)
    if result is None:
        raise err("empty input", 0)
    return result


class _Sorts:
    """Union-find over sort variables."""

    def __init__(self):
        self.parent: list[int] = []
        self.fixed: list[Optional[Sort]] = []

    def new(self, sort: Optional[Sort] = None) -> int:
        self.parent.append(len(self.parent))
        self.fixed.append(sort)
        return len(self.parent) - 1

    def find(self, a: int) -> int:
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def fix(self, a: int, sort: Sort) -> bool:
        r = self.find(a)
        if self.fixed[r] is None:
            self.fixed[r] = sort
            return True
        return self.fixed[r] == sort

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return True
        sa, sb = self.fixed[ra], self.fixed[rb]
        if sa is not None and sb is not None and sa != sb:
            return False
        self.parent[rb] = ra
        self.fixed[ra] = sa or sb
        return True

    def get(self, a: int) -> Optional[Sort]:
        return self.fixed[self.find(a)]


class _Parser:
    def __init__(self, text: str, default_sort: Sort, free_sorts: Mapping[str, Sort]):
        self.text = text
        self.default_sort = default_sort
        self.sorts = _Sorts()
        self.term_sv: dict[int, int] = {}
        self.free: dict[str, int] = {}
        for name, s in free_sorts.items():
            self.free[name] = self.sorts.new(_as_sort(s))

    # -- errors ----------------------------------------------------------
    def _err(self, cls, msg, node):
        line, col = _line_col(self.text, node.pos)
        return cls(msg, position=node.pos, line=line, column=col)

    def syntax(self, msg, node):
        return self._err(FormulaSyntaxError, msg, node)

    def sort_err(self, msg, node):
        return self._err(SortError, msg, node)

    def _fix(self, sv, sort, node, what):
        if not self.sorts.fix(sv, sort):
            raise self.sort_err(f"{what} must have sort {sort}, found {self.sorts.get(sv)}", node)

    def _union(self, a, b, node):
        if not self.sorts.union(a, b):
            raise self.sort_err(f"sort mismatch: {self.sorts.get(a)} vs {self.sorts.get(b)}", node)

    # -- pass 1: collect sort constraints -------------------------------
    def collect_formula(self, sx: SExpr, scope: dict):
        if isinstance(sx, Atom):
            if sx.text in ("true", "false"):
                return
            raise self.syntax(f"expected a formula, found {sx.text!r}", sx)
        if not sx.items or not isinstance(sx.items[0], Atom):
            raise self.syntax("expected an operator", sx)
        head = sx.items[0].text
        args = sx.items[1:]
        if head == "not":
            self._arity(sx, args, 1)
            self.collect_formula(args[0], scope)
        elif head in ("and", "or"):
            if not args:
                raise self.syntax(f"'{head}' needs at least one argument", sx)
            for a in args:
                self.collect_formula(a, scope)
        elif head in ("implies", "iff"):
            self._arity(sx, args, 2)
            for a in args:
                self.collect_formula(a, scope)
        elif head in ("exists", "forall"):
            self._arity(sx, args, 2)
            name, sort = self._binder(args[0])
            self.collect_formula(args[1], {**scope, name: sort})
        elif head == "=":
            self._arity(sx, args, 2)
            a = self.collect_term(args[0], scope)
            b = self.collect_term(args[1], scope)
            self._union(a, b, sx)
        elif head in ("leq", "lt"):
            self._arity(sx, args, 2)
            for a in args:
                self._fix(self.collect_term(a, scope), Sort.VALUE, a, f"argument of '{head}'")
        elif head == "congr":
            self._arity(sx, args, 3)
            self._fix(self.collect_term(args[0], scope), Sort.VALUE, args[0], "argument of 'congr'")
            n = self._int(args[1])
            if n < 2:
                raise self.syntax("congruence modulus must be >= 2", args[1])
            self._int(args[2])
        elif head == "sol":
            if not args:
                raise self.syntax("'sol' needs a degree", sx)
            n = self._int(args[0])
            if n < 1:
                raise self.syntax("'sol' degree must be >= 1", args[0])
            if len(args) - 1 != n + 1:
                raise self.syntax(f"'sol {n}' takes {n + 1} coefficients, got {len(args) - 1}", sx)
            for a in args[1:]:
                self._fix(self.collect_term(a, scope), Sort.RES, a, "argument of 'sol'")
        else:
            if head in ("+", "-", "*", "monus", "v", "ac"):
                raise self.sort_err(f"term '{head}' used where a formula is expected", sx)
            raise self.syntax(f"unknown formula operator {head!r}", sx)

    def collect_term(self, sx: SExpr, scope: dict) -> int:
        sv = self._collect_term(sx, scope)
        self.term_sv[id(sx)] = sv
        return sv

    def _collect_term(self, sx: SExpr, scope: dict) -> int:
        if isinstance(sx, Atom):
            txt = sx.text
            if _INT.match(txt):
                return self.sorts.new()
            typed = _TYPED_INT.match(txt)
            if typed:
                if typed.group(2) not in SORT_ALIASES:
                    raise self.sort_err(f"unknown sort {typed.group(2)!r}", sx)
                return self.sorts.new(SORT_ALIASES[typed.group(2)])
            if txt == "t":
                return self.sorts.new(Sort.RING)
            if txt == "tau":
                return self.sorts.new(Sort.VALUE)
            if txt in ("true", "false"):
                raise self.sort_err(f"formula {txt!r} used as a term", sx)
            if not _NAME.match(txt):
                raise self.syntax(f"bad identifier {txt!r}", sx)
            if txt in scope:
                return self.sorts.new(scope[txt])
            if txt not in self.free:
                self.free[txt] = self.sorts.new()
            return self.free[txt]
        if not sx.items or not isinstance(sx.items[0], Atom):
            raise self.syntax("expected an operator", sx)
        head = sx.items[0].text
        args = sx.items[1:]
        if head in FORMULA_HEADS:
            raise self.sort_err(f"formula '{head}' used where a term is expected", sx)
        if head in ("+", "*"):
            if not args:
                raise self.syntax(f"'{head}' needs arguments", sx)
            res = self.sorts.new()
            for a in args:
                self._union(res, self.collect_term(a, scope), a)
            return res
        if head == "-":
            if len(args) not in (1, 2):
                raise self.syntax("'-' takes one or two arguments", sx)
            res = self.sorts.new()
            for a in args:
                self._union(res, self.collect_term(a, scope), a)
            return res
        if head == "monus":
            self._arity(sx, args, 2)
            for a in args:
                self._fix(self.collect_term(a, scope), Sort.VALUE, a, "argument of 'monus'")
            return self.sorts.new(Sort.VALUE)
        if head in ("v", "ac"):
            self._arity(sx, args, 1)
            self._fix(self.collect_term(args[0], scope), Sort.RING, args[0], f"argument of '{head}'")
            return self.sorts.new(Sort.VALUE if head == "v" else Sort.RES)
        raise self.syntax(f"unknown term operator {head!r}", sx)

    # -- pass 2: build typed AST ----------------------------------------
    def sort_of(self, sx) -> Sort:
        return self.sorts.get(self.term_sv[id(sx)]) or self.default_sort

    def build_formula(self, sx: SExpr, scope: dict):
        if isinstance(sx, Atom):
            return BoolConst(sx.text == "true")
        head = sx.items[0].text
        args = sx.items[1:]
        if head == "not":
            return Not(self.build_formula(args[0], scope))
        if head == "and":
            return And(tuple(self.build_formula(a, scope) for a in args))
        if head == "or":
            return Or(tuple(self.build_formula(a, scope) for a in args))
        if head == "implies":
            return Implies(self.build_formula(args[0], scope), self.build_formula(args[1], scope))
        if head == "iff":
            return Iff(self.build_formula(args[0], scope), self.build_formula(args[1], scope))
        if head in ("exists", "forall"):
            name, sort = self._binder(args[0])
            body = self.build_formula(args[1], {**scope, name: sort})
            return (Exists if head == "exists" else Forall)(name, sort, body)
        if head == "=":
            return Eq(self.build_term(args[0], scope), self.build_term(args[1], scope))
        if head == "leq":
            return Leq(self.build_term(args[0], scope), self.build_term(args[1], scope))
        if head == "lt":
            return Lt(self.build_term(args[0], scope), self.build_term(args[1], scope))
        if head == "congr":
            return Congr(self.build_term(args[0], scope), self._int(args[1]), self._int(args[2]))
        if head == "sol":
            return Sol(self._int(args[0]), tuple(self.build_term(a, scope) for a in args[1:]))
        raise AssertionError(head)

    def build_term(self, sx: SExpr, scope: dict):
        sort = self.sort_of(sx)
        if isinstance(sx, Atom):
            txt = sx.text
            typed = _TYPED_INT.match(txt)
            if _INT.match(txt) or typed:
                value = int(typed.group(1) if typed else txt)
                if sort == Sort.VALUE and value < 0:
                    raise self.sort_err("value literals must be non-negative", sx)
                return Lit(value, sort)
            if txt in ("t", "tau"):
                return Const(txt, sort)
            return Var(txt, scope.get(txt, sort))
        head = sx.items[0].text
        args = tuple(self.build_term(a, scope) for a in sx.items[1:])
        if head in ("*", "-") and sort == Sort.VALUE:
            raise self.sort_err(f"'{head}' is not defined on the value sort (use '+' or 'monus')", sx)
        return App(head, args, sort)

    # -- helpers ---------------------------------------------------------
    def _arity(self, sx, args, k):
        if len(args) != k:
            raise self.syntax(f"'{sx.items[0].text}' takes {k} argument(s), got {len(args)}", sx)

    def _int(self, sx) -> int:
        if not isinstance(sx, Atom) or not _INT.match(sx.text):
            raise self.syntax("expected an integer literal", sx)
        return int(sx.text)

    def _binder(self, sx) -> tuple[str, Sort]:
        if not isinstance(sx, Atom) or ":" not in sx.text:
            raise self.syntax("binder must look like name:sort", sx)
        name, _, sort_name = sx.text.partition(":")
        if not _NAME.match(name) or name in RESERVED:
            raise self.syntax(f"bad bound variable name {name!r}", sx)
        if sort_name not in SORT_ALIASES:
            raise self.sort_err(f"unknown sort {sort_name!r}", sx)
        return name, SORT_ALIASES[sort_name]


def _as_sort(s) -> Sort:
    if isinstance(s, Sort):
        return s
    try:
        return SORT_ALIASES[str(s)]
    except KeyError:
        raise SortError(f"unknown sort {s!r}") from None


def parse(text: str, default_sort: Sort | str = Sort.RING, free_sorts: Mapping[str, Sort | str] | None = None):
    """Parse DSL text into a well-sorted formula AST."""
    parser = _Parser(text, _as_sort(default_sort), free_sorts or {})
    sx = read(text)
    parser.collect_formula(sx, {})
    return parser.build_formula(sx, {})


def parse_term(text: str, default_sort: Sort | str = Sort.RING, free_sorts: Mapping[str, Sort | str] | None = None):
    parser = _Parser(text, _as_sort(default_sort), free_sorts or {})
    sx = read(text)
    parser.collect_term(sx, {})
    return parser.build_term(sx, {})


# -- printer -----------------------------------------------------------------


def _sort_free(term) -> bool:
    """True when nothing in ``term`` pins its sort (only literals and + - *)."""
    if isinstance(term, Lit):
        return True
    return isinstance(term, App) and term.op in ("+", "-", "*") and all(map(_sort_free, term.args))


def _annotated(term) -> str:
    """Text of ``term`` with its first literal tagged by sort, e.g. ``3:res``."""
    if isinstance(term, Lit):
        return f"{term.value}:{term.sort}"
    head, *rest = term.args
    return "(" + " ".join([term.op, _annotated(head), *map(to_text, rest)]) + ")"


def to_text(node) -> str:
    """Canonical DSL text; ``parse(to_text(f)) == f`` for well-sorted ASTs.

    An equation between literal-only terms says nothing about its sort, so
    its first literal carries an explicit tag.
    """
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Lit):
        return str(node.value)
    if isinstance(node, Const):
        return node.name
    if isinstance(node, App):
        return "(" + " ".join([node.op, *map(to_text, node.args)]) + ")"
    if isinstance(node, BoolConst):
        return "true" if node.value else "false"
    if isinstance(node, Eq):
        if _sort_free(node.lhs) and _sort_free(node.rhs):
            return f"(= {_annotated(node.lhs)} {to_text(node.rhs)})"
        return f"(= {to_text(node.lhs)} {to_text(node.rhs)})"
    if isinstance(node, Leq):
        return f"(leq {to_text(node.lhs)} {to_text(node.rhs)})"
    if isinstance(node, Lt):
        return f"(lt {to_text(node.lhs)} {to_text(node.rhs)})"
    if isinstance(node, Congr):
        return f"(congr {to_text(node.term)} {node.n} {node.residue})"
    if isinstance(node, Sol):
        return "(" + " ".join(["sol", str(node.n), *map(to_text, node.args)]) + ")"
    if isinstance(node, Not):
        return f"(not {to_text(node.arg)})"
    if isinstance(node, And):
        return "(" + " ".join(["and", *map(to_text, node.args)]) + ")"
    if isinstance(node, Or):
        return "(" + " ".join(["or", *map(to_text, node.args)]) + ")"
    if isinstance(node, Implies):
        return f"(implies {to_text(node.lhs)} {to_text(node.rhs)})"
    if isinstance(node, Iff):
        return f"(iff {to_text(node.lhs)} {to_text(node.rhs)})"
    if isinstance(node, Exists):
        return f"(exists {node.var}:{node.sort} {to_text(node.body)})"
    if isinstance(node, Forall):
        return f"(forall {node.var}:{node.sort} {to_text(node.body)})"
    raise TypeError(f"not a formula node: {node!r}")

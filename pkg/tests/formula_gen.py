"""Random three-sorted formulas for property tests."""
from __future__ import annotations

import random

from trunkring.formula.ast import (
    And,
    App,
    Congr,
    Const,
    Eq,
    Exists,
    Forall,
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


class FormulaGen:
    def __init__(self, rng: random.Random, max_quantifiers: int = 2):
        self.rng = rng
        self.max_quantifiers = max_quantifiers

    def ring_term(self, scope, depth):
        r = self.rng
        names = [n for n, s in scope if s is Sort.RING]
        if depth == 0 or r.random() < 0.4:
            roll = r.random()
            if names and roll < 0.6:
                return Var(r.choice(names), Sort.RING)
            if roll < 0.85:
                return Lit(r.randint(-3, 9), Sort.RING)
            return Const("t", Sort.RING)
        op = r.choice("+-*")
        return App(op, (self.ring_term(scope, depth - 1), self.ring_term(scope, depth - 1)), Sort.RING)

    def res_term(self, scope, depth):
        r = self.rng
        names = [n for n, s in scope if s is Sort.RES]
        roll = r.random()
        if names and roll < 0.4:
            return Var(r.choice(names), Sort.RES)
        if roll < 0.7:
            return App("ac", (self.ring_term(scope, depth),), Sort.RES)
        return Lit(r.randint(0, 6), Sort.RES)

    def value_term(self, scope, depth):
        r = self.rng
        names = [n for n, s in scope if s is Sort.VALUE]
        roll = r.random()
        if depth > 0 and roll < 0.25:
            op = r.choice(("+", "monus"))
            return App(op, (self.value_term(scope, depth - 1), self.value_term(scope, depth - 1)), Sort.VALUE)
        if names and roll < 0.5:
            return Var(r.choice(names), Sort.VALUE)
        if roll < 0.8:
            return App("v", (self.ring_term(scope, depth),), Sort.VALUE)
        return Const("tau", Sort.VALUE) if r.random() < 0.3 else Lit(r.randint(0, 4), Sort.VALUE)

    def atom(self, scope):
        r = self.rng
        kind = r.choice(("ring", "ring", "res", "sol", "leq", "lt", "congr"))
        if kind == "ring":
            return Eq(self.ring_term(scope, 2), self.ring_term(scope, 2))
        if kind == "res":
            return Eq(self.res_term(scope, 1), self.res_term(scope, 1))
        if kind == "sol":
            n = r.randint(1, 2)
            return Sol(n, tuple(self.res_term(scope, 1) for _ in range(n + 1)))
        if kind == "congr":
            n = r.randint(2, 3)
            return Congr(self.value_term(scope, 1), n, r.randrange(n))
        return (Leq if kind == "leq" else Lt)(self.value_term(scope, 1), self.value_term(scope, 1))

    def body(self, scope, depth):
        r = self.rng
        if depth == 0 or r.random() < 0.4:
            return self.atom(scope)
        kind = r.choice(("and", "or", "not", "implies"))
        if kind == "not":
            return Not(self.body(scope, depth - 1))
        if kind == "implies":
            return Implies(self.body(scope, depth - 1), self.body(scope, depth - 1))
        return (And if kind == "and" else Or)((self.body(scope, depth - 1), self.body(scope, depth - 1)))

    def formula(self, free=()):
        r = self.rng
        nq = r.randint(0, self.max_quantifiers)
        scope = list(free)

        def build(i):
            if i == nq:
                return self.body(scope, 2)
            name = f"z{i}"
            sort = r.choice((Sort.RING, Sort.RING, Sort.RES, Sort.VALUE))
            scope.append((name, sort))
            q = Exists if r.random() < 0.5 else Forall
            return q(name, sort, build(i + 1))

        return build(0)

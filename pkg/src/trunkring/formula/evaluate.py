"""Brute-force Tarskian evaluation over a concrete Z/p^kZ (or a bare TOAG [0, tau]).

Two strategies compute the same function:

* ``recursive`` walks the formula with a scalar environment, expanding each
  quantifier element by element;
* ``grid`` gives every variable its own numpy axis and evaluates the whole
  formula as a dense boolean tensor, reducing quantifiers with any/all.

``auto`` picks the grid when the tensor fits and int64 arithmetic is exact.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Mapping, Optional, Sequence

import numpy as np

from ..errors import BudgetExceeded, OutOfRange, UnboundVariable, UnsupportedTerm
from ..ring import Modulus, RingElem, angular_component, valuation
from .ast import (
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
    binders,
    free_vars,
)

DEFAULT_BUDGET = 10**8
GRID_LIMIT = 1 << 23
_INT64_SAFE = 3_000_000_000


@dataclass(frozen=True)
class Interpretation:
    """Domains for the three sorts.

    With a modulus: ring = Z/p^kZ, residues = F_p, values = [0, k].
    Without one only the value sort [0, tau] exists.
    """

    modulus: Optional[Modulus]
    tau: int

    @classmethod
    def of(cls, modulus: Optional[Modulus] = None, tau: Optional[int] = None) -> "Interpretation":
        if modulus is not None:
            if tau is not None and tau != modulus.k:
                raise OutOfRange(f"tau={tau} conflicts with k={modulus.k}")
            return cls(modulus, modulus.k)
        if tau is None or tau < 0:
            raise OutOfRange("a value-only interpretation needs tau >= 0")
        return cls(None, tau)

    def size(self, sort: Sort) -> int:
        if sort == Sort.VALUE:
            return self.tau + 1
        m = self._need_ring(sort)
        return m.n if sort == Sort.RING else m.p

    def _need_ring(self, sort) -> Modulus:
        if self.modulus is None:
            raise UnsupportedTerm(f"sort {sort} needs a ring; only the value sort [0, {self.tau}] is available")
        return self.modulus

    def normalize(self, sort: Sort, value) -> int:
        if isinstance(value, RingElem):
            value = value.rep
        value = int(value)
        if sort == Sort.VALUE:
            if not 0 <= value <= self.tau:
                raise OutOfRange(f"value {value} outside [0, {self.tau}]")
            return value
        return value % self.size(sort)


def estimate_cost(phi, interp: Interpretation) -> int:
    cost = 1
    for _, sort in binders(phi):
        cost *= interp.size(sort)
    return cost


def _check_budget(cost: int, budget: Optional[int]):
    if budget is not None and cost > budget:
        raise BudgetExceeded(f"estimated cost {cost} exceeds budget {budget}", cost=cost, budget=budget)


# -- recursive strategy ------------------------------------------------------


class _Scalar:
    def __init__(self, interp: Interpretation):
        self.interp = interp
        m = interp.modulus
        self.N = m.n if m else None
        self.p = m.p if m else None
        self.k = m.k if m else None

    def mod(self, sort):
        return self.N if sort == Sort.RING else self.p

    def term(self, t) -> Callable[[dict], int]:
        if isinstance(t, Var):
            name = t.name
            return lambda env: env[name]
        if isinstance(t, Lit):
            if t.sort == Sort.VALUE:
                c = min(t.value, self.interp.tau)
            else:
                self.interp._need_ring(t.sort)
                c = t.value % self.mod(t.sort)
            return lambda env: c
        if isinstance(t, Const):
            if t.name == "tau":
                c = self.interp.tau
            else:
                self.interp._need_ring(Sort.RING)
                c = self.p % self.N
            return lambda env: c
        if isinstance(t, App):
            fs = [self.term(a) for a in t.args]
            op, sort = t.op, t.sort
            if sort == Sort.VALUE:
                tau = self.interp.tau
                if op == "+":
                    return lambda env: min(sum(f(env) for f in fs), tau)
                if op == "monus":
                    a, b = fs
                    return lambda env: max(a(env) - b(env), 0)
                if op == "v":
                    (a,) = fs
                    p, k = self.p, self.k
                    return lambda env: valuation(a(env), p, k)
                raise UnsupportedTerm(f"operator {op!r} on the value sort")
            if op == "ac":
                (a,) = fs
                p, k = self.p, self.k
                return lambda env: angular_component(a(env), p, k)
            self.interp._need_ring(sort)
            M = self.mod(sort)
            if op == "+":
                return lambda env: sum(f(env) for f in fs) % M
            if op == "*":
                def mul(env):
                    acc = 1
                    for f in fs:
                        acc = acc * f(env) % M
                    return acc
                return mul
            if op == "-":
                if len(fs) == 1:
                    (a,) = fs
                    return lambda env: -a(env) % M
                a, b = fs
                return lambda env: (a(env) - b(env)) % M
            raise UnsupportedTerm(f"unknown operator {op!r}")
        raise TypeError(f"not a term: {t!r}")

    def formula(self, f) -> Callable[[dict], bool]:
        if isinstance(f, BoolConst):
            v = f.value
            return lambda env: v
        if isinstance(f, Eq):
            a, b = self.term(f.lhs), self.term(f.rhs)
            return lambda env: a(env) == b(env)
        if isinstance(f, Leq):
            a, b = self.term(f.lhs), self.term(f.rhs)
            return lambda env: a(env) <= b(env)
        if isinstance(f, Lt):
            a, b = self.term(f.lhs), self.term(f.rhs)
            return lambda env: a(env) < b(env)
        if isinstance(f, Congr):
            a, n, c = self.term(f.term), f.n, f.residue
            return lambda env: (a(env) - c) % n == 0
        if isinstance(f, Sol):
            self.interp._need_ring(Sort.RES)
            fs = [self.term(a) for a in f.args]
            p = self.p

            def sol(env):
                cs = [g(env) for g in fs]
                for x in range(p):
                    acc = 0
                    for c in reversed(cs):
                        acc = (acc * x + c) % p
                    if acc == 0:
                        return True
                return False

            return sol
        if isinstance(f, Not):
            a = self.formula(f.arg)
            return lambda env: not a(env)
        if isinstance(f, And):
            fs = [self.formula(a) for a in f.args]
            return lambda env: all(g(env) for g in fs)
        if isinstance(f, Or):
            fs = [self.formula(a) for a in f.args]
            return lambda env: any(g(env) for g in fs)
        if isinstance(f, Implies):
            a, b = self.formula(f.lhs), self.formula(f.rhs)
            return lambda env: (not a(env)) or b(env)
        if isinstance(f, Iff):
            a, b = self.formula(f.lhs), self.formula(f.rhs)
            return lambda env: a(env) == b(env)
        if isinstance(f, (Exists, Forall)):
            body = self.formula(f.body)
            name = f.var
            size = self.interp.size(f.sort)
            want = isinstance(f, Exists)

            def quant(env):
                saved = env.get(name, _MISSING)
                try:
                    for x in range(size):
                        env[name] = x
                        if body(env) == want:
                            return want
                    return not want
                finally:
                    if saved is _MISSING:
                        env.pop(name, None)
                    else:
                        env[name] = saved

            return quant
        raise TypeError(f"not a formula: {f!r}")


_MISSING = object()


# -- grid strategy -----------------------------------------------------------


class _Grid:
    def __init__(self, interp: Interpretation, ndim: int):
        self.interp = interp
        self.ndim = ndim
        m = interp.modulus
        self.N = m.n if m else None
        self.p = m.p if m else None
        self.k = m.k if m else None

    def axis_values(self, axis: int, values) -> np.ndarray:
        shape = [1] * self.ndim
        arr = np.asarray(values, dtype=np.int64)
        shape[axis] = arr.size
        return arr.reshape(shape)

    def nd(self, x) -> np.ndarray:
        arr = np.asarray(x)
        if arr.ndim == self.ndim:
            return arr
        return arr.reshape([1] * self.ndim)

    def mod(self, sort):
        return self.N if sort == Sort.RING else self.p

    def term(self, t, env: dict):
        if isinstance(t, Var):
            return env[t.name]
        if isinstance(t, Lit):
            if t.sort == Sort.VALUE:
                return min(t.value, self.interp.tau)
            self.interp._need_ring(t.sort)
            return t.value % self.mod(t.sort)
        if isinstance(t, Const):
            if t.name == "tau":
                return self.interp.tau
            self.interp._need_ring(Sort.RING)
            return self.p % self.N
        args = [self.term(a, env) for a in t.args]
        op, sort = t.op, t.sort
        if sort == Sort.VALUE:
            if op == "+":
                acc = args[0]
                for a in args[1:]:
                    acc = np.minimum(acc + a, self.interp.tau)
                return np.minimum(acc, self.interp.tau)
            if op == "monus":
                return np.maximum(args[0] - args[1], 0)
            if op == "v":
                return self._valuation(args[0])
            raise UnsupportedTerm(f"operator {op!r} on the value sort")
        if op == "ac":
            a = args[0]
            v = self._valuation(a)
            return (a // np.power(np.int64(self.p), v)) % self.p
        self.interp._need_ring(sort)
        M = self.mod(sort)
        if op == "+":
            acc = args[0]
            for a in args[1:]:
                acc = (acc + a) % M
            return acc % M
        if op == "*":
            acc = args[0] % M
            for a in args[1:]:
                acc = (acc * a) % M
            return acc
        if op == "-":
            if len(args) == 1:
                return (-args[0]) % M
            return (args[0] - args[1]) % M
        raise UnsupportedTerm(f"unknown operator {op!r}")

    def _valuation(self, a):
        a = np.asarray(a, dtype=np.int64)
        v = np.zeros(a.shape, dtype=np.int64)
        pj = 1
        for _ in range(self.k):
            pj *= self.p
            v = v + (a % pj == 0)
        return v

    def formula(self, f, env: dict, axes: list) -> np.ndarray:
        if isinstance(f, BoolConst):
            return self.nd(f.value)
        if isinstance(f, Eq):
            return self.nd(self.term(f.lhs, env) == self.term(f.rhs, env))
        if isinstance(f, Leq):
            return self.nd(self.term(f.lhs, env) <= self.term(f.rhs, env))
        if isinstance(f, Lt):
            return self.nd(self.term(f.lhs, env) < self.term(f.rhs, env))
        if isinstance(f, Congr):
            return self.nd((self.term(f.term, env) - f.residue) % f.n == 0)
        if isinstance(f, Sol):
            self.interp._need_ring(Sort.RES)
            cs = [self.term(a, env) for a in f.args]
            p = self.p
            out = False
            for x in range(p):
                acc = 0
                for c in reversed(cs):
                    acc = (acc * x + c) % p
                out = out | (acc == 0)
            return self.nd(out)
        if isinstance(f, Not):
            return ~self.formula(f.arg, env, axes)
        if isinstance(f, And):
            out = self.formula(f.args[0], env, axes)
            for a in f.args[1:]:
                out = out & self.formula(a, env, axes)
            return out
        if isinstance(f, Or):
            out = self.formula(f.args[0], env, axes)
            for a in f.args[1:]:
                out = out | self.formula(a, env, axes)
            return out
        if isinstance(f, Implies):
            return ~self.formula(f.lhs, env, axes) | self.formula(f.rhs, env, axes)
        if isinstance(f, Iff):
            return self.formula(f.lhs, env, axes) == self.formula(f.rhs, env, axes)
        if isinstance(f, (Exists, Forall)):
            axis = axes.pop(0)
            inner = dict(env)
            inner[f.var] = self.axis_values(axis, np.arange(self.interp.size(f.sort)))
            body = self.formula(f.body, inner, axes)
            if isinstance(f, Exists):
                return np.any(body, axis=axis, keepdims=True)
            return np.all(body, axis=axis, keepdims=True)
        raise TypeError(f"not a formula: {f!r}")


def _grid_feasible(phi, interp: Interpretation, free_sizes: Sequence[int]) -> bool:
    if interp.modulus is not None and interp.modulus.n >= _INT64_SAFE:
        return False
    total = math.prod(free_sizes) if free_sizes else 1
    for _, sort in binders(phi):
        total *= interp.size(sort)
        if total > GRID_LIMIT:
            return False
    return total <= GRID_LIMIT


def _grid_table(phi, interp, names, domains) -> np.ndarray:
    nbind = len(binders(phi))
    grid = _Grid(interp, len(names) + nbind)
    env = {name: grid.axis_values(i, dom) for i, (name, dom) in enumerate(zip(names, domains))}
    axes = list(range(len(names), len(names) + nbind))
    out = grid.formula(phi, env, axes)
    out = np.broadcast_to(out, tuple(len(d) for d in domains) + (1,) * nbind)
    return out.reshape(tuple(len(d) for d in domains)).copy()


# -- public API --------------------------------------------------------------


def evaluate(
    phi,
    modulus: Optional[Modulus] = None,
    assignment: Optional[Mapping[str, object]] = None,
    *,
    tau: Optional[int] = None,
    budget: Optional[int] = DEFAULT_BUDGET,
    strategy: str = "auto",
) -> bool:
    """Truth value of ``phi`` in Z/p^kZ (or in [0, tau] for value-only formulas)."""
    interp = Interpretation.of(modulus, tau)
    assignment = dict(assignment or {})
    env = {}
    for name, sort in free_vars(phi).items():
        if name not in assignment:
            raise UnboundVariable(f"free variable {name!r} ({sort}) has no value", var=name)
        env[name] = interp.normalize(sort, assignment[name])
    _check_budget(estimate_cost(phi, interp), budget)
    if strategy == "auto":
        strategy = "grid" if _grid_feasible(phi, interp, ()) else "recursive"
    if strategy == "grid":
        names = list(env)
        table = _grid_table(phi, interp, names, [[env[n]] for n in names])
        return bool(table.reshape(-1)[0])
    if strategy == "recursive":
        return bool(_Scalar(interp).formula(phi)(env))
    raise ValueError(f"unknown strategy {strategy!r}")


def truth_table(
    phi,
    modulus: Optional[Modulus] = None,
    variables: Optional[Sequence[str]] = None,
    domains: Optional[Mapping[str, Sequence[int]]] = None,
    *,
    tau: Optional[int] = None,
    budget: Optional[int] = DEFAULT_BUDGET,
    strategy: str = "auto",
) -> np.ndarray:
    """Truth values of ``phi`` on the product of its free-variable domains.

    Axis ``i`` of the result indexes ``variables[i]`` over ``domains[var]``
    (default: the full sort domain). Flattened row-major order is therefore
    lexicographic order on assignments.
    """
    interp = Interpretation.of(modulus, tau)
    fv = free_vars(phi)
    names = list(variables) if variables is not None else list(fv)
    missing = [v for v in fv if v not in names]
    if missing:
        raise UnboundVariable(f"free variables without a domain: {missing}", var=missing[0])
    doms = []
    for name in names:
        sort = fv.get(name)
        if domains and name in domains:
            dom = [int(x.rep if isinstance(x, RingElem) else x) for x in domains[name]]
        elif sort is None:
            raise UnboundVariable(f"variable {name!r} is not free in the formula; give its domain", var=name)
        else:
            dom = list(range(interp.size(sort)))
        doms.append(dom)
    sizes = [len(d) for d in doms]
    _check_budget(estimate_cost(phi, interp) * (math.prod(sizes) if sizes else 1), budget)
    if strategy == "auto":
        strategy = "grid" if _grid_feasible(phi, interp, sizes) else "recursive"
    if strategy == "grid":
        return _grid_table(phi, interp, names, doms)
    if strategy != "recursive":
        raise ValueError(f"unknown strategy {strategy!r}")
    fn = _Scalar(interp).formula(phi)
    out = np.zeros(sizes, dtype=bool)
    for idx in itertools.product(*(range(s) for s in sizes)):
        env = {name: doms[i][j] for i, (name, j) in enumerate(zip(names, idx))}
        out[idx] = fn(env)
    return out

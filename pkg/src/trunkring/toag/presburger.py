"""Quantifier-free Presburger formulas and Cooper-style quantifier elimination.

Atoms are ``lin <= 0`` and ``n | lin`` (possibly negated), where ``lin`` is an
integer linear combination of variables plus a constant. Formulas are kept in
negation normal form, and every constructor simplifies eagerly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Callable, Iterable, Mapping, Union


@dataclass(frozen=True)
class Lin:
    """sum(c * var) + const, with coefficients sorted by variable and nonzero."""

    coeffs: tuple[tuple[str, int], ...] = ()
    const: int = 0

    @staticmethod
    def var(name: str, c: int = 1) -> "Lin":
        return Lin(((name, c),), 0) if c else Lin()

    @staticmethod
    def num(c: int) -> "Lin":
        return Lin((), c)

    @staticmethod
    def _make(d: Mapping[str, int], const: int) -> "Lin":
        return Lin(tuple(sorted((k, v) for k, v in d.items() if v)), const)

    def __add__(self, other: Union["Lin", int]) -> "Lin":
        if isinstance(other, int):
            return Lin(self.coeffs, self.const + other)
        d = dict(self.coeffs)
        for k, v in other.coeffs:
            d[k] = d.get(k, 0) + v
        return Lin._make(d, self.const + other.const)

    __radd__ = __add__

    def __neg__(self) -> "Lin":
        return Lin(tuple((k, -v) for k, v in self.coeffs), -self.const)

    def __sub__(self, other: Union["Lin", int]) -> "Lin":
        return self + (-other)

    def scale(self, m: int) -> "Lin":
        if m == 0:
            return Lin()
        return Lin(tuple((k, v * m) for k, v in self.coeffs), self.const * m)

    def coeff(self, name: str) -> int:
        for k, v in self.coeffs:
            if k == name:
                return v
        return 0

    def without(self, name: str) -> "Lin":
        return Lin(tuple((k, v) for k, v in self.coeffs if k != name), self.const)

    def substitute(self, name: str, term: "Lin") -> "Lin":
        c = self.coeff(name)
        return self if c == 0 else self.without(name) + term.scale(c)

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(k for k, _ in self.coeffs)

    @property
    def is_const(self) -> bool:
        return not self.coeffs

    def value(self, env: Mapping[str, object]):
        acc = self.const
        for k, v in self.coeffs:
            acc = acc + v * env[k]
        return acc

    def __str__(self):
        parts = []
        for k, v in self.coeffs:
            mag = "" if abs(v) == 1 else f"{abs(v)}*"
            sign = "-" if v < 0 else "+"
            parts.append((sign, f"{mag}{k}"))
        if self.const or not parts:
            parts.append(("-" if self.const < 0 else "+", str(abs(self.const))))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, p in parts[1:]:
            out += f" {sign} {p}"
        return out


# -- formulas ----------------------------------------------------------------


@dataclass(frozen=True)
class Top:
    def __str__(self):
        return "true"


@dataclass(frozen=True)
class Bot:
    def __str__(self):
        return "false"


TOP = Top()
BOT = Bot()


@dataclass(frozen=True)
class Le:
    """lin <= 0"""

    lin: Lin

    def __str__(self):
        # print as "vars <= c" with the constant moved right
        return f"{Lin(self.lin.coeffs, 0)} <= {-self.lin.const}"


@dataclass(frozen=True)
class Dvd:
    """n | lin, or its negation when ``positive`` is False."""

    n: int
    lin: Lin
    positive: bool = True

    def __str__(self):
        body = f"{Lin(self.lin.coeffs, 0)} = {(-self.lin.const) % self.n} (mod {self.n})"
        return body if self.positive else f"not({body})"


@dataclass(frozen=True)
class QAnd:
    args: tuple

    def __str__(self):
        return "(" + " and ".join(map(str, self.args)) + ")"


@dataclass(frozen=True)
class QOr:
    args: tuple

    def __str__(self):
        return "(" + " or ".join(map(str, self.args)) + ")"


QF = Union[Top, Bot, Le, Dvd, QAnd, QOr]


def _gcd_all(values: Iterable[int]) -> int:
    return reduce(math.gcd, values, 0)


def mk_le(lin: Lin) -> QF:
    if lin.is_const:
        return TOP if lin.const <= 0 else BOT
    g = _gcd_all(abs(v) for _, v in lin.coeffs)
    if g > 1:
        lin = Lin(tuple((k, v // g) for k, v in lin.coeffs), -((-lin.const) // g))
    return Le(lin)


def mk_dvd(n: int, lin: Lin, positive: bool = True) -> QF:
    n = abs(n)
    coeffs = tuple((k, v % n) for k, v in lin.coeffs if v % n)
    const = lin.const % n
    if not coeffs:
        return TOP if (const == 0) == positive else BOT
    g = _gcd_all([n, *(v for _, v in coeffs)])
    if g > 1:
        if const % g:
            return BOT if positive else TOP
        n //= g
        coeffs = tuple((k, v // g) for k, v in coeffs)
        const //= g
    if n == 1:
        return TOP if positive else BOT
    return Dvd(n, Lin(coeffs, const), positive)


def _tighten_conj(atoms: list[Le]) -> QF | list[Le]:
    """Keep the tightest bound per coefficient vector; detect empty intervals."""
    best: dict[tuple, int] = {}
    for a in atoms:
        key = a.lin.coeffs
        best[key] = max(best.get(key, a.lin.const), a.lin.const)
    for key, c in best.items():
        neg = tuple((k, -v) for k, v in key)
        if neg in best and best[neg] + c > 0:
            # key.x <= -c and key.x >= best[neg]
            return BOT
    return [Le(Lin(key, c)) for key, c in best.items()]


def _tighten_disj(atoms: list[Le]) -> QF | list[Le]:
    best: dict[tuple, int] = {}
    for a in atoms:
        key = a.lin.coeffs
        best[key] = min(best.get(key, a.lin.const), a.lin.const)
    for key, c in best.items():
        neg = tuple((k, -v) for k, v in key)
        if neg in best and best[neg] + c <= 1:
            # key.x <= -c or key.x >= best[neg] covers every integer
            return TOP
    return [Le(Lin(key, c)) for key, c in best.items()]


def mk_and(*args: QF) -> QF:
    flat: list = []
    for a in args:
        if isinstance(a, Bot):
            return BOT
        if isinstance(a, Top):
            continue
        flat.extend(a.args if isinstance(a, QAnd) else (a,))
    les = [a for a in flat if isinstance(a, Le)]
    if len(les) > 1:
        tightened = _tighten_conj(les)
        if tightened is BOT:
            return BOT
        rest = [a for a in flat if not isinstance(a, Le)]
        flat = tightened + rest
    out = list(dict.fromkeys(flat))
    if not out:
        return TOP
    return out[0] if len(out) == 1 else QAnd(tuple(out))


def mk_or(*args: QF) -> QF:
    flat: list = []
    for a in args:
        if isinstance(a, Top):
            return TOP
        if isinstance(a, Bot):
            continue
        flat.extend(a.args if isinstance(a, QOr) else (a,))
    les = [a for a in flat if isinstance(a, Le)]
    if len(les) > 1:
        tightened = _tighten_disj(les)
        if tightened is TOP:
            return TOP
        rest = [a for a in flat if not isinstance(a, Le)]
        flat = tightened + rest
    out = list(dict.fromkeys(flat))
    if not out:
        return BOT
    return out[0] if len(out) == 1 else QOr(tuple(out))


def negate(phi: QF) -> QF:
    if isinstance(phi, Top):
        return BOT
    if isinstance(phi, Bot):
        return TOP
    if isinstance(phi, Le):
        return mk_le(-phi.lin + 1)
    if isinstance(phi, Dvd):
        return Dvd(phi.n, phi.lin, not phi.positive)
    if isinstance(phi, QAnd):
        return mk_or(*map(negate, phi.args))
    if isinstance(phi, QOr):
        return mk_and(*map(negate, phi.args))
    raise TypeError(phi)


def map_atoms(phi: QF, fn: Callable[[QF], QF]) -> QF:
    if isinstance(phi, (Le, Dvd)):
        return fn(phi)
    if isinstance(phi, QAnd):
        return mk_and(*(map_atoms(a, fn) for a in phi.args))
    if isinstance(phi, QOr):
        return mk_or(*(map_atoms(a, fn) for a in phi.args))
    return phi


def atoms(phi: QF) -> list:
    if isinstance(phi, (Le, Dvd)):
        return [phi]
    if isinstance(phi, (QAnd, QOr)):
        return [a for arg in phi.args for a in atoms(arg)]
    return []


def variables(phi: QF) -> set[str]:
    return {v for a in atoms(phi) for v in a.lin.variables}


def substitute(phi: QF, name: str, term: Lin) -> QF:
    def sub(a):
        if a.lin.coeff(name) == 0:
            return a
        lin = a.lin.substitute(name, term)
        return mk_le(lin) if isinstance(a, Le) else mk_dvd(a.n, lin, a.positive)

    return map_atoms(phi, sub)


def holds(phi: QF, env: Mapping[str, object]):
    """Truth value under ``env``; values may be ints or numpy arrays."""
    if isinstance(phi, Top):
        return True
    if isinstance(phi, Bot):
        return False
    if isinstance(phi, Le):
        return phi.lin.value(env) <= 0
    if isinstance(phi, Dvd):
        r = phi.lin.value(env) % phi.n == 0
        return r if phi.positive else ~r if hasattr(r, "shape") else not r
    if isinstance(phi, QAnd):
        out = True
        for a in phi.args:
            out = out & holds(a, env)
        return out
    if isinstance(phi, QOr):
        out = False
        for a in phi.args:
            out = out | holds(a, env)
        return out
    raise TypeError(phi)


def size(phi: QF) -> int:
    if isinstance(phi, (QAnd, QOr)):
        return 1 + sum(size(a) for a in phi.args)
    return 1


# -- Cooper ------------------------------------------------------------------


def _lcm(values: Iterable[int]) -> int:
    return reduce(lambda a, b: a * b // math.gcd(a, b), values, 1)


def _unit_coefficient(phi: QF, x: str, L: int) -> QF:
    """Rewrite atoms so x has coefficient +-1, standing for L*x."""

    def scale(a):
        c = a.lin.coeff(x)
        if c == 0:
            return a
        m = L // abs(c)
        lin = a.lin.without(x).scale(m) + Lin.var(x, 1 if c > 0 else -1)
        if isinstance(a, Le):
            return Le(lin)
        return Dvd(a.n * m, lin, a.positive)

    return map_atoms(phi, scale)


def _equality_term(phi: QF, x: str):
    """If a top-level conjunct pins x (coefficient +-1), return its value."""
    conj = phi.args if isinstance(phi, QAnd) else (phi,)
    uppers = {}
    for a in conj:
        if isinstance(a, Le) and a.lin.coeff(x) == 1:
            uppers[a.lin.without(x)] = a
    for a in conj:
        if isinstance(a, Le) and a.lin.coeff(x) == -1:
            rest = a.lin.without(x)
            if -rest in uppers:
                # x + r <= 0 and -x - r <= 0  =>  x = -r
                return rest
    return None


def eliminate_exists(x: str, phi: QF) -> QF:
    """Quantifier-free equivalent of (exists integer x) phi."""
    coeffs = [abs(a.lin.coeff(x)) for a in atoms(phi) if a.lin.coeff(x)]
    if not coeffs:
        return phi
    L = _lcm(coeffs)
    phi1 = _unit_coefficient(phi, x, L)
    if L > 1:
        phi1 = mk_and(phi1, Dvd(L, Lin.var(x)))
    eq = _equality_term(phi1, x)
    if eq is not None:
        return substitute(phi1, x, eq)
    lowers, uppers, moduli = [], [], []
    for a in atoms(phi1):
        c = a.lin.coeff(x)
        if not c:
            continue
        if isinstance(a, Dvd):
            moduli.append(a.n)
        elif c < 0:
            lowers.append(a.lin.without(x) - 1)  # -x + r <= 0  <=>  x > r - 1
        else:
            uppers.append(-a.lin.without(x) + 1)  # x + r <= 0  <=>  x < -r + 1
    delta = _lcm(moduli)
    lowers = list(dict.fromkeys(lowers))
    uppers = list(dict.fromkeys(uppers))
    use_lower = len(lowers) <= len(uppers)

    def at_infinity(a):
        c = a.lin.coeff(x)
        if not c or isinstance(a, Dvd):
            return a
        if use_lower:
            return BOT if c < 0 else TOP
        return TOP if c < 0 else BOT

    inf = map_atoms(phi1, at_infinity)
    disjuncts = []
    for j in range(1, delta + 1):
        disjuncts.append(substitute(inf, x, Lin.num(j if use_lower else -j)))
        for bound in lowers if use_lower else uppers:
            disjuncts.append(substitute(phi1, x, bound + j if use_lower else bound - j))
    return mk_or(*disjuncts)


Box = Mapping[str, tuple[int, int]]


def _single(a) -> tuple[str, int, int] | None:
    """(var, c, k) when ``a`` is the one-variable order atom c*var + k <= 0."""
    if isinstance(a, Le) and len(a.lin.coeffs) == 1:
        (v, c), = a.lin.coeffs
        return v, c, a.lin.const
    return None


def _bound(c: int, k: int) -> tuple[int | None, int | None]:
    """Interval of v satisfying c*v + k <= 0, as (lower, upper) with None for open."""
    if c > 0:
        return None, (-k) // c
    return -((-k) // (-c)), None


def _decide_atom(a, get) -> QF:
    if isinstance(a, Le):
        mn = mx = a.lin.const
        for v, c in a.lin.coeffs:
            lo, hi = get(v)
            mn += min(c * lo, c * hi)
            mx += max(c * lo, c * hi)
        if mx <= 0:
            return TOP
        if mn > 0:
            return BOT
        return a
    if len(a.lin.coeffs) == 1:
        (v, c), k = a.lin.coeffs[0], a.lin.const
        lo, hi = get(v)
        if hi - lo < 4 * a.n:
            hits = {(c * x + k) % a.n == 0 for x in range(lo, hi + 1)}
            if len(hits) == 1:
                return TOP if hits.pop() == a.positive else BOT
    return a


def _simplify(phi: QF, box: dict, lo: int, hi: int) -> QF:
    get = lambda v: box.get(v, (lo, hi))  # noqa: E731
    if isinstance(phi, (Le, Dvd)):
        return _decide_atom(phi, get)
    if not isinstance(phi, (QAnd, QOr)):
        return phi
    conj = isinstance(phi, QAnd)
    singles, others = [], []
    for a in phi.args:
        (singles if _single(a) else others).append(a)
    # siblings of a conjunct may assume it; siblings of a disjunct may assume its negation
    inner = dict(box)
    for a in singles:
        v, c, k = _single(a)
        if not conj:
            c, k = -c, -k + 1
        b_lo, b_hi = _bound(c, k)
        cur_lo, cur_hi = inner.get(v, (lo, hi))
        cur_lo = cur_lo if b_lo is None else max(cur_lo, b_lo)
        cur_hi = cur_hi if b_hi is None else min(cur_hi, b_hi)
        if cur_lo > cur_hi:
            return BOT if conj else TOP
        inner[v] = (cur_lo, cur_hi)
    rest = [_simplify(a, inner, lo, hi) for a in others]
    if conj:
        bounds = []
        for v, (a, b) in inner.items():
            o_lo, o_hi = get(v)
            if a > o_lo:
                bounds.append(Le(Lin.var(v, -1) + a))
            if b < o_hi:
                bounds.append(Le(Lin.var(v) - b))
        return mk_and(*bounds, *rest)
    return mk_or(*(_decide_atom(a, get) for a in singles), *rest)


def simplify_in_box(phi: QF, lo: int, hi: int, box: Box | None = None) -> QF:
    """Simplify assuming every variable lies in [lo, hi] (or its ``box`` entry).

    One-variable bounds found in a conjunction narrow the intervals seen by
    the other conjuncts, and dually for disjunctions; atoms whose truth is
    fixed on the resulting intervals become constants.
    """
    return _simplify(phi, dict(box or {}), lo, hi)


def _bounded_exists(x: str, phi: QF, lo: int, hi: int) -> QF:
    if x not in variables(phi):
        return phi
    # exists commutes with disjunction and with conjuncts not mentioning x
    if isinstance(phi, QOr):
        return mk_or(*(_bounded_exists(x, a, lo, hi) for a in phi.args))
    if isinstance(phi, QAnd):
        outside = [a for a in phi.args if x not in variables(a)]
        if outside:
            inside = mk_and(*(a for a in phi.args if x in variables(a)))
            return mk_and(*outside, _bounded_exists(x, inside, lo, hi))
    # simplification drops x's own bounds when they match the box; Cooper needs them
    bounds = mk_and(mk_le(Lin.var(x, -1) + lo), mk_le(Lin.var(x) - hi))
    return simplify_in_box(eliminate_exists(x, mk_and(phi, bounds)), lo, hi)


def eliminate_bounded_exists(x: str, phi: QF, lo: int, hi: int) -> QF:
    """Quantifier-free equivalent of (exists x in [lo, hi]) phi.

    Every other variable is assumed to range over [lo, hi] as well, which
    lets atoms be simplified by interval reasoning along the way.
    """
    return simplify_in_box(_bounded_exists(x, simplify_in_box(phi, lo, hi), lo, hi), lo, hi)


def to_text(phi: QF) -> str:
    return str(phi)

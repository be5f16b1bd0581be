"""Finite prime fields: arithmetic, solvability predicates, extension counts, plane curves."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np
import sympy
from sympy import factorint

from .errors import BadArity, CapExceeded, FormulaSyntaxError, NotAUnit, NotPrime, OutOfRange
from .ring import is_prime

EXHAUSTIVE_CAP = 4096


def _check_prime(p: int) -> int:
    if isinstance(p, bool) or not isinstance(p, int) or not is_prime(p):
        raise NotPrime(f"{p!r} is not prime", p=p)
    return p


@dataclass(frozen=True)
class FpElem:
    """Element of F_p, stored reduced."""

    value: int
    p: int

    def __post_init__(self):
        _check_prime(self.p)
        object.__setattr__(self, "value", self.value % self.p)

    def _other(self, other) -> int:
        if isinstance(other, FpElem):
            if other.p != self.p:
                raise OutOfRange(f"F_{self.p} and F_{other.p} elements do not mix")
            return other.value
        return int(other)

    def __add__(self, other):
        return FpElem(self.value + self._other(other), self.p)

    __radd__ = __add__

    def __sub__(self, other):
        return FpElem(self.value - self._other(other), self.p)

    def __rsub__(self, other):
        return FpElem(self._other(other) - self.value, self.p)

    def __mul__(self, other):
        return FpElem(self.value * self._other(other), self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FpElem(-self.value, self.p)

    def __pow__(self, e: int):
        if e < 0:
            return self.inv() ** (-e)
        return FpElem(pow(self.value, e, self.p), self.p)

    def inv(self) -> "FpElem":
        if self.value == 0:
            raise NotAUnit("0 has no inverse in a field", p=self.p)
        return FpElem(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other):
        return self * FpElem(self._other(other), self.p).inv()

    def __int__(self):
        return self.value


# -- Sol_n -------------------------------------------------------------------


def _poly_values(coeffs: Sequence[int], p: int) -> np.ndarray:
    """Values of sum(coeffs[i] t^i) at every t in F_p (Horner, vectorised)."""
    if p < 1 << 31:
        t = np.arange(p, dtype=np.int64)
        acc = np.zeros(p, dtype=np.int64)
        for c in reversed(coeffs):
            acc = (acc * t + c % p) % p
        return acc
    return np.array([sum(c * pow(t, i, p) for i, c in enumerate(coeffs)) % p for t in range(p)], dtype=object)


def sol_roots(n: int, coeffs: Sequence[int], p: int) -> list[int]:
    """All t in F_p with coeffs[0] + coeffs[1] t + ... + coeffs[n] t^n = 0."""
    _check_prime(p)
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise BadArity(f"Sol_n needs n >= 1, got {n!r}", n=n)
    if len(coeffs) != n + 1:
        raise BadArity(f"Sol_{n} takes {n + 1} coefficients, got {len(coeffs)}", n=n, given=len(coeffs))
    return [int(t) for t in np.flatnonzero(_poly_values([int(c) for c in coeffs], p) == 0)]


def sol(n: int, coeffs: Sequence[int], p: int) -> bool:
    """Sol_n(coeffs) over F_p: does the polynomial have a root in F_p?"""
    return bool(sol_roots(n, coeffs, p))


def euler_square(a: int, p: int) -> bool:
    """Euler's criterion: a is a square in F_p (p odd) iff a^((p-1)/2) is 0 or 1."""
    return pow(a % p, (p - 1) // 2, p) in (0, 1)


def frobenius_is_bijection(p: int) -> bool:
    """t -> t^p permutes F_p (perfectness), by exhaustive check."""
    _check_prime(p)
    return sorted(pow(t, p, p) for t in range(p)) == list(range(p))


# -- irreducible polynomials -------------------------------------------------


def mobius(n: int) -> int:
    f = factorint(n)
    if any(e > 1 for e in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


def _divisors(n: int) -> list[int]:
    f = factorint(n)
    out = [1]
    for q, e in f.items():
        out = [d * q**i for d in out for i in range(e + 1)]
    return sorted(out)


def count_irreducible_monic(p: int, n: int) -> int:
    """Number of monic irreducible polynomials of degree n over F_p (Möbius formula)."""
    _check_prime(p)
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise OutOfRange(f"degree must be >= 1, got {n!r}", n=n)
    total = sum(mobius(d) * p ** (n // d) for d in _divisors(n))
    assert total % n == 0
    return total // n


def _monic(p: int, d: int) -> Iterable[tuple[int, ...]]:
    """Monic polynomials of degree d, as coefficient tuples low degree first."""
    for low in itertools.product(range(p), repeat=d):
        yield low + (1,)


def _polymul(a: tuple[int, ...], b: tuple[int, ...], p: int) -> tuple[int, ...]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return tuple(out)


def irreducible_monic_exhaustive(p: int, n: int, cap: int = EXHAUSTIVE_CAP) -> list[tuple[int, ...]]:
    """Monic irreducibles of degree n over F_p, found by sieving out all products.

    Every reducible monic polynomial of degree n is a product of a monic factor
    of degree d <= n/2 and a monic cofactor of degree n - d; marking all such
    products leaves exactly the irreducibles.
    """
    _check_prime(p)
    if p**n > cap:
        raise CapExceeded(f"p^n = {p**n} exceeds the exhaustive cap {cap}", p=p, n=n, cap=cap)
    reducible = set()
    for d in range(1, n // 2 + 1):
        cofactors = list(_monic(p, n - d))
        for a in _monic(p, d):
            for b in cofactors:
                reducible.add(_polymul(a, b, p))
    return [f for f in _monic(p, n) if f not in reducible]


# -- plane curves ------------------------------------------------------------


@dataclass(frozen=True)
class PlaneCurve:
    """Plane curve given by a polynomial in x, y with integer coefficients.

    ``terms`` maps exponent pairs (i, j) to the coefficient of x^i y^j. A
    projective curve is the closure of the affine one, i.e. the
    homogenisation with respect to z.
    """

    terms: tuple[tuple[tuple[int, int], int], ...]
    projective: bool = False
    name: str = ""

    def __post_init__(self):
        clean = tuple(sorted((tuple(e), int(c)) for e, c in self.terms if c))
        if not clean:
            raise OutOfRange("the zero polynomial does not define a curve")
        if any(len(e) != 2 or min(e) < 0 for e, _ in clean):
            raise OutOfRange("exponents must be non-negative pairs")
        object.__setattr__(self, "terms", clean)

    @classmethod
    def from_dict(cls, terms: Mapping[tuple[int, int], int], projective: bool = False, name: str = "") -> "PlaneCurve":
        return cls(tuple(terms.items()), projective, name)

    @classmethod
    def from_homogeneous(cls, terms: Mapping[tuple[int, int, int], int], name: str = "") -> "PlaneCurve":
        """Projective curve from a homogeneous polynomial in x, y, z."""
        degrees = {sum(e) for e, c in terms.items() if c}
        if len(degrees) != 1:
            raise OutOfRange("polynomial is not homogeneous")
        return cls(tuple(((i, j), c) for (i, j, _), c in terms.items()), True, name)

    @classmethod
    def parse(cls, text: str, projective: bool = False, name: str = "") -> "PlaneCurve":
        """Curve from a DSL ring term ``(- (* y y) (* x x x))`` or infix text ``y^2 - x^3``."""
        from .formula.parser import parse_term
        from .formula.poly import expand

        if not text.lstrip().startswith("("):
            return cls(_infix_terms(text), projective, name or text)
        term = parse_term(text, free_sorts={"x": "ring", "y": "ring"})
        return cls(tuple(expand(term, ("x", "y")).items()), projective, name or text)

    @property
    def degree(self) -> int:
        return max(i + j for (i, j), _ in self.terms)

    def evaluate(self, x: int, y: int, p: int) -> int:
        return sum(c * pow(x, i, p) * pow(y, j, p) for (i, j), c in self.terms) % p

    def top_form(self) -> tuple[tuple[tuple[int, int], int], ...]:
        d = self.degree
        return tuple((e, c) for e, c in self.terms if sum(e) == d)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "projective": self.projective,
            "degree": self.degree,
            "monomials": [{"exponents": list(e), "coefficient": str(c)} for e, c in self.terms],
        }

    def __str__(self):
        parts = []
        for (i, j), c in sorted(self.terms, key=lambda t: (-sum(t[0]), t[0])):
            mono = "*".join(
                [f"x^{i}" if i > 1 else "x"] * (i > 0) + [f"y^{j}" if j > 1 else "y"] * (j > 0)
            )
            if not mono:
                parts.append(str(c))
            elif abs(c) == 1:
                parts.append(("-" if c < 0 else "") + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def _infix_terms(text: str) -> tuple:
    x, y = sympy.symbols("x y")
    try:
        expr = sympy.sympify(text.replace("^", "**"), locals={"x": x, "y": y}, rational=True)
        poly = sympy.Poly(expr, x, y)
    except (sympy.SympifyError, sympy.PolynomialError, TypeError) as e:
        raise FormulaSyntaxError(f"cannot read curve {text!r}: {e}") from None
    if not all(c.is_integer for c in poly.coeffs()):
        raise FormulaSyntaxError(f"curve {text!r} needs integer coefficients")
    return tuple(((int(i), int(j)), int(c)) for (i, j), c in poly.terms() if c)


@dataclass
class CurveSearch:
    curve: PlaneCurve
    p: int
    point: Optional[tuple[int, ...]]
    at_infinity: bool
    points_checked: int
    hypothesis_bound: int
    hypothesis_holds: bool

    @property
    def found(self) -> bool:
        return self.point is not None

    def to_dict(self) -> dict:
        return {
            "curve": self.curve.to_dict(),
            "p": str(self.p),
            "found": self.found,
            "point": [str(c) for c in self.point] if self.point else None,
            "at_infinity": self.at_infinity,
            "points_checked": self.points_checked,
            "hypothesis": f"p > (d-1)^4 = {self.hypothesis_bound}",
            "hypothesis_holds": self.hypothesis_holds,
        }


def _affine_search(curve: PlaneCurve, p: int) -> tuple[Optional[tuple[int, int]], int]:
    """First affine point ordered by x + y, then y; scans one anti-diagonal at a time."""
    checked = 0
    for s in range(2 * p - 1):
        y = np.arange(max(0, s - p + 1), min(s, p - 1) + 1, dtype=object if p >= 1 << 31 else np.int64)
        x = s - y
        vals = np.zeros(len(y), dtype=y.dtype)
        for (i, j), c in curve.terms:
            term = np.full(len(y), c % p, dtype=y.dtype)
            for _ in range(i):
                term = term * x % p
            for _ in range(j):
                term = term * y % p
            vals = (vals + term) % p
        checked += len(y)
        hits = np.flatnonzero(vals == 0)
        if hits.size:
            k = int(hits[0])
            return (int(x[k]), int(y[k])), checked
    return None, checked


def curve_point_search(curve: PlaneCurve, p: int) -> CurveSearch:
    """Exhaustive search for an F_p-point, with the (d-1)^4 < p hypothesis reported separately."""
    _check_prime(p)
    bound = (curve.degree - 1) ** 4
    point, checked = _affine_search(curve, p)
    at_inf = False
    if point is None and curve.projective:
        top = curve.top_form()
        # points (1 : y : 0) and (0 : 1 : 0) on the line z = 0
        for y in range(p):
            checked += 1
            if sum(c * pow(y, j, p) for (i, j), c in top) % p == 0:
                point, at_inf = (1, y, 0), True
                break
        else:
            checked += 1
            if sum(c for (i, j), c in top if i == 0) % p == 0:
                point, at_inf = (0, 1, 0), True
    return CurveSearch(curve, p, point, at_inf, checked, bound, p > bound)


def size_axiom_instance(d: int, p: int) -> dict:
    """The size axiom for a finite prime field: |K| <= (d-1)^4 forces |K| = p (immediate)."""
    bound = (d - 1) ** 4
    return {"d": d, "p": p, "bound": bound, "premise": p <= bound, "holds": True}


@dataclass(frozen=True)
class CuratedCurve:
    curve: PlaneCurve
    excluded: tuple[int, ...] = ()
    reason: str = ""


def _c(text: str, excluded=(), reason="") -> CuratedCurve:
    return CuratedCurve(PlaneCurve.parse(text, projective=True), tuple(excluded), reason)


@lru_cache(maxsize=None)
def curated_curves() -> tuple[CuratedCurve, ...]:
    """Curves known to be absolutely irreducible over F_p except at the listed primes."""
    return (
        _c("(- (+ (* x x) (* y y)) 1)", (2,), "x^2 + y^2 + z^2 = (x + y + z)^2 in characteristic 2"),
        _c("(+ (* x x) (* y y) 1)", (2,), "a square of a linear form in characteristic 2"),
        _c("(- (* x y) 1)", (), "nonsingular conic xy = z^2"),
        _c("(- y (* x x))", (), "nonsingular conic yz = x^2"),
        _c("(- (+ (* x x) (* x y) (* y y)) 1)", (3,), "x^2 + xy + y^2 = (x - y)^2 in characteristic 3"),
        _c("(- (* y y) (+ (* x x x) 2))", (), "Weierstrass cubic; y^2 - g(x) is irreducible for cubic g"),
        _c("(- (* y y) (+ (* x x x) x))", (), "Weierstrass cubic"),
        _c("(+ (- (* y y) (* x x x)) x)", (), "Weierstrass cubic"),
        _c("(- (* y y) (+ (* x x x) 7))", (), "Weierstrass cubic (cuspidal at p = 7, still irreducible)"),
        _c("(- (+ (* y y) y) (* x x x))", (), "Weierstrass cubic"),
        _c("(- (+ (* x x x) (* y y y)) 1)", (3,), "x^3 + y^3 - z^3 = (x + y - z)^3 in characteristic 3"),
        _c("(- (* y y) (+ (* x x x) x 1))", (), "Weierstrass cubic (nodal at p = 31, still irreducible)"),
        _c("(- (* y y) (+ (* x x x) (* x x)))", (), "nodal cubic y^2 = x^2 (x + 1)"),
    )

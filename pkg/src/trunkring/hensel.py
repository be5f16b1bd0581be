"""Univariate polynomials over Z/p^kZ, simple-root Hensel lifting and a root oracle."""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import CapExceeded, InternalError, ModulusMismatch, PreconditionViolated
from .ring import Modulus, RingElem, valuation

DEFAULT_ROOT_CAP = 10**6

# numpy int64 Horner is exact while every intermediate product stays below 2**63
_INT64_SAFE_MODULUS = 3_000_000_000


@dataclass(frozen=True)
class Poly:
    """Polynomial with coefficients in Z/p^kZ, lowest degree first."""

    coeffs: tuple[RingElem, ...]
    modulus: Modulus

    def __post_init__(self):
        cs = []
        for c in self.coeffs:
            if isinstance(c, RingElem):
                if c.modulus != self.modulus:
                    raise ModulusMismatch("coefficient modulus differs from polynomial modulus")
                cs.append(c)
            else:
                cs.append(RingElem(int(c), self.modulus))
        while cs and cs[-1].rep == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def from_ints(cls, coeffs: Iterable[int], modulus: Modulus) -> "Poly":
        return cls(tuple(RingElem(int(c), modulus) for c in coeffs), modulus)

    @property
    def degree(self) -> int:
        """Degree of the reduced polynomial; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def int_coeffs(self) -> list[int]:
        return [c.rep for c in self.coeffs]

    def derivative(self) -> "Poly":
        return Poly(tuple(c * i for i, c in enumerate(self.coeffs) if i), self.modulus)

    def __call__(self, x: RingElem | int) -> RingElem:
        return poly_eval_deriv(self, x)[0]

    def __str__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c.rep:
                terms.append(f"{c.rep}" if i == 0 else f"{c.rep}*x^{i}")
        return " + ".join(terms) or "0"

    def to_dict(self) -> dict:
        return {"coeffs": [str(c) for c in self.int_coeffs()], "ring": str(self.modulus)}


def poly_eval_deriv(f: Poly, x: RingElem | int) -> tuple[RingElem, RingElem]:
    """Evaluate ``f`` and its formal derivative at ``x`` by Horner's rule."""
    if isinstance(x, RingElem):
        if x.modulus != f.modulus:
            raise ModulusMismatch(f"polynomial over Z/{f.modulus}, point in Z/{x.modulus}")
        xv = x.rep
    else:
        xv = int(x)
    n = f.modulus.n
    val = 0
    der = 0
    for c in reversed(f.coeffs):
        der = (der * xv + val) % n
        val = (val * xv + c.rep) % n
    return RingElem(val, f.modulus), RingElem(der, f.modulus)


def iteration_bound(k: int) -> int:
    return math.ceil(math.log2(k)) + 2 if k > 1 else 2


def hensel_lift(f: Poly, alpha: RingElem | int) -> RingElem:
    """Lift an approximate simple root ``alpha`` of ``f`` to an exact root in Z/p^kZ.

    Requires v(f(alpha)) > 0 and v(f'(alpha)) = 0. Each Newton step
    beta <- beta - f(beta) / f'(beta) at least doubles v(f(beta)).
    """
    m = f.modulus
    if not isinstance(alpha, RingElem):
        alpha = RingElem(int(alpha), m)
    fa, da = poly_eval_deriv(f, alpha)
    if fa.val == 0 or da.val != 0:
        raise PreconditionViolated(
            f"need v(f(alpha)) > 0 and v(f'(alpha)) = 0, got {fa.val} and {da.val}",
            alpha=alpha.rep,
            v_f=fa.val,
            v_df=da.val,
        )
    beta = alpha
    prev_v = 0
    for _ in range(iteration_bound(m.k)):
        fb, db = poly_eval_deriv(f, beta)
        if fb.val >= m.k:
            return beta
        if db.val != 0:
            raise InternalError(f"derivative became a nonunit at {beta.rep}")
        if fb.val < 2 * prev_v:
            raise InternalError(f"valuation failed to double: {prev_v} -> {fb.val}")
        prev_v = fb.val
        beta = beta - fb * db.inv()
    fb, _ = poly_eval_deriv(f, beta)
    if fb.val >= m.k:
        return beta
    raise InternalError(f"Hensel iteration exceeded {iteration_bound(m.k)} steps")


def _scan(coeffs: Sequence[int], n: int, start: int, stop: int) -> list[int]:
    if n < _INT64_SAFE_MODULUS:
        xs = np.arange(start, stop, dtype=np.int64)
        acc = np.zeros_like(xs)
        for c in reversed(coeffs):
            acc = (acc * xs + c) % n
        return [int(r) for r in xs[acc == 0]]
    roots = []
    for x in range(start, stop):
        acc = 0
        for c in reversed(coeffs):
            acc = (acc * x + c) % n
        if acc == 0:
            roots.append(x)
    return roots


def _scan_task(args):
    return _scan(*args)


def all_roots(f: Poly, cap: int = DEFAULT_ROOT_CAP, workers: int = 1, chunk: int = 1 << 16) -> set[RingElem]:
    """Exact root set of ``f`` by exhaustive scan of Z/p^kZ."""
    n = f.modulus.n
    if n > cap:
        raise CapExceeded(f"p^k = {n} exceeds brute-force cap {cap}", size=n, cap=cap)
    coeffs = f.int_coeffs()
    ranges = [(coeffs, n, s, min(s + chunk, n)) for s in range(0, n, chunk)]
    if workers > 1 and len(ranges) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_scan_task, ranges))
    else:
        parts = [_scan(*r) for r in ranges]
    return {RingElem(r, f.modulus) for part in parts for r in part}


def residue_class_roots(f: Poly, alpha: RingElem, cap: int = DEFAULT_ROOT_CAP) -> set[RingElem]:
    """Roots of ``f`` congruent to ``alpha`` modulo p."""
    p = f.modulus.p
    return {r for r in all_roots(f, cap) if (r.rep - alpha.rep) % p == 0}


def simple_root_start(f: Poly, alpha: RingElem) -> bool:
    fa, da = poly_eval_deriv(f, alpha)
    return valuation(fa.rep, f.modulus.p, f.modulus.k) > 0 and da.val == 0

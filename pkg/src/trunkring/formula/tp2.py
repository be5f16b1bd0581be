"""Witness for the tree-property array built from prime powers.

The array has entries a[n][m] = p_n^m for distinct primes p_n, and the
formula phi(x, y) says "y = p^m is a prime power and v_p(x) = m". Each row
is 2-inconsistent (one valuation cannot take two values) while any path
choosing column f(n) in row n is realised by the product of the p_n^f(n).
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from sympy import factorint

from ..errors import BadExponent, DuplicatePrime, LengthMismatch, NotPrime
from ..ring import is_prime

DEFAULT_SEARCH_BOUND = 10_000

ARGUMENT = (
    "If phi(x, p^m) and phi(x, p^m') both hold then v_p(x) = m and v_p(x) = m'. "
    "The p-adic valuation of a nonzero integer is a single number, so m = m'; "
    "for m != m' the pair is unsatisfiable, for every x and not only below the search bound."
)


def p_valuation(x: int, p: int) -> Optional[int]:
    """Exponent of p in x, or None for x = 0."""
    if x == 0:
        return None
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def prime_power(y: int) -> Optional[tuple[int, int]]:
    """(p, m) when y = p^m with m >= 1, else None."""
    if y < 2:
        return None
    f = factorint(y)
    if len(f) != 1:
        return None
    ((p, m),) = f.items()
    return p, m


def phi(x: int, y: int) -> bool:
    """y is a prime power p^m and v_p(x) = m."""
    pm = prime_power(y)
    if pm is None:
        return False
    p, m = pm
    return p_valuation(x, p) == m


def _valuations(xs: np.ndarray, p: int) -> np.ndarray:
    """Vectorised p-adic valuation of positive integers."""
    v = np.zeros(len(xs), dtype=np.int64)
    rest = xs.copy()
    while True:
        div = rest % p == 0
        if not div.any():
            return v
        v += div
        rest = np.where(div, rest // p, rest)


@dataclass
class Tp2Witness:
    primes: tuple[int, ...]
    exponents: tuple[int, ...]
    b: int
    rows: list[dict] = field(default_factory=list)
    path_ok: bool = False
    inconsistency: list[dict] = field(default_factory=list)
    inconsistency_ok: bool = False
    search_bound: int = DEFAULT_SEARCH_BOUND
    argument: str = ARGUMENT

    @property
    def ok(self) -> bool:
        return self.path_ok and self.inconsistency_ok

    def to_dict(self) -> dict:
        return {
            "primes": [str(p) for p in self.primes],
            "exponents": list(self.exponents),
            "b": str(self.b),
            "rows": self.rows,
            "path_ok": self.path_ok,
            "inconsistency": self.inconsistency,
            "inconsistency_ok": self.inconsistency_ok,
            "search_bound": self.search_bound,
            "argument": self.argument,
            "ok": self.ok,
        }


def tp2_witness(
    primes: Sequence[int], exponents: Sequence[int], search_bound: int = DEFAULT_SEARCH_BOUND
) -> Tp2Witness:
    """Build b = prod p_i^f(i) and verify the path and row-inconsistency facts."""
    primes = tuple(int(p) for p in primes)
    exponents = tuple(int(e) for e in exponents)
    if len(primes) != len(exponents):
        raise LengthMismatch(f"{len(primes)} primes but {len(exponents)} exponents")
    if len(set(primes)) != len(primes):
        dup = next(p for p in primes if primes.count(p) > 1)
        raise DuplicatePrime(f"prime {dup} listed twice", prime=dup)
    for p in primes:
        if not is_prime(p):
            raise NotPrime(f"{p} is not prime", p=p)
    for e in exponents:
        if e < 1:
            raise BadExponent(f"exponents must be >= 1, got {e}", exponent=e)
    b = math.prod(p**e for p, e in zip(primes, exponents))
    out = Tp2Witness(primes, exponents, b, search_bound=search_bound)

    # each row: b satisfies the chosen column and no other column up to f + 1
    for p, f in zip(primes, exponents):
        others = [m for m in range(1, f + 2) if m != f and phi(b, p**m)]
        out.rows.append({"p": str(p), "m": f, "y": str(p**f), "valuation": p_valuation(b, p), "holds": phi(b, p**f), "other_columns": others})
    out.path_ok = all(r["holds"] and not r["other_columns"] for r in out.rows)

    # each row is 2-inconsistent: search for x satisfying two columns at once
    xs = np.arange(1, search_bound + 1, dtype=np.int64)
    for p, f in zip(primes, exponents):
        vals = _valuations(xs, p)
        for m in range(1, f + 2):
            for m2 in range(m + 1, f + 2):
                both = np.flatnonzero((vals == m) & (vals == m2))
                witness = int(xs[both[0]]) if both.size else None
                out.inconsistency.append({"p": str(p), "m": m, "m2": m2, "counterexample": witness})
    out.inconsistency_ok = all(r["counterexample"] is None for r in out.inconsistency)
    return out


def random_instance(rng: random.Random, max_primes: int = 6, prime_bound: int = 100, max_exponent: int = 6):
    primes = [p for p in range(2, prime_bound) if is_prime(p)]
    k = rng.randint(1, max_primes)
    chosen = rng.sample(primes, k)
    return chosen, [rng.randint(1, max_exponent) for _ in chosen]

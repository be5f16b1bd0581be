"""Exhaustive pairwise check of the truncated valuation laws on Z/p^kZ.

For every pair (x, y) with y >= x (both laws are symmetric and the ring is
commutative) it checks v(xy) = min(k, v(x) + v(y)) and
v(x + y) >= min(v(x), v(y)). The inner loop is compiled with numba when it is
installed; otherwise a row-wise numpy version runs.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .ring import Modulus

try:  # optional accelerator
    import numba
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None


@dataclass
class LawReport:
    modulus: Modulus
    pairs_checked: int
    violations: int
    first_violation: Optional[tuple[int, int]] = None

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def to_dict(self) -> dict:
        return {
            "modulus": self.modulus.to_dict(),
            "pairs_checked": self.pairs_checked,
            "violations": self.violations,
            "first_violation": list(self.first_violation) if self.first_violation else None,
        }


def valuation_table(modulus: Modulus) -> np.ndarray:
    """v(r) for every residue r, computed by repeated division of the whole range."""
    p, k, n = modulus.p, modulus.k, modulus.n
    rest = np.arange(n, dtype=np.int64)
    v = np.zeros(n, dtype=np.int32)
    for _ in range(k):
        div = (rest % p == 0) & (rest != 0)
        v += div
        rest = np.where(div, rest // p, rest)
    v[0] = k
    return v


def _kernel_py(vt: np.ndarray, n: int, k: int):
    bad, first = 0, (-1, -1)
    ys_all = np.arange(n, dtype=np.int64)
    for x in range(n):
        ys = ys_all[x:]
        vx, vy = vt[x], vt[x:]
        mul_ok = vt[(x * ys) % n] == np.minimum(vx + vy, k)
        add_ok = vt[(x + ys) % n] >= np.minimum(vx, vy)
        wrong = ~(mul_ok & add_ok)
        count = int(wrong.sum())
        if count and bad == 0:
            first = (x, int(ys[np.argmax(wrong)]))
        bad += count
    return bad, first[0], first[1]


def _kernel_src(vt, n, k):
    bad = 0
    fx = -1
    fy = -1
    inv = 1.0 / n
    for x in range(n):
        vx = np.int32(vt[x])
        row_bad = 0
        for y in range(x, n):
            prod = np.int64(x) * y
            q = np.int64(prod * inv)
            r = np.int32(prod - q * n)
            r = r + n if r < 0 else r
            r = r - n if r >= n else r
            s = np.int32(x + y)
            s = s - n if s >= n else s
            vy = np.int32(vt[y])
            m = vx + vy
            m = k if m > k else m
            lo = vx if vx < vy else vy
            row_bad += (vt[r] != m) | (vt[s] < lo)
        if row_bad and bad == 0:
            # rescan the row once to locate the first failure
            for y in range(x, n):
                vy = vt[y]
                if vt[(x * y) % n] != min(vx + vy, k) or vt[(x + y) % n] < min(vx, vy):
                    fx, fy = x, y
                    break
        bad += row_bad
    return bad, fx, fy


_kernel = numba.njit(boundscheck=False)(_kernel_src) if numba is not None else _kernel_py


def check_valuation_laws(modulus: Modulus) -> LawReport:
    """All unordered pairs of Z/p^kZ against both valuation laws."""
    n = modulus.n
    vt = valuation_table(modulus)
    bad, fx, fy = _kernel(vt, n, modulus.k)
    return LawReport(modulus, n * (n + 1) // 2, int(bad), (int(fx), int(fy)) if bad else None)

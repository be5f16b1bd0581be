from __future__ import annotations

import itertools

import numpy as np
import pytest

from trunkring import sweep
from trunkring.ring import Modulus, make_modulus

MODULI = [(2, 1), (2, 6), (3, 4), (5, 3), (7, 2), (11, 1), (13, 2)]


@pytest.mark.parametrize("p,k", MODULI)
def test_table_matches_element_valuation(p, k):
    m = make_modulus(p, k)
    assert list(sweep.valuation_table(m)) == [x.val for x in m.elements()]


@pytest.mark.parametrize("p,k", MODULI)
def test_laws_hold_and_count_pairs(p, k):
    r = sweep.check_valuation_laws(Modulus(p, k))
    assert r.passed and r.pairs_checked == p**k * (p**k + 1) // 2


def _naive_first_violation(vt, n, k):
    for x, y in itertools.combinations_with_replacement(range(n), 2):
        if vt[x * y % n] != min(k, vt[x] + vt[y]) or vt[(x + y) % n] < min(vt[x], vt[y]):
            return x, y
    return None


@pytest.mark.parametrize("kernel", [sweep._kernel, sweep._kernel_py])
@pytest.mark.parametrize("pos, value", [(9, 1), (3, 0), (0, 2), (40, 3)])
def test_corrupted_table_is_caught(kernel, pos, value):
    m = Modulus(3, 4)
    vt = sweep.valuation_table(m).copy()
    vt[pos] = value
    bad, fx, fy = kernel(vt, m.n, m.k)
    assert bad > 0 and (fx, fy) == _naive_first_violation(vt, m.n, m.k)


def test_kernels_agree_on_random_tables():
    rng = np.random.default_rng(1)
    for _ in range(20):
        vt = rng.integers(0, 3, size=25).astype(np.int32)
        assert sweep._kernel(vt, 25, 2)[0] == sweep._kernel_py(vt, 25, 2)[0]

from __future__ import annotations

import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from trunkring.errors import BadExponent, ModulusMismatch, NotAUnit, NotPrime
from trunkring.ring import Modulus, make_modulus, project, ring_arith, val_ac


def naive_valuation(rep: int, p: int, k: int) -> int:
    """Largest j <= k with p^j dividing rep."""
    return max(j for j in range(k + 1) if rep % p**j == 0)


def naive_ac(rep: int, p: int, k: int) -> int:
    if rep == 0:
        return 0
    j = naive_valuation(rep, p, k)
    return (rep // p**j) % p


SMALL_MODULI = [(2, 1), (2, 5), (3, 4), (5, 2), (7, 3), (11, 2), (97, 2)]
moduli = st.sampled_from(SMALL_MODULI).map(lambda pk: make_modulus(*pk))


class TestModulus:
    def test_construction(self):
        m = make_modulus(3, 4)
        assert (m.p, m.k, m.n) == (3, 4, 81)

    def test_composite_rejected(self):
        with pytest.raises(NotPrime):
            make_modulus(4, 2)

    @pytest.mark.parametrize("k", [0, -1])
    def test_bad_exponent(self, k):
        with pytest.raises(BadExponent):
            make_modulus(3, k)

    def test_large_prime_power_is_exact(self):
        p = 2**127 - 1
        m = make_modulus(p, 3)
        assert m.n == p**3
        x = m(p**2 + 5)
        assert x.val == 0 and (x * x.inv()).rep == 1


class TestArith:
    def test_add_wraps(self):
        m = make_modulus(3, 4)
        assert ring_arith("add", m(50), m(40)).rep == 9

    def test_inverse_of_two(self):
        m = make_modulus(3, 4)
        inv = ring_arith("inv", m(2))
        assert inv.rep == 41
        assert (2 * 41) % 81 == 1

    def test_mul_to_zero(self):
        m = make_modulus(3, 4)
        assert ring_arith("mul", m(27), m(3)).rep == 0

    def test_nonunit_inverse(self):
        m = make_modulus(3, 4)
        with pytest.raises(NotAUnit):
            ring_arith("inv", m(9))

    def test_mismatched_moduli(self):
        with pytest.raises(ModulusMismatch):
            ring_arith("add", make_modulus(3, 4)(1), make_modulus(3, 3)(1))

    def test_equality_is_on_reduced_form(self):
        m = make_modulus(5, 2)
        assert m(3) == m(28)
        assert m(3) != make_modulus(5, 3)(3)


class TestValuation:
    @pytest.mark.parametrize(
        "rep,expected", [(18, (2, 2)), (0, (4, 0)), (1, (0, 1))]
    )
    def test_examples(self, rep, expected):
        assert val_ac(make_modulus(3, 4)(rep)) == expected

    @pytest.mark.parametrize("p,k", SMALL_MODULI)
    def test_matches_naive_oracle(self, p, k):
        m = make_modulus(p, k)
        for x in m.elements():
            assert val_ac(x) == (naive_valuation(x.rep, p, k), naive_ac(x.rep, p, k))

    @pytest.mark.parametrize("p,k", [(2, 5), (3, 4), (5, 2), (7, 2)])
    def test_valuation_clauses_exhaustive(self, p, k):
        m = make_modulus(p, k)
        assert m(1).val == 0 and m(0).val == k
        for x, y in itertools.product(m.elements(), repeat=2):
            assert (x * y).val == min(k, x.val + y.val)
            assert (x + y).val >= min(x.val, y.val)

    @given(moduli, st.data())
    def test_ac_multiplicative(self, m, data):
        x = m(data.draw(st.integers(0, m.n - 1)))
        y = m(data.draw(st.integers(0, m.n - 1)))
        if x.val + y.val < m.k:
            assert (x * y).ac == (x.ac * y.ac) % m.p

    @pytest.mark.parametrize("p,k", SMALL_MODULI)
    def test_nonunits_are_the_ideal_generated_by_p(self, p, k):
        m = make_modulus(p, k)
        nonunits = {x.rep for x in m.elements() if not x.is_unit}
        assert nonunits == {(p * a) % m.n for a in range(m.n)}
        assert all(x.is_unit == (x.val == 0) for x in m.elements())


class TestProject:
    def test_examples(self):
        m = make_modulus(3, 4)
        assert project(m(50), 3) == make_modulus(3, 3)(23)
        assert project(m(0), 2).rep == 0
        assert project(m(50), 4) == m(50)

    @pytest.mark.parametrize("k2", [0, 5])
    def test_out_of_range(self, k2):
        with pytest.raises(BadExponent):
            project(make_modulus(3, 4)(1), k2)

    @given(moduli, st.data())
    def test_homomorphism_and_composition(self, m, data):
        x = m(data.draw(st.integers(0, m.n - 1)))
        y = m(data.draw(st.integers(0, m.n - 1)))
        k1 = data.draw(st.integers(1, m.k))
        k2 = data.draw(st.integers(1, k1))
        assert project(x + y, k2) == project(x, k2) + project(y, k2)
        assert project(x * y, k2) == project(x, k2) * project(y, k2)
        assert project(project(x, k1), k2) == project(x, k2)

    def test_surjective(self):
        m = make_modulus(2, 5)
        assert {project(x, 3).rep for x in m.elements()} == set(range(8))


def test_serialization_uses_decimal_strings():
    m = make_modulus(7, 3)
    assert isinstance(m, Modulus)
    assert m.to_dict() == {"p": "7", "k": 3, "modulus": "343"}
    assert m(5).to_dict() == {"value": "5", "ring": "7^3"}

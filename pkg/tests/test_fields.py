from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from trunkring.errors import BadArity, CapExceeded, NotAUnit, NotPrime
from trunkring.fields import (
    FpElem,
    PlaneCurve,
    count_irreducible_monic,
    curated_curves,
    curve_point_search,
    euler_square,
    frobenius_is_bijection,
    irreducible_monic_exhaustive,
    sol,
    sol_roots,
    size_axiom_instance,
)
from trunkring.ring import is_prime

PRIMES_50 = [p for p in range(2, 51) if is_prime(p)]


class TestFp:
    def test_field_operations(self):
        a = FpElem(3, 7)
        assert (a * a.inv()).value == 1
        assert (a / 5).value == (3 * pow(5, -1, 7)) % 7
        assert (a**-1).value == 5 and (-a).value == 4 and (10 - a).value == 0

    def test_zero_has_no_inverse(self):
        with pytest.raises(NotAUnit):
            FpElem(0, 5).inv()

    def test_composite(self):
        with pytest.raises(NotPrime):
            FpElem(1, 9)

    @pytest.mark.parametrize("p", [p for p in range(2, 201) if is_prime(p)])
    def test_frobenius_permutes(self, p):
        assert frobenius_is_bijection(p)


class TestSol:
    def test_examples(self):
        assert sol(2, [1, 0, 1], 5) and sol_roots(2, [1, 0, 1], 5) == [2, 3]
        assert not sol(2, [1, 0, 1], 3)

    @pytest.mark.parametrize("p", [2, 3, 11, 101])
    def test_linear_always_solvable(self, p):
        assert all(sol(1, [a, 1], p) for a in range(p))

    @pytest.mark.parametrize("n,coeffs", [(2, [1, 0]), (0, [1]), (1, [1, 2, 3])])
    def test_bad_arity(self, n, coeffs):
        with pytest.raises(BadArity):
            sol(n, coeffs, 5)

    @given(st.sampled_from(PRIMES_50), st.integers(1, 4), st.data())
    def test_scaling_invariance(self, p, n, data):
        coeffs = data.draw(st.lists(st.integers(-100, 100), min_size=n + 1, max_size=n + 1))
        c = data.draw(st.integers(1, p - 1))
        assert sol(n, coeffs, p) == sol(n, [c * a for a in coeffs], p)

    @given(st.sampled_from(PRIMES_50), st.integers(1, 4), st.data())
    def test_matches_direct_evaluation(self, p, n, data):
        coeffs = data.draw(st.lists(st.integers(-100, 100), min_size=n + 1, max_size=n + 1))
        expected = [t for t in range(p) if sum(c * t**i for i, c in enumerate(coeffs)) % p == 0]
        assert sol_roots(n, coeffs, p) == expected

    @pytest.mark.parametrize("p", [3, 5, 7, 97, 997])
    def test_euler_criterion(self, p):
        for a in range(p):
            assert sol(2, [-a, 0, 1], p) == euler_square(a, p)


class TestIrreducible:
    @pytest.mark.parametrize("p,n,count", [(2, 3, 2), (3, 1, 3), (2, 4, 3)])
    def test_examples(self, p, n, count):
        assert count_irreducible_monic(p, n) == count

    def test_cubics_over_f2(self):
        assert irreducible_monic_exhaustive(2, 3) == [(1, 0, 1, 1), (1, 1, 0, 1)]

    def test_exhaustive_matches_mobius(self):
        for p in PRIMES_50:
            for n in range(1, 7):
                if p**n <= 4096:
                    assert len(irreducible_monic_exhaustive(p, n)) == count_irreducible_monic(p, n), (p, n)

    def test_cap(self):
        with pytest.raises(CapExceeded):
            irreducible_monic_exhaustive(2, 13)

    def test_formula_unbounded(self):
        assert count_irreducible_monic(2, 64) == (2**64 - 2**32) // 64
        assert count_irreducible_monic(10007, 3) == (10007**3 - 10007) // 3

    def test_every_degree_has_an_extension(self):
        assert all(count_irreducible_monic(p, n) >= 1 for p in PRIMES_50 for n in range(1, 13))


class TestCurves:
    def test_circle(self):
        res = curve_point_search(PlaneCurve.parse("(- (+ (* x x) (* y y)) 1)"), 17)
        assert res.point == (1, 0) and res.hypothesis_holds and res.hypothesis_bound == 1

    def test_mordell_cubic(self):
        curve = PlaneCurve.parse("(- (* y y) (+ (* x x x) 2))")
        assert curve.degree == 3
        assert curve_point_search(curve, 7).point == (0, 3) and pow(3, 2, 7) == 2
        low = curve_point_search(curve, 2)
        assert not low.hypothesis_holds and low.hypothesis_bound == 16

    def test_point_at_infinity(self):
        # x^2 + 1 has no affine zero over F_3; its closure is x^2 + z^2 = 0, through (0 : 1 : 0)
        curve = PlaneCurve.parse("(+ (* x x) 1)", projective=True)
        res = curve_point_search(curve, 3)
        assert res.at_infinity and res.point == (0, 1, 0)
        assert not curve_point_search(PlaneCurve.parse("(+ (* x x) 1)"), 3).found

    def test_homogeneous_input(self):
        curve = PlaneCurve.from_homogeneous({(2, 0, 0): 1, (0, 2, 0): 1, (0, 0, 2): -1})
        same = PlaneCurve.parse("(- (+ (* x x) (* y y)) 1)", projective=True)
        assert curve.projective and curve.terms == same.terms

    def test_curated_suite(self):
        suite = curated_curves()
        assert len(suite) >= 10 and {c.curve.degree for c in suite} == {2, 3}
        for entry in suite:
            d = entry.curve.degree
            for p in range(2, 101):
                if is_prime(p) and p > (d - 1) ** 4 and p not in entry.excluded:
                    res = curve_point_search(entry.curve, p)
                    assert res.found and res.hypothesis_holds, (str(entry.curve), p)
                    x, y = res.point[:2]
                    assert res.at_infinity or entry.curve.evaluate(x, y, p) == 0

    def test_size_axiom(self):
        assert size_axiom_instance(3, 13)["premise"] and not size_axiom_instance(3, 17)["premise"]

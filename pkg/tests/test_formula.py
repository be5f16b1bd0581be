from __future__ import annotations

import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from formula_gen import FormulaGen
from trunkring.errors import BudgetExceeded, FormulaSyntaxError, SortError, UnboundVariable
from trunkring.formula.ast import Exists, Forall, Not, Sort, free_vars, quantifier_count
from trunkring.formula.evaluate import evaluate, truth_table
from trunkring.formula.parser import parse, to_text
from trunkring.ring import make_modulus

SMALL = [(2, 3), (3, 2), (5, 1), (2, 4), (7, 2), (3, 3), (17, 2)]


class TestParser:
    def test_ring_quantifier(self):
        phi = parse("(exists x:ring (= (* x x) 8))")
        assert isinstance(phi, Exists) and phi.sort is Sort.RING
        assert quantifier_count(phi) == 1

    def test_free_ring_variable_under_v(self):
        assert free_vars(parse("(= (v x) 2)")) == {"x": Sort.RING}

    def test_value_atom_as_ring_term(self):
        with pytest.raises(SortError) as info:
            parse("(exists x:ring (= x (leq 1 2)))")
        assert (info.value.line, info.value.column) == (1, 21)
        assert info.value.to_dict()["code"] == "SortError"

    @pytest.mark.parametrize(
        "text",
        [
            "(exists x:ring",
            "(exists x (= x 1))",
            "(frob x)",
            "(congr (v x) 1 0)",
            "(sol 2 1 0)",
            "(= (monus (v x) 1) (v (ac y)))",
            "(leq (* (v x) (v x)) 2)",
            "(= 1 2) extra",
        ],
    )
    def test_rejected(self, text):
        with pytest.raises(FormulaSyntaxError):
            parse(text)

    def test_sort_unification_across_atoms(self):
        phi = parse("(and (= x y) (= (ac x) 1))")
        assert free_vars(phi) == {"x": Sort.RING, "y": Sort.RING}
        assert free_vars(parse("(and (= a b) (leq a 3))")) == {"a": Sort.VALUE, "b": Sort.VALUE}

    @given(st.randoms(use_true_random=False), st.sampled_from([(), (("x", Sort.RING),), (("x", Sort.RING), ("u", Sort.VALUE))]))
    def test_round_trip(self, rng, free):
        phi = FormulaGen(rng).formula(free)
        text = to_text(phi)
        again = parse(text, free_sorts=dict(free))
        assert again == phi
        assert to_text(again) == text


class TestEvaluate:
    def test_square_of_eight_mod_343(self):
        assert evaluate(parse("(exists x:ring (= (* x x) 8))"), make_modulus(7, 3))

    def test_square_of_seventeen_mod_32(self):
        m = make_modulus(2, 5)
        assert evaluate(parse("(exists x:ring (= (* x x) 17))"), m)
        assert evaluate(parse("(= (* x x) 17)"), m, {"x": 7})

    @pytest.mark.parametrize("pk", SMALL)
    def test_multiplicative_identity(self, pk):
        assert evaluate(parse("(forall x:ring (= (* x 1) x))"), make_modulus(*pk))

    @pytest.mark.parametrize("pk", [(3, 2), (3, 4), (2, 7), (5, 3), (101, 2)])
    def test_t_has_valuation_one_and_unit_angular_component(self, pk):
        assert evaluate(parse("(and (= (v t) 1) (= (ac t) 1))"), make_modulus(*pk))

    def test_t_vanishes_when_k_is_one(self):
        # t = p is 0 in F_p, so v(t) = k = 1 but ac(t) = ac(0) = 0
        m = make_modulus(5, 1)
        assert evaluate(parse("(= (v t) 1)"), m)
        assert not evaluate(parse("(= (ac t) 1)"), m)

    def test_value_formula_over_bare_toag(self):
        phi = parse("(exists y:value (= (+ y y) x))", free_sorts={"x": "value"})
        table = truth_table(phi, tau=9)
        assert table.astype(int).tolist() == [1, 0, 1, 0, 1, 0, 1, 0, 1, 1]

    def test_unbound_variable(self):
        with pytest.raises(UnboundVariable):
            evaluate(parse("(= x 1)"), make_modulus(3, 2))

    def test_budget(self):
        phi = parse("(exists x:ring (exists y:ring (= (* x y) 1)))")
        with pytest.raises(BudgetExceeded):
            evaluate(phi, make_modulus(3, 4), budget=1000)
        assert evaluate(phi, make_modulus(3, 4), budget=10_000)

    def test_sorts_range_over_their_domains(self):
        m = make_modulus(3, 2)
        assert evaluate(parse("(forall z:value (leq z 2))"), m)
        assert not evaluate(parse("(forall z:value (leq z 1))"), m)
        assert evaluate(parse("(forall r:res (sol 1 r 1))"), m)
        assert evaluate(parse("(forall x:ring (sol 1 (ac x) 1))"), m)
        # residue literals reduce mod p, so 3 names 0 in F_3
        assert evaluate(parse("(exists r:res (and (= r 3) (= r 0)))"), m)

    @given(st.randoms(use_true_random=False), st.sampled_from(SMALL))
    def test_strategies_agree(self, rng, pk):
        m = make_modulus(*pk)
        phi = FormulaGen(rng).formula((("x", Sort.RING),))
        variables = list(free_vars(phi)) or None
        if variables is None:
            assert evaluate(phi, m, strategy="grid") == evaluate(phi, m, strategy="recursive")
            return
        grid = truth_table(phi, m, strategy="grid")
        rec = truth_table(phi, m, strategy="recursive")
        assert np.array_equal(grid, rec)


def test_quantifier_duality_on_corpus():
    """not-exists equals forall-not for each sort, on every assignment of x, y."""
    rng = random.Random(7)
    gen = FormulaGen(rng, max_quantifiers=1)
    moduli = [make_modulus(p, k) for p, k in [(2, 1), (3, 2), (5, 2), (2, 5), (7, 2), (3, 3), (17, 1)]]
    checked = 0
    for _ in range(60):
        body = gen.formula((("x", Sort.RING), ("y", Sort.RING)))
        for sort in Sort:
            lhs = Not(Exists("w", sort, body))
            rhs = Forall("w", sort, Not(body))
            for m in moduli:
                assert np.array_equal(
                    truth_table(lhs, m, variables=["x", "y"], domains=_domains(lhs, m)),
                    truth_table(rhs, m, variables=["x", "y"], domains=_domains(rhs, m)),
                )
                checked += 1
    assert checked == 60 * 3 * len(moduli)


def _domains(phi, m):
    return {"x": range(m.n), "y": range(m.n)}

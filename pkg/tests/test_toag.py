from __future__ import annotations

import itertools
import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from trunkring.errors import CapExceeded, OracleDisagreement, OutOfRange, UnsupportedTerm
from trunkring.formula.ast import Sort
from trunkring.formula.evaluate import evaluate, truth_table
from trunkring.formula.parser import parse
from trunkring.toag import (
    Toag,
    ToagSolution,
    ToagTable,
    check_presburger_toag,
    check_toag_axioms,
    decide_toag_formula,
    distinguishing_sentence,
    eliminate_quantifiers,
    modular_table,
    parse_toag,
    random_corpus,
    realize_as_initial_segment,
    toag_ops,
)
from trunkring.toag import presburger as pb
from trunkring.toag.presburger import Lin


def perturbed_table(tau=10):
    t = Toag(tau).table()
    add = t.add.copy()
    add[2, 2] = 5
    return ToagTable(tau, add, t.monus, name="perturbed")


class TestOps:
    def test_examples(self):
        assert toag_ops("add", 3, 4, tau=5) == 5
        assert toag_ops("monus", 2, tau=5) == 3
        assert toag_ops("monus", toag_ops("monus", 3, tau=5), tau=5) == 3

    @pytest.mark.parametrize("a,b", [(6, 0), (-1, 2)])
    def test_out_of_range(self, a, b):
        with pytest.raises(OutOfRange):
            toag_ops("add", a, b, tau=5)

    @given(st.integers(0, 40), st.data())
    def test_closure(self, tau, data):
        a, b = (data.draw(st.integers(0, tau)) for _ in range(2))
        T = Toag(tau)
        assert 0 <= T.add(a, b) <= tau and 0 <= T.monus(a) <= tau and 0 <= T.monus(a, b) <= tau

    @pytest.mark.parametrize("tau", [0, 1, 7, 20])
    def test_associativity_exhaustive(self, tau):
        T = Toag(tau)
        for a, b, c in itertools.product(T.elements(), repeat=3):
            assert T.add(T.add(a, b), c) == T.add(a, T.add(b, c))


class TestAxioms:
    def test_tau_ten(self):
        report = check_toag_axioms(10)
        assert report.passed and not report.failures()
        assert report[11].status == "not-checked"
        assert {r.axiom_id for r in report.flagged()} >= {11, 13}
        assert report[13].status == "pass" and report[13].flag == "as-stated-ambiguous"

    def test_degenerate(self):
        assert check_toag_axioms(0).passed

    def test_literal_readings_reported(self):
        report = check_toag_axioms(10)
        assert report[7].literal_status == "fail" and report[7].literal_counterexample == {"x": 0}
        assert report[10].literal_status == "fail"
        assert report[10].literal_counterexample == {"x": 0, "y": 1, "z": 10}

    def test_modular_table_fails_order_compatibility(self):
        report = check_toag_axioms(modular_table(10))
        assert report[3].status == "fail"
        x, y, x1, y1 = (report[3].counterexample[k] for k in ("x", "y", "x1", "y1"))
        # hypotheses of axiom 3 hold but the conclusion fails under wrap-around addition
        add = modular_table(10).add
        assert x <= y and x1 <= y1 and add[x, x1] > add[y, y1]
        assert {r.axiom_id for r in report.failures()} == {2, 3, 12}

    def test_cap(self):
        with pytest.raises(CapExceeded):
            check_toag_axioms(61)

    def test_sample_mode_is_deterministic(self):
        a = check_toag_axioms(200, mode="sample", seed=3, count=2000)
        b = check_toag_axioms(200, mode="sample", seed=3, count=2000)
        assert a.passed and a.to_dict() == b.to_dict()
        assert not check_toag_axioms(modular_table(200), mode="sample", seed=3, count=2000).passed

    @pytest.mark.slow
    def test_all_tau_up_to_sixty(self):
        for tau in range(61):
            assert check_toag_axioms(tau).passed, tau


class TestPresburger:
    def test_tau_nine_witnesses(self):
        report = check_presburger_toag(9)
        assert report.holds
        assert report.witnesses[(3, 7)] == (2, 1)

    def test_tau_one(self):
        assert check_presburger_toag(1).holds

    def test_tau_zero_rejected(self):
        with pytest.raises(OutOfRange):
            check_presburger_toag(0)

    def test_modular_table(self):
        report = check_presburger_toag(modular_table(10))
        assert not report.holds and report.failing_axioms == [2, 3, 12]

    def test_perturbed_table_fails_division(self):
        report = check_presburger_toag(perturbed_table())
        assert not report.holds and report.failing_division == (2, 4)

    @given(st.integers(1, 40), st.data())
    def test_witnesses_are_euclidean_division(self, tau, data):
        report = check_presburger_toag(tau, n_bound=6)
        for (n, x), (y, m) in report.witnesses.items():
            assert n * y + m == x and 0 <= m < n


class TestRealize:
    @pytest.mark.parametrize("tau,checked", [(5, 6), (0, 1), (30, 31)])
    def test_identity_embedding(self, tau, checked):
        emb = realize_as_initial_segment(tau)
        assert emb.verified and emb.elements_checked == checked and emb.tau_gamma == tau
        assert emb(3 % (tau + 1)) == 3 % (tau + 1)

    def test_foreign_table_mismatch(self):
        emb = realize_as_initial_segment(10, modular_table(10))
        assert not emb.verified and emb.mismatch[0] == "add"


class TestDistinguishingSentence:
    def test_separates_all_pairs(self):
        for t1, t2 in itertools.combinations(range(41), 2):
            phi = distinguishing_sentence(t1, t2)
            assert evaluate(phi, tau=t1) != evaluate(phi, tau=t2)

    def test_min_plus_one_fails_for_adjacent_tops(self):
        phi = parse("(= (+ 1 1 1 1) tau)", default_sort=Sort.VALUE)
        assert evaluate(phi, tau=3) and evaluate(phi, tau=4)

    def test_equal_tops(self):
        with pytest.raises(ValueError):
            distinguishing_sentence(4, 4)


class TestLinear:
    def test_le_normalisation_divides_by_gcd(self):
        assert pb.mk_le(Lin.var("x", 2) + 3) == pb.Le(Lin.var("x") + 2)

    def test_dvd_normalisation(self):
        assert pb.mk_dvd(4, Lin.var("x", 2) + 1) is pb.BOT
        assert pb.mk_dvd(4, Lin.var("x", 2) + 2) == pb.Dvd(2, Lin.var("x") + 1)
        assert pb.mk_dvd(3, Lin.var("x", 3) + 1, positive=False) is pb.TOP

    def test_negation_is_complement(self):
        rng = random.Random(0)
        xs = np.arange(-20, 21)
        for _ in range(100):
            c, k, n = rng.randint(-3, 3), rng.randint(-9, 9), rng.randint(2, 5)
            phi = pb.mk_or(pb.mk_le(Lin.var("x", c) + k), pb.mk_dvd(n, Lin.var("x") + k))
            assert np.array_equal(np.asarray(pb.holds(pb.negate(phi), {"x": xs})), ~np.asarray(pb.holds(phi, {"x": xs})))

    @given(st.integers(-4, 4), st.integers(-4, 4), st.integers(-12, 12), st.integers(2, 6), st.integers(0, 5))
    def test_cooper_matches_search(self, a, b, c, n, r):
        # exists x: a*x + b*y + c <= 0 and n | x + r and -10 <= x <= 10
        phi = pb.mk_and(
            pb.mk_le(Lin.var("x", a) + Lin.var("y", b) + c),
            pb.mk_dvd(n, Lin.var("x") + r),
            pb.mk_le(Lin.var("x", -1) - 10),
            pb.mk_le(Lin.var("x") - 10),
        )
        out = pb.eliminate_exists("x", phi)
        assert "x" not in pb.variables(out)
        for y in range(-15, 16):
            expected = any(bool(pb.holds(phi, {"x": x, "y": y})) for x in range(-10, 11))
            assert bool(pb.holds(out, {"y": y})) == expected


class TestDecide:
    def test_halving(self):
        phi = parse_toag("(exists y:value (and (= (+ y y) x) (lt x tau)))")
        assert decide_toag_formula(phi, 9, {"x": 4}) is True
        assert decide_toag_formula(phi, 9, {"x": 3}) is False
        sol = decide_toag_formula(phi, 9)
        assert isinstance(sol, ToagSolution)
        assert [s["x"] for s in sol.solutions()] == [0, 2, 4, 6, 8]

    @pytest.mark.parametrize("tau", range(1, 12))
    def test_predecessor_of_top(self, tau):
        assert decide_toag_formula("(exists y:value (= (+ y 1) tau))", tau)

    def test_parity_of_top(self):
        assert decide_toag_formula("(congr tau 2 1)", 9) is True
        assert decide_toag_formula("(congr tau 2 1)", 10) is False

    def test_output_is_quantifier_free_over_free_variables(self):
        phi = parse_toag("(forall y:value (implies (leq x y) (exists z:value (= (+ x z) y))))")
        qf = eliminate_quantifiers(phi, 12)
        assert pb.variables(qf) <= {"x"}
        assert all(isinstance(a, (pb.Le, pb.Dvd)) for a in pb.atoms(qf))

    def test_partial_assignment(self):
        phi = parse_toag("(= (+ x y) tau)")
        sol = decide_toag_formula(phi, 6, {"x": 2})
        assert sol.variables == ("y",) and [s["y"] for s in sol.solutions()] == [4, 5, 6]

    def test_large_tau_without_oracle(self):
        sol = decide_toag_formula("(exists y:value (and (= (+ y y) x) (lt x tau)))", 10**6)
        assert not sol.oracle_checked
        assert sol.holds({"x": 999_998}) and not sol.holds({"x": 999_999})

    def test_rejects_other_sorts(self):
        with pytest.raises(UnsupportedTerm):
            decide_toag_formula(parse("(= (v x) 1)"), 5)

    def test_oracle_disagreement_is_hard_error(self, monkeypatch):
        import trunkring.toag.decide as decide

        monkeypatch.setattr(decide, "eliminate_quantifiers", lambda phi, tau: pb.TOP)
        with pytest.raises(OracleDisagreement):
            decide.decide_toag_formula("(lt x 3)", 5)

    @given(st.integers(0, 12), st.integers(0, 10_000))
    def test_random_formulas_agree_with_brute_force(self, tau, seed):
        for phi in random_corpus(3, seed=seed):
            got = decide_toag_formula(phi, tau, oracle=False)
            variables = list(getattr(got, "variables", ()))
            expected = truth_table(phi, variables=variables, tau=tau)
            if isinstance(got, bool):
                assert got == bool(expected)
            else:
                assert np.array_equal(got.table(), expected)

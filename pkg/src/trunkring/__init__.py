"""Exact arithmetic and decision procedures for the residue rings Z/p^kZ."""
from __future__ import annotations

from .decomposer import (
    BasicCondition,
    Decomposition,
    elementary_invariants,
    nth_power_decomposition,
    same_theory,
    verify_decomposition,
)
from .fields import PlaneCurve, count_irreducible_monic, curve_point_search, sol
from .formula import evaluate, parse, to_text, tp2_witness, truth_table
from .hensel import Poly, all_roots, hensel_lift
from .ring import Modulus, RingElem
from .toag import check_toag_axioms, decide_toag_formula

__version__ = "0.1.0"

__all__ = [
    "BasicCondition",
    "Decomposition",
    "Modulus",
    "PlaneCurve",
    "Poly",
    "RingElem",
    "all_roots",
    "check_toag_axioms",
    "count_irreducible_monic",
    "curve_point_search",
    "decide_toag_formula",
    "elementary_invariants",
    "evaluate",
    "hensel_lift",
    "nth_power_decomposition",
    "parse",
    "same_theory",
    "sol",
    "to_text",
    "tp2_witness",
    "truth_table",
    "verify_decomposition",
]

"""Truncated ordered abelian groups [0, tau] and their first-order theory."""
from __future__ import annotations

from .axioms import AxiomReport, AxiomResult, PresburgerReport, check_presburger_toag, check_toag_axioms
from .decide import (
    ToagSolution,
    cross_check,
    decide_toag_formula,
    eliminate_quantifiers,
    parse_toag,
    random_corpus,
    random_toag_formula,
)
from .structure import (
    Embedding,
    Toag,
    ToagTable,
    distinguishing_sentence,
    modular_table,
    ones,
    realize_as_initial_segment,
    toag_ops,
)

__all__ = [
    "AxiomReport",
    "AxiomResult",
    "Embedding",
    "PresburgerReport",
    "Toag",
    "ToagSolution",
    "ToagTable",
    "check_presburger_toag",
    "check_toag_axioms",
    "cross_check",
    "decide_toag_formula",
    "distinguishing_sentence",
    "eliminate_quantifiers",
    "modular_table",
    "ones",
    "parse_toag",
    "random_corpus",
    "random_toag_formula",
    "realize_as_initial_segment",
    "toag_ops",
]

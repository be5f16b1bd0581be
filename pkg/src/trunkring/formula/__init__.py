"""Three-sorted formulas over Z/p^kZ: syntax, parsing and evaluation."""
from __future__ import annotations

from .ast import Sort, free_vars
from .evaluate import DEFAULT_BUDGET, evaluate, truth_table
from .parser import parse, parse_term, to_text
from .tp2 import Tp2Witness, tp2_witness

__all__ = [
    "DEFAULT_BUDGET",
    "Sort",
    "Tp2Witness",
    "evaluate",
    "free_vars",
    "parse",
    "parse_term",
    "to_text",
    "tp2_witness",
    "truth_table",
]

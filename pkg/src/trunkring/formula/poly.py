"""Expanding ring terms into polynomials with integer coefficients."""
from __future__ import annotations

from collections import defaultdict
from typing import Mapping, Optional, Sequence

from ..errors import UnsupportedTerm
from .ast import App, Const, Lit, Sort, Var

Monomials = dict[tuple[int, ...], int]


def _mul(a: Monomials, b: Monomials) -> Monomials:
    out: dict = defaultdict(int)
    for ea, ca in a.items():
        for eb, cb in b.items():
            out[tuple(x + y for x, y in zip(ea, eb))] += ca * cb
    return {e: c for e, c in out.items() if c}


def _add(a: Monomials, b: Monomials, sign: int = 1) -> Monomials:
    out = dict(a)
    for e, c in b.items():
        out[e] = out.get(e, 0) + sign * c
    return {e: c for e, c in out.items() if c}


def expand(term, variables: Sequence[str], t_value: Optional[int] = None) -> Monomials:
    """Monomial dictionary of a ring term; exponent tuples follow ``variables``.

    The constant ``t`` is a variable when listed in ``variables``, otherwise
    it is replaced by ``t_value``.
    """
    index = {v: i for i, v in enumerate(variables)}
    zero = (0,) * len(variables)

    def unit(name):
        e = [0] * len(variables)
        e[index[name]] = 1
        return {tuple(e): 1}

    def go(node) -> Monomials:
        if getattr(node, "sort", Sort.RING) is not Sort.RING:
            raise UnsupportedTerm(f"{node!r} is not a ring term")
        if isinstance(node, Lit):
            return {zero: node.value} if node.value else {}
        if isinstance(node, Var):
            if node.name not in index:
                raise UnsupportedTerm(f"variable {node.name!r} not among {list(variables)}")
            return unit(node.name)
        if isinstance(node, Const) and node.name == "t":
            if "t" in index:
                return unit("t")
            if t_value is None:
                raise UnsupportedTerm("the constant t needs a value")
            return {zero: t_value} if t_value else {}
        if isinstance(node, App) and node.op in ("+", "-", "*"):
            parts = [go(a) for a in node.args]
            if node.op == "-":
                return _add({}, parts[0], -1) if len(parts) == 1 else _add(parts[0], parts[1], -1)
            acc = parts[0]
            for p in parts[1:]:
                acc = _add(acc, p) if node.op == "+" else _mul(acc, p)
            return acc
        raise UnsupportedTerm(f"cannot expand {node!r} as a polynomial")

    return go(term)


def total_degree(monomials: Mapping[tuple[int, ...], int]) -> int:
    return max((sum(e) for e, c in monomials.items() if c), default=-1)

"""Executable TOAG axiom battery and the Presburger-TOAG recognition test.

Each axiom is a violation mask computed from the operation tables with
numpy fancy indexing, so the same predicate serves the exhaustive grid and
random samples. Counterexamples are the lexicographically least violating
tuple.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np

from ..errors import CapExceeded, OutOfRange
from .structure import Toag, ToagTable

DEFAULT_EXHAUSTIVE_CAP = 60

PASS = "pass"
FAIL = "fail"
NOT_CHECKED = "not-checked"
AMBIGUOUS = "as-stated-ambiguous"
DEFECTIVE = "as-stated-defective"


@dataclass
class AxiomResult:
    axiom_id: int
    name: str
    statement: str
    status: str
    checked: int = 0
    counterexample: Optional[dict] = None
    flag: Optional[str] = None
    reading: Optional[str] = None
    literal_status: Optional[str] = None
    literal_counterexample: Optional[dict] = None

    def to_dict(self) -> dict:
        out = {"axiom_id": self.axiom_id, "name": self.name, "status": self.status, "checked": self.checked}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        if self.flag:
            out["flag"] = self.flag
            out["reading"] = self.reading
        if self.literal_status:
            out["literal_status"] = self.literal_status
            if self.literal_counterexample is not None:
                out["literal_counterexample"] = self.literal_counterexample
        return out


@dataclass
class AxiomReport:
    tau: int
    structure: str
    mode: str
    results: list[AxiomResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        """Every checked axiom passes (unchecked ones do not count either way)."""
        return all(r.status != FAIL for r in self.results)

    def failures(self) -> list[AxiomResult]:
        return [r for r in self.results if r.status == FAIL]

    def flagged(self) -> list[AxiomResult]:
        return [r for r in self.results if r.flag]

    def __getitem__(self, axiom_id: int) -> AxiomResult:
        for r in self.results:
            if r.axiom_id == axiom_id:
                return r
        raise KeyError(axiom_id)

    def to_dict(self) -> dict:
        return {
            "tau": self.tau,
            "structure": self.structure,
            "mode": self.mode,
            "passed": self.passed,
            "axioms": [r.to_dict() for r in self.results],
        }


# -- the predicates ----------------------------------------------------------
# each returns a boolean mask that is True exactly where the axiom is violated


class _Ops:
    def __init__(self, table: ToagTable):
        self.A = table.add
        self.M = table.monus
        self.T = table.tau
        r = np.arange(table.tau + 1)
        hits = table.add == table.tau
        self.has_solution = hits.any(axis=1)
        self.min_solution = np.where(self.has_solution, hits.argmax(axis=1), -1)
        below_top = hits & (r[None, :] < table.tau)
        self.has_solution_below_top = below_top.any(axis=1)
        counts = np.zeros((table.tau + 1, table.tau + 1), dtype=np.int64)
        rows = np.broadcast_to(r[:, None], table.add.shape)
        np.add.at(counts, (rows, table.add), 1)
        self.diff_counts = counts

    def comp(self, x):
        """tau -. x"""
        return self.M[self.T, x]


def _ax1(o, x, y):
    return o.A[x, y] != o.A[y, x]


def _ax2(o, x):
    return (o.A[x, 0] != x) | (o.A[x, o.T] != o.T)


def _ax3(o, x, y, x1, y1):
    return (x <= y) & (x1 <= y1) & (o.A[x, x1] > o.A[y, y1])


def _ax4(o, x, y, z):
    return o.A[o.A[x, y], z] != o.A[x, o.A[y, z]]


def _ax5(o, x, y, z):
    return (o.A[x, y] == o.A[x, z]) & (o.A[x, y] < o.T) & (y != z)


def _ax6(o, x, y):
    return (x <= y) & (y < o.T) & (o.diff_counts[x, y] != 1)


def _ax7_literal(o, x):
    return ~o.has_solution_below_top[x] | (o.comp(x) != o.min_solution[x])


def _ax7(o, x):
    return (
        ((x > 0) & ~o.has_solution_below_top[x])
        | ~o.has_solution[x]
        | (o.comp(x) != o.min_solution[x])
    )


def _ax8(o, x):
    return o.comp(o.comp(x)) != x


def _ax9(o, x, y):
    lhs = o.M[y, o.comp(x)]
    rhs = o.M[x, o.comp(y)]
    return (x < o.T) & (y < o.T) & (o.A[x, y] == o.T) & (lhs != rhs)


def _ax10_concl(o, x, y, z):
    return o.M[x, o.comp(o.A[y, z])] != o.M[z, o.comp(o.A[x, y])]


def _ax10_literal(o, x, y, z):
    return (o.A[x, o.A[y, z]] == o.T) & (o.A[y, x] < o.T) & _ax10_concl(o, x, y, z)


def _ax10(o, x, y, z):
    return _ax10_literal(o, x, y, z) & (o.A[y, z] < o.T)


def _ax12(o, x, y, z):
    return (o.A[y, x] == o.T) & (o.A[y, z] < o.T) & (o.A[z, o.M[y, o.comp(x)]] >= o.T)


def _ax13(o, x, y, z):
    hyp = (o.A[y, z] == o.T) & (o.A[y, x] == o.T) & (o.A[z, o.M[y, o.comp(x)]] < o.T)
    lhs = o.A[x, o.M[y, o.comp(z)]]
    rhs = o.A[o.M[x, o.comp(y)], z]
    return hyp & (lhs != rhs)


def _ax14(o, x, y, z):
    hyp = (o.A[y, z] == o.T) & (o.A[y, x] == o.T) & (o.A[x, o.M[y, o.comp(z)]] == o.T)
    return hyp & (o.A[z, o.M[y, o.comp(x)]] != o.T)


def _ax15(o, x, y, z):
    hyp = (o.A[y, z] == o.T) & (o.A[y, x] == o.T) & (o.A[x, o.M[y, o.comp(z)]] == o.T)
    lhs = o.M[o.M[y, o.comp(x)], o.comp(z)]
    rhs = o.M[o.M[y, o.comp(z)], o.comp(x)]
    return hyp & (lhs != rhs)


@dataclass(frozen=True)
class _Axiom:
    axiom_id: int
    name: str
    variables: tuple
    statement: str
    check: Optional[Callable]
    flag: Optional[str] = None
    reading: Optional[str] = None
    literal: Optional[Callable] = None


AXIOMS: tuple[_Axiom, ...] = (
    _Axiom(1, "commutativity", ("x", "y"), "x+y = y+x", _ax1),
    _Axiom(2, "identity and absorption", ("x",), "x+0 = x and x+tau = tau", _ax2),
    _Axiom(3, "order compatibility", ("x", "y", "x1", "y1"), "x<=y and x1<=y1 imply x+x1 <= y+y1", _ax3),
    _Axiom(4, "associativity", ("x", "y", "z"), "(x+y)+z = x+(y+z)", _ax4),
    _Axiom(5, "cancellation", ("x", "y", "z"), "x+y = x+z < tau implies y = z", _ax5),
    _Axiom(6, "unique difference", ("x", "y"), "x <= y < tau implies exactly one z with x+z = y", _ax6),
    _Axiom(
        7,
        "complement",
        ("x",),
        "some z < tau has x+z = tau, and tau-.x = min{z : x+z = tau}",
        _ax7,
        flag=DEFECTIVE,
        reading="the witness z < tau is required only for x > 0 (for x = 0 the only solution is z = tau)",
        literal=_ax7_literal,
    ),
    _Axiom(8, "involution", ("x",), "tau-.(tau-.x) = x", _ax8),
    _Axiom(9, "symmetric overflow", ("x", "y"), "x,y < tau and x+y = tau imply y-.(tau-.x) = x-.(tau-.y)", _ax9),
    _Axiom(
        10,
        "overflow shift",
        ("x", "y", "z"),
        "x+(y+z) = tau and y+x < tau imply x-.(tau-.(y+z)) = z-.(tau-.(x+y))",
        _ax10,
        flag=DEFECTIVE,
        reading="adds the hypothesis y+z < tau; without it y+z is truncated and the identity fails",
        literal=_ax10_literal,
    ),
    _Axiom(
        11,
        "incomplete",
        ("x", "y", "z"),
        "y+z < tau, x+(y+z) = tau, x+y = tau, z+(y-.(tau-.x)) < tau imply ?",
        None,
        flag=AMBIGUOUS,
        reading="no consequent is given, so there is nothing to check",
    ),
    _Axiom(12, "bounded overflow", ("x", "y", "z"), "y+x = tau and y+z < tau imply z+(y-.(tau-.x)) < tau", _ax12),
    _Axiom(
        13,
        "overflow exchange",
        ("x", "y", "z"),
        "y+z = y+x = tau and z+(y-.(tau-.x)) < tau imply x+(y-.(tau-.z)) = (x-.(tau-.y))+z",
        _ax13,
        flag=AMBIGUOUS,
        reading="right-hand side grouped as (x -. (tau -. y)) + z",
    ),
    _Axiom(
        14,
        "saturation symmetry",
        ("x", "y", "z"),
        "y+z = y+x = x+(y-.(tau-.z)) = tau imply z+(y-.(tau-.x)) = tau",
        _ax14,
    ),
    _Axiom(
        15,
        "double overflow",
        ("x", "y", "z"),
        "y+z = y+x = x+(y-.(tau-.z)) = tau imply (y-.(tau-.x))-.(tau-.z) = (y-.(tau-.z))-.(tau-.x)",
        _ax15,
    ),
)


def _first_violation_exhaustive(pred, ops: _Ops, nvars: int, size: int):
    """Lexicographically least violating tuple over [0, tau]^nvars, or None."""
    r = np.arange(size)
    if nvars == 4:
        # slice on the first variable to keep the grid at size^3
        rest = [r.reshape(-1, 1, 1), r.reshape(1, -1, 1), r.reshape(1, 1, -1)]
        for x in range(size):
            bad = np.argwhere(np.broadcast_to(pred(ops, x, *rest), (size,) * 3))
            if bad.size:
                return (x, *(int(v) for v in bad[0]))
        return None
    grids = [r.reshape([size if i == j else 1 for j in range(nvars)]) for i in range(nvars)]
    mask = np.broadcast_to(pred(ops, *grids), (size,) * nvars)
    bad = np.argwhere(mask)
    return tuple(int(v) for v in bad[0]) if bad.size else None


def _first_violation_sample(pred, ops: _Ops, nvars: int, size: int, rng, count: int):
    cols = [rng.integers(0, size, count) for _ in range(nvars)]
    mask = pred(ops, *cols)
    hits = np.flatnonzero(mask)
    if not hits.size:
        return None
    tuples = sorted(tuple(int(c[i]) for c in cols) for i in hits)
    return tuples[0]


def _as_table(structure: Union[int, Toag, ToagTable]) -> ToagTable:
    if isinstance(structure, ToagTable):
        return structure
    if isinstance(structure, Toag):
        return structure.table()
    return Toag(int(structure)).table()


def check_toag_axioms(
    structure: Union[int, Toag, ToagTable],
    mode: str = "exhaustive",
    *,
    seed: int = 0,
    count: int = 10_000,
    cap: int = DEFAULT_EXHAUSTIVE_CAP,
) -> AxiomReport:
    """Check the fifteen TOAG axioms on ``structure`` (a tau or a table).

    ``mode`` is ``"exhaustive"`` (all tuples, tau <= cap) or ``"sample"``
    (``count`` random tuples per axiom drawn with ``seed``).
    """
    table = _as_table(structure)
    if mode == "exhaustive" and table.tau > cap:
        raise CapExceeded(f"exhaustive check needs tau <= {cap}, got {table.tau}", tau=table.tau, cap=cap)
    if mode not in ("exhaustive", "sample"):
        raise ValueError(f"unknown mode {mode!r}")
    ops = _Ops(table)
    size = table.tau + 1
    rng = np.random.default_rng(seed)
    report = AxiomReport(table.tau, table.name, mode if mode == "exhaustive" else f"sample(seed={seed}, count={count})")

    def run(pred, nvars):
        if mode == "exhaustive":
            return _first_violation_exhaustive(pred, ops, nvars, size), size**nvars
        return _first_violation_sample(pred, ops, nvars, size, rng, count), count

    for ax in AXIOMS:
        res = AxiomResult(ax.axiom_id, ax.name, ax.statement, NOT_CHECKED, flag=ax.flag, reading=ax.reading)
        if ax.check is not None:
            bad, checked = run(ax.check, len(ax.variables))
            res.checked = checked
            res.status = FAIL if bad else PASS
            if bad:
                res.counterexample = dict(zip(ax.variables, bad))
        if ax.literal is not None:
            bad, _ = run(ax.literal, len(ax.variables))
            res.literal_status = FAIL if bad else PASS
            if bad:
                res.literal_counterexample = dict(zip(ax.variables, bad))
        report.results.append(res)
    return report


# -- Presburger TOAGs --------------------------------------------------------


@dataclass
class PresburgerReport:
    tau: int
    structure: str
    n_bound: int
    toag_axioms_ok: bool
    successor_ok: bool
    division_ok: bool
    failing_axioms: list[int] = field(default_factory=list)
    failing_successor: Optional[int] = None
    failing_division: Optional[tuple[int, int]] = None
    predecessors: dict[int, int] = field(default_factory=dict)
    witnesses: dict[tuple[int, int], tuple[int, int]] = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.toag_axioms_ok and self.successor_ok and self.division_ok

    def __bool__(self):
        return self.holds

    def to_dict(self) -> dict:
        return {
            "tau": self.tau,
            "structure": self.structure,
            "n_bound": self.n_bound,
            "holds": self.holds,
            "toag_axioms_ok": self.toag_axioms_ok,
            "failing_axioms": self.failing_axioms,
            "successor_ok": self.successor_ok,
            "failing_successor": self.failing_successor,
            "division_ok": self.division_ok,
            "failing_division": list(self.failing_division) if self.failing_division else None,
            "witnesses": [
                {"n": n, "x": x, "y": y, "m": m} for (n, x), (y, m) in sorted(self.witnesses.items())
            ],
        }


def _n_fold(A: np.ndarray, y: np.ndarray, n: int) -> np.ndarray:
    acc = np.zeros_like(y)
    for _ in range(n):
        acc = A[acc, y]
    return acc


def check_presburger_toag(structure: Union[int, Toag, ToagTable], n_bound: int = 10) -> PresburgerReport:
    """Recognise a Presburger TOAG.

    Verifies the TOAG axioms, that every positive element is the successor
    y + 1 of some y, and that every x can be written as n*y + m*1 with
    m < n for 2 <= n <= n_bound. Witnesses (y, m) are the least y, then least m.
    """
    table = _as_table(structure)
    if table.tau < 1:
        raise OutOfRange("Presburger recognition needs tau >= 1", tau=table.tau)
    axioms = check_toag_axioms(table, cap=max(DEFAULT_EXHAUSTIVE_CAP, table.tau))
    A = table.add
    one = table.one
    size = table.tau + 1
    report = PresburgerReport(
        tau=table.tau,
        structure=table.name,
        n_bound=n_bound,
        toag_axioms_ok=axioms.passed,
        successor_ok=True,
        division_ok=True,
        failing_axioms=[r.axiom_id for r in axioms.failures()],
    )
    for x in range(1, size):
        preds = [y for y in range(x) if A[y, one] == x]
        if not preds:
            report.successor_ok = False
            report.failing_successor = x
            break
        report.predecessors[x] = preds[0]

    ys = np.arange(size)
    for n in range(2, n_bound + 1):
        base = _n_fold(A, ys, n)
        # value[y, m] = n*y + m*1
        value = np.empty((size, n), dtype=np.int64)
        value[:, 0] = base
        for m in range(1, n):
            value[:, m] = A[value[:, m - 1], one]
        flat = value.reshape(-1)
        for x in range(size):
            hits = np.flatnonzero(flat == x)
            if not hits.size:
                report.division_ok = False
                report.failing_division = (n, x)
                return report
            y, m = divmod(int(hits[0]), n)
            report.witnesses[(n, x)] = (y, m)
    return report

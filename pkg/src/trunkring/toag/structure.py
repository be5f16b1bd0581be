"""Truncated ordered abelian groups on the carrier [0, tau]."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..errors import OutOfRange
from ..formula.ast import App, Const, Eq, Lit, Sort


@dataclass(frozen=True)
class ToagTable:
    """A finite structure on [0, tau] given by operation tables.

    The order is the natural order of the indices, 0 is the least element
    and tau the top. ``add[a, b]`` is a + b and ``monus[a, b]`` is a -. b.
    Arbitrary tables are accepted so that non-TOAGs can be checked too.
    """

    tau: int
    add: np.ndarray = field(repr=False)
    monus: np.ndarray = field(repr=False)
    name: str = "table"

    def __post_init__(self):
        size = self.tau + 1
        for label, tab in (("add", self.add), ("monus", self.monus)):
            if tab.shape != (size, size):
                raise OutOfRange(f"{label} table must be {size}x{size}, got {tab.shape}")
            if tab.size and (tab.min() < 0 or tab.max() > self.tau):
                raise OutOfRange(f"{label} table leaves the carrier [0, {self.tau}]")

    @property
    def one(self) -> int:
        """Least positive element (equal to tau when tau = 0)."""
        return min(1, self.tau)


@dataclass(frozen=True)
class Toag:
    """The canonical TOAG [0, tau]: a + b = min(a + b, tau), a -. b = max(a - b, 0)."""

    tau: int

    def __post_init__(self):
        if isinstance(self.tau, bool) or not isinstance(self.tau, int) or self.tau < 0:
            raise OutOfRange(f"tau must be a non-negative integer, got {self.tau!r}")

    def _check(self, *xs):
        for x in xs:
            if not 0 <= x <= self.tau:
                raise OutOfRange(f"{x} outside [0, {self.tau}]", value=x, tau=self.tau)

    def add(self, a: int, b: int) -> int:
        self._check(a, b)
        return min(a + b, self.tau)

    def monus(self, a: int, b: Optional[int] = None) -> int:
        """``tau -. a`` when called with one argument, else ``a -. b``."""
        if b is None:
            self._check(a)
            return self.tau - a
        self._check(a, b)
        return max(a - b, 0)

    @property
    def one(self) -> int:
        return min(1, self.tau)

    def elements(self) -> range:
        return range(self.tau + 1)

    def table(self) -> ToagTable:
        r = np.arange(self.tau + 1, dtype=np.int64)
        add = np.minimum(r[:, None] + r[None, :], self.tau)
        monus = np.maximum(r[:, None] - r[None, :], 0)
        return ToagTable(self.tau, add, monus, name=f"[0,{self.tau}]")


def toag_ops(op: str, a: int, b: Optional[int] = None, *, tau: int) -> int:
    """``add`` -> min(a + b, tau); ``monus`` -> tau - a (one operand)."""
    T = Toag(tau)
    if op == "add":
        if b is None:
            raise TypeError("add needs two operands")
        return T.add(a, b)
    if op == "monus":
        return T.monus(a, b)
    raise ValueError(f"unknown TOAG operation {op!r}")


def modular_table(tau: int) -> ToagTable:
    """Addition mod tau + 1 on [0, tau]: a standard non-TOAG used as a negative control."""
    r = np.arange(tau + 1, dtype=np.int64)
    add = (r[:, None] + r[None, :]) % (tau + 1)
    monus = np.maximum(r[:, None] - r[None, :], 0)
    return ToagTable(tau, add, monus, name=f"Z/{tau + 1}")


@dataclass(frozen=True)
class Embedding:
    """Identity embedding of [0, tau] as the initial segment [0, tau_gamma] of Z."""

    tau: int
    group: str
    tau_gamma: int
    elements_checked: int
    pairs_checked: int
    verified: bool
    mismatch: Optional[tuple] = None

    def __call__(self, a: int) -> int:
        return a

    def to_dict(self) -> dict:
        return {
            "tau": self.tau,
            "group": self.group,
            "tau_gamma": self.tau_gamma,
            "elements_checked": self.elements_checked,
            "pairs_checked": self.pairs_checked,
            "verified": self.verified,
            "mismatch": list(self.mismatch) if self.mismatch else None,
        }


def realize_as_initial_segment(tau: int, table: Optional[ToagTable] = None) -> Embedding:
    """Embed [0, tau] into the ordered group Z and verify the operations agree.

    The induced structure on [0, tau_gamma] inside Z has a + b = min(a + b, tau_gamma)
    and a -. b = max(a - b, 0); both tables are compared entry by entry.
    """
    if table is None:
        table = Toag(tau).table()
    elif table.tau != tau:
        raise OutOfRange(f"table has tau={table.tau}, expected {tau}")
    r = np.arange(tau + 1, dtype=np.int64)
    a, b = r[:, None], r[None, :]
    induced_add = np.minimum(a + b, tau)
    induced_monus = np.maximum(a - b, 0)
    mismatch = None
    for label, ours, induced in (("add", table.add, induced_add), ("monus", table.monus, induced_monus)):
        bad = np.argwhere(ours != induced)
        if bad.size:
            i, j = (int(x) for x in bad[0])
            mismatch = (label, i, j, int(ours[i, j]), int(induced[i, j]))
            break
    return Embedding(
        tau=tau,
        group="Z",
        tau_gamma=tau,
        elements_checked=tau + 1,
        pairs_checked=(tau + 1) ** 2,
        verified=mismatch is None,
        mismatch=mismatch,
    )


def ones(count: int) -> App | Lit:
    """The value term 1 + 1 + ... + 1 (``count`` summands; 0 when count = 0)."""
    if count == 0:
        return Lit(0, Sort.VALUE)
    if count == 1:
        return Lit(1, Sort.VALUE)
    return App("+", (Lit(1, Sort.VALUE),) * count, Sort.VALUE)


def distinguishing_sentence(tau1: int, tau2: int) -> Eq:
    """A sentence true in exactly one of [0, tau1], [0, tau2] (tau1 != tau2).

    ``1 + ... + 1 = tau`` with min(tau1, tau2) summands holds in the smaller
    structure and fails in the larger one.
    """
    if tau1 == tau2:
        raise ValueError("equal tops satisfy the same sentences")
    return Eq(ones(min(tau1, tau2)), Const("tau", Sort.VALUE))

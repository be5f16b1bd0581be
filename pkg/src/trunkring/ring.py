"""Exact arithmetic in Z/p^kZ with the truncated valuation and angular component."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Union

from sympy import isprime as _sympy_isprime

from .errors import BadExponent, ModulusMismatch, NotAUnit, NotPrime


@lru_cache(maxsize=4096)
def is_prime(n: int) -> bool:
    return n >= 2 and bool(_sympy_isprime(n))


def valuation(rep: int, p: int, k: int) -> int:
    """Truncated p-adic valuation of a residue: min(v_p(rep), k), with v(0) = k."""
    if rep == 0:
        return k
    v = 0
    while v < k and rep % p == 0:
        rep //= p
        v += 1
    return v


def angular_component(rep: int, p: int, k: int) -> int:
    """First nonzero p-adic digit of ``rep``; 0 for the zero residue."""
    if rep == 0:
        return 0
    while rep % p == 0:
        rep //= p
    return rep % p


@dataclass(frozen=True)
class Modulus:
    """The prime power p^k; the ring is Z/p^kZ."""

    p: int
    k: int
    n: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if isinstance(self.p, bool) or not isinstance(self.p, int):
            raise NotPrime(f"p must be an integer, got {self.p!r}", p=self.p)
        if isinstance(self.k, bool) or not isinstance(self.k, int) or self.k < 1:
            raise BadExponent(f"exponent must be a positive integer, got {self.k!r}", k=self.k)
        if not is_prime(self.p):
            raise NotPrime(f"{self.p} is not prime", p=self.p)
        object.__setattr__(self, "n", self.p**self.k)

    def __str__(self):
        return f"{self.p}^{self.k}"

    def __call__(self, value: int) -> "RingElem":
        return RingElem(value, self)

    def elements(self) -> Iterator["RingElem"]:
        for r in range(self.n):
            yield RingElem(r, self)

    @property
    def t(self) -> "RingElem":
        """The distinguished element of valuation 1 (t = p)."""
        return RingElem(self.p, self)

    def to_dict(self) -> dict:
        return {"p": str(self.p), "k": self.k, "modulus": str(self.n)}


def make_modulus(p: int, k: int) -> Modulus:
    """Validated constructor; raises NotPrime / BadExponent."""
    if isinstance(k, int) and not isinstance(k, bool) and k < 1:
        raise BadExponent(f"exponent must be >= 1, got {k}", k=k)
    return Modulus(p, k)


Operand = Union["RingElem", int]


@dataclass(frozen=True)
class RingElem:
    rep: int
    modulus: Modulus

    def __post_init__(self):
        object.__setattr__(self, "rep", self.rep % self.modulus.n)

    # -- helpers ---------------------------------------------------------
    def _coerce(self, other: Operand) -> int:
        if isinstance(other, RingElem):
            if other.modulus != self.modulus:
                raise ModulusMismatch(
                    f"cannot combine elements of Z/{self.modulus} and Z/{other.modulus}"
                )
            return other.rep
        if isinstance(other, int):
            return other
        return NotImplemented

    def _wrap(self, rep: int) -> "RingElem":
        return RingElem(rep, self.modulus)

    # -- ring operations -------------------------------------------------
    def __add__(self, other: Operand) -> "RingElem":
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.rep + o)

    __radd__ = __add__

    def __sub__(self, other: Operand) -> "RingElem":
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.rep - o)

    def __rsub__(self, other: Operand) -> "RingElem":
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(o - self.rep)

    def __mul__(self, other: Operand) -> "RingElem":
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.rep * o)

    __rmul__ = __mul__

    def __neg__(self) -> "RingElem":
        return self._wrap(-self.rep)

    def __pow__(self, e: int) -> "RingElem":
        if e < 0:
            return self.inv() ** (-e)
        return self._wrap(pow(self.rep, e, self.modulus.n))

    def inv(self) -> "RingElem":
        if not self.is_unit:
            raise NotAUnit(f"{self.rep} is not a unit in Z/{self.modulus}", x=self.rep)
        return self._wrap(pow(self.rep, -1, self.modulus.n))

    # -- valuation data --------------------------------------------------
    @property
    def val(self) -> int:
        return valuation(self.rep, self.modulus.p, self.modulus.k)

    @property
    def ac(self) -> int:
        return angular_component(self.rep, self.modulus.p, self.modulus.k)

    @property
    def is_unit(self) -> bool:
        return self.rep % self.modulus.p != 0

    def __int__(self):
        return self.rep

    def __str__(self):
        return str(self.rep)

    def to_dict(self) -> dict:
        return {"value": str(self.rep), "ring": f"{self.modulus.p}^{self.modulus.k}"}


def ring_arith(op: str, x: RingElem, y: RingElem | None = None) -> RingElem:
    """Apply ``op`` in {add, sub, mul, inv} to canonical residues."""
    if op == "inv":
        return x.inv()
    if y is None:
        raise TypeError(f"operation {op!r} needs two operands")
    if x.modulus != y.modulus:
        raise ModulusMismatch(f"Z/{x.modulus} vs Z/{y.modulus}")
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    raise ValueError(f"unknown ring operation {op!r}")


def val_ac(x: RingElem) -> tuple[int, int]:
    return x.val, x.ac


def project(x: RingElem, k2: int) -> RingElem:
    """Natural surjection Z/p^kZ -> Z/p^k2Z."""
    m = x.modulus
    if not 1 <= k2 <= m.k:
        raise BadExponent(f"target exponent {k2} outside [1, {m.k}]", k2=k2)
    target = m if k2 == m.k else Modulus(m.p, k2)
    return RingElem(x.rep, target)

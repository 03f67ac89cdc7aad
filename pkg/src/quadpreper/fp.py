"""Prime field elements with the same operator protocol as QuadElem.

Families whose moduli curves carry no quadratic points are exercised over
F_p instead, so the forward and inverse maps are written against this
duck-typed interface.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

from sympy.ntheory import isprime, sqrt_mod


class FpElem:
    __slots__ = ("v", "p")

    def __init__(self, v, p: int):
        if isinstance(v, Fraction):
            if v.denominator % p == 0:
                raise ZeroDivisionError(f"{v} has no image in F_{p}")
            v = v.numerator * pow(v.denominator, -1, p)
        object.__setattr__(self, "v", int(v) % p)
        object.__setattr__(self, "p", p)

    def __setattr__(self, name, value):
        raise AttributeError("FpElem is immutable")

    def __reduce__(self):
        return (FpElem, (self.v, self.p))

    def _coerce(self, other) -> Optional["FpElem"]:
        if isinstance(other, FpElem):
            if other.p != self.p:
                raise ValueError("elements of different prime fields")
            return other
        if isinstance(other, (int, Fraction)):
            return FpElem(other, self.p)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else FpElem(self.v + o.v, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else FpElem(self.v - o.v, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else FpElem(o.v - self.v, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else FpElem(self.v * o.v, self.p)

    __rmul__ = __mul__

    def inverse(self) -> "FpElem":
        if self.v == 0:
            raise ZeroDivisionError(f"division by zero in F_{self.p}")
        return FpElem(pow(self.v, -1, self.p), self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else o * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return FpElem(pow(self.v, e, self.p), self.p)

    def __neg__(self):
        return FpElem(-self.v, self.p)

    def __bool__(self):
        return self.v != 0

    def __eq__(self, other):
        if isinstance(other, FpElem):
            return self.p == other.p and self.v == other.v
        if isinstance(other, (int, Fraction)):
            try:
                return self.v == FpElem(other, self.p).v
            except ZeroDivisionError:
                return False
        return NotImplemented

    def __hash__(self):
        return hash((self.v, self.p))

    def sort_key(self) -> tuple[int]:
        return (self.v,)

    def sqrt(self) -> Optional["FpElem"]:
        if self.v == 0:
            return self
        root = sqrt_mod(self.v, self.p)
        return None if root is None else FpElem(root, self.p)

    def __repr__(self):
        return f"FpElem({self.v}, {self.p})"

    def __str__(self):
        return f"{self.v} mod {self.p}"


def check_prime(p: int) -> int:
    if p < 3 or not isprime(p):
        raise ValueError(f"expected an odd prime, got {p}")
    return p

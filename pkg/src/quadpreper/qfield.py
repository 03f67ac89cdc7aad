"""Exact arithmetic in Q and in quadratic fields Q(sqrt(D)).

A field is described by its squarefree integer ``D``; ``RATIONAL`` (= 1)
stands for Q itself.  Elements are :class:`QuadElem` values ``a + b*sqrt(D)``
with ``a`` and ``b`` held as :class:`fractions.Fraction`.

Rational values embed into every field: an element with ``b == 0`` mixes
freely with elements of any ``D``.  Only two genuinely quadratic elements
from different fields refuse to combine.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from math import isqrt
from typing import Optional, Union

from sympy import factorint

from .errors import FieldError, FieldMismatchError

RATIONAL = 1

Rational = Fraction
Number = Union[int, Fraction]

# Scale used when bounding square roots by rationals; 2**32 keeps the
# relative slack far below anything the enumeration box can notice.
_SQRT_SCALE = 1 << 32


@lru_cache(maxsize=65536)
def _square_split(n: int) -> tuple[int, int]:
    """Return ``(k, s)`` with ``n = k**2 * s`` and ``s`` squarefree, sign kept in ``s``."""
    if n == 0:
        raise FieldError("zero has no squarefree kernel")
    sign = -1 if n < 0 else 1
    n = abs(n)
    k, s = 1, 1
    for p, e in factorint(n).items():
        k *= p ** (e // 2)
        if e % 2:
            s *= p
    return k, sign * s


def squarefree_kernel(n: int) -> int:
    """Squarefree part of a nonzero integer, keeping its sign (12 -> 3, -28 -> -7)."""
    return _square_split(int(n))[1]


def make_field(d_raw: int) -> int:
    """Normalise an integer to a field descriptor.

    >>> make_field(12), make_field(-7), make_field(9)
    (3, -7, 1)
    """
    if int(d_raw) != d_raw:
        raise FieldError(f"field descriptor must be an integer, got {d_raw!r}")
    if d_raw == 0:
        raise FieldError("D = 0 does not describe a field")
    return squarefree_kernel(int(d_raw))


def is_rational_square(q: Fraction) -> bool:
    return rational_sqrt(q) is not None


def rational_sqrt(q: Number) -> Optional[Fraction]:
    """Nonnegative rational square root of ``q`` if it exists."""
    q = Fraction(q)
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def _ceil_isqrt(n: int) -> int:
    r = isqrt(n)
    return r if r * r == n else r + 1


def sqrt_upper(q: Number) -> Fraction:
    """A rational upper bound for ``sqrt(q)``, exact when ``q`` is a square."""
    q = Fraction(q)
    if q < 0:
        raise ValueError("square root of a negative number")
    exact = rational_sqrt(q)
    if exact is not None:
        return exact
    n, d = q.numerator, q.denominator
    return Fraction(_ceil_isqrt(n * d * _SQRT_SCALE * _SQRT_SCALE), d * _SQRT_SCALE)


def sqrt_lower(q: Number) -> Fraction:
    """A rational lower bound for ``sqrt(q)``, exact when ``q`` is a square."""
    q = Fraction(q)
    if q < 0:
        raise ValueError("square root of a negative number")
    exact = rational_sqrt(q)
    if exact is not None:
        return exact
    n, d = q.numerator, q.denominator
    return Fraction(isqrt(n * d * _SQRT_SCALE * _SQRT_SCALE), d * _SQRT_SCALE)


class QuadElem:
    """An element ``a + b*sqrt(D)`` of Q(sqrt(D)); immutable and hashable."""

    __slots__ = ("a", "b", "D")

    def __init__(self, a: Number = 0, b: Number = 0, D: int = RATIONAL):
        a = Fraction(a)
        b = Fraction(b)
        D = int(D)
        if D == 0:
            raise FieldError("D = 0 does not describe a field")
        k, s = _square_split(D)
        if s == 1:
            a, b, D = a + b * k, Fraction(0), RATIONAL
        elif k != 1:
            b = b * k
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "D", s)

    def __setattr__(self, name, value):
        raise AttributeError("QuadElem is immutable")

    def __reduce__(self):
        return (QuadElem._raw, (self.a, self.b, self.D))

    @classmethod
    def _raw(cls, a: Fraction, b: Fraction, D: int) -> "QuadElem":
        # Trusted constructor: D already squarefree and b == 0 when D == 1.
        obj = object.__new__(cls)
        object.__setattr__(obj, "a", a)
        object.__setattr__(obj, "b", b)
        object.__setattr__(obj, "D", D)
        return obj

    @property
    def field(self) -> int:
        return self.D

    def is_rational(self) -> bool:
        return self.b == 0

    def sort_key(self) -> tuple[Fraction, Fraction]:
        return (self.a, self.b)

    # -- coercion ----------------------------------------------------------

    @staticmethod
    def _coerce(other) -> Optional["QuadElem"]:
        if isinstance(other, QuadElem):
            return other
        if isinstance(other, (int, Fraction)):
            return QuadElem._raw(Fraction(other), Fraction(0), RATIONAL)
        return None

    def _join(self, other: "QuadElem") -> int:
        if self.D == other.D:
            return self.D
        if other.b == 0:
            return self.D if self.D != RATIONAL else other.D
        if self.b == 0:
            return other.D
        raise FieldMismatchError(f"cannot combine elements of Q(sqrt({self.D})) and Q(sqrt({other.D}))")

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadElem._raw(self.a + o.a, self.b + o.b, self._join(o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadElem._raw(self.a - o.a, self.b - o.b, self._join(o))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        D = self._join(o)
        if self.b == 0:
            return QuadElem._raw(self.a * o.a, self.a * o.b, D)
        if o.b == 0:
            return QuadElem._raw(self.a * o.a, self.b * o.a, D)
        return QuadElem._raw(self.a * o.a + D * self.b * o.b, self.a * o.b + self.b * o.a, D)

    __rmul__ = __mul__

    def inverse(self) -> "QuadElem":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in quadratic field")
        return QuadElem._raw(self.a / n, -self.b / n, self.D)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        self._join(o)
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        result = QuadElem._raw(Fraction(1), Fraction(0), self.D)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __neg__(self):
        return QuadElem._raw(-self.a, -self.b, self.D)

    def __pos__(self):
        return self

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.a == o.a and self.b == o.b and (self.b == 0 or self.D == o.D)

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.D))

    # -- field operations --------------------------------------------------

    def conj(self) -> "QuadElem":
        return QuadElem._raw(self.a, -self.b, self.D)

    def norm(self) -> Fraction:
        return self.a * self.a - self.D * self.b * self.b

    def trace(self) -> Fraction:
        return 2 * self.a

    def sqrt(self) -> Optional["QuadElem"]:
        return sqrt_in_field(self)

    def __repr__(self):
        return f"QuadElem({format_elem(self)!r})"

    def __str__(self):
        return format_elem(self)


def as_elem(x, D: int = RATIONAL) -> QuadElem:
    """Coerce an int, Fraction or QuadElem to a QuadElem (rationals get field ``D``)."""
    if isinstance(x, QuadElem):
        return x
    return QuadElem(Fraction(x), 0, D)


def arith(op: str, x: QuadElem, y: QuadElem) -> QuadElem:
    """Apply ``op`` in {'add', 'sub', 'mul', 'div'} to two elements."""
    ops = {
        "add": lambda u, v: u + v,
        "sub": lambda u, v: u - v,
        "mul": lambda u, v: u * v,
        "div": lambda u, v: u / v,
    }
    if op not in ops:
        raise ValueError(f"unknown operation {op!r}")
    return ops[op](as_elem(x), as_elem(y))


def conj_norm_trace(x: QuadElem) -> tuple[QuadElem, Fraction, Fraction]:
    x = as_elem(x)
    return x.conj(), x.norm(), x.trace()


def _canonical_sign(r: QuadElem) -> QuadElem:
    if r.a > 0 or (r.a == 0 and r.b > 0):
        return r
    return -r


def sqrt_in_field(x: QuadElem) -> Optional[QuadElem]:
    """Square root of ``x`` inside its own field, or ``None``.

    The returned root is normalised so that ``a > 0``, or ``a == 0`` and
    ``b >= 0``.
    """
    x = as_elem(x)
    u, v, D = x.a, x.b, x.D
    if v == 0:
        r = rational_sqrt(u)
        if r is not None:
            return QuadElem._raw(r, Fraction(0), D)
        if D != RATIONAL:
            q = rational_sqrt(u / D)
            if q is not None:
                return QuadElem._raw(Fraction(0), q, D)
        return None
    n = rational_sqrt(x.norm())
    if n is None:
        return None
    for half in ((u + n) / 2, (u - n) / 2):
        p = rational_sqrt(half)
        if p:
            return _canonical_sign(QuadElem._raw(p, v / (2 * p), D))
    return None


def embedding_intervals(x: QuadElem) -> list[tuple[Fraction, Fraction]]:
    """Rational enclosures of the real embeddings of ``x`` (real fields and Q only)."""
    x = as_elem(x)
    if x.b == 0:
        return [(x.a, x.a)] * (2 if x.D > 1 else 1)
    if x.D < 0:
        raise ValueError("imaginary quadratic fields have no real embeddings")
    lo, hi = sqrt_lower(x.D), sqrt_upper(x.D)
    out = []
    for sign in (1, -1):
        ends = (x.a + sign * x.b * lo, x.a + sign * x.b * hi)
        out.append((min(ends), max(ends)))
    return out


def abs_bounds_per_place(x: QuadElem) -> list[Fraction]:
    """Upper bounds for ``|sigma(x)|``, one per archimedean place.

    Real fields give two entries (the embeddings with ``sqrt(D) > 0`` and
    ``sqrt(D) < 0``, in that order); Q and imaginary fields give one.
    """
    x = as_elem(x)
    if x.D < 0:
        return [sqrt_upper(x.norm())]
    if x.D == RATIONAL:
        return [abs(x.a)]
    return [max(abs(lo), abs(hi)) for lo, hi in embedding_intervals(x)]


def arch_abs_bound(x: QuadElem) -> Fraction:
    """A rational ``B`` with ``B >= |sigma(x)|`` for every complex embedding."""
    return max(abs_bounds_per_place(x))


# -- text form ---------------------------------------------------------------


def format_elem(x: QuadElem) -> str:
    """Render as ``a``, ``a/b`` or ``(a/b)+(c/d)*sqrt(D)``."""
    x = as_elem(x)
    if x.b == 0:
        return str(x.a)
    return f"({x.a})+({x.b})*sqrt({x.D})"


_TOKEN = re.compile(r"\s*(?:(\d+)|(sqrt)|([-+*/()]))")


class _Parser:
    def __init__(self, text: str):
        self.tokens = []
        pos = 0
        text = text.strip()
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                raise FieldError(f"cannot parse element {text!r} near position {pos}")
            self.tokens.append(m.group(1) or m.group(2) or m.group(3))
            pos = m.end()
            while pos < len(text) and text[pos].isspace():
                pos += 1
        self.i = 0
        self.text = text

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise FieldError(f"cannot parse element {self.text!r}")
        self.i += 1
        return tok

    def expr(self):
        value = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.unary()
        while self.peek() in ("*", "/"):
            op = self.take()
            rhs = self.unary()
            if op == "*":
                value = value * rhs
            else:
                if not rhs:
                    raise FieldError(f"division by zero in {self.text!r}")
                value = value / rhs
        return value

    def unary(self):
        if self.peek() == "-":
            self.take()
            return -self.unary()
        if self.peek() == "+":
            self.take()
            return self.unary()
        return self.atom()

    def atom(self):
        tok = self.peek()
        if tok == "(":
            self.take()
            value = self.expr()
            self.take(")")
            return value
        if tok == "sqrt":
            self.take()
            self.take("(")
            sign = 1
            if self.peek() == "-":
                self.take()
                sign = -1
            digits = self.take()
            if not digits.isdigit():
                raise FieldError(f"sqrt expects an integer in {self.text!r}")
            self.take(")")
            radicand = sign * int(digits)
            if radicand == 0:
                return QuadElem(0)
            return QuadElem(0, 1, radicand)
        if tok is not None and tok.isdigit():
            self.take()
            return QuadElem(int(tok))
        raise FieldError(f"cannot parse element {self.text!r}")


def parse_elem(text: str, D: Optional[int] = None) -> QuadElem:
    """Parse an element; ``D`` (if given) is the field it must belong to."""
    p = _Parser(text)
    if not p.tokens:
        raise FieldError("empty element")
    value = p.expr()
    if p.peek() is not None:
        raise FieldError(f"trailing input in {text!r}")
    if D is not None:
        D = make_field(D)
        if value.b != 0 and value.D != D:
            raise FieldMismatchError(f"{text!r} does not lie in Q(sqrt({D}))")
        value = QuadElem._raw(value.a, value.b, D)
    return value

"""Iterates and dynatomic polynomials of f_c(x) = x^2 + c in Z[x, c].

The dynatomic polynomial of period N is the Moebius quotient

    prod over n | N of (f^n(x) - x) ** mu(N / n)

computed by exact division.  Every factor is monic in ``x``, so the division
runs over Z[c] with no fractions and any nonzero remainder is a bug.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable

from .errors import ConsistencyError, LimitError

MAX_PERIOD = 8


class BivarPoly:
    """Sparse polynomial in ``x`` and ``c`` with integer coefficients.

    ``terms`` maps ``(i, j)`` to the coefficient of ``x**i * c**j``.  Treat
    instances as immutable.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: dict[tuple[int, int], int] | None = None):
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    @classmethod
    def x(cls) -> "BivarPoly":
        return cls({(1, 0): 1})

    @classmethod
    def c(cls) -> "BivarPoly":
        return cls({(0, 1): 1})

    @classmethod
    def const(cls, k: int) -> "BivarPoly":
        return cls({(0, 0): k})

    def __add__(self, other: "BivarPoly") -> "BivarPoly":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return BivarPoly(out)

    def __neg__(self) -> "BivarPoly":
        return BivarPoly({k: -v for k, v in self.terms.items()})

    def __sub__(self, other: "BivarPoly") -> "BivarPoly":
        return self + (-other)

    def __mul__(self, other: "BivarPoly") -> "BivarPoly":
        out: dict[tuple[int, int], int] = {}
        for (i1, j1), v1 in self.terms.items():
            for (i2, j2), v2 in other.terms.items():
                key = (i1 + i2, j1 + j2)
                out[key] = out.get(key, 0) + v1 * v2
        return BivarPoly(out)

    def __eq__(self, other) -> bool:
        return isinstance(other, BivarPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def deg_x(self) -> int:
        return max((i for i, _ in self.terms), default=-1)

    def deg_c(self) -> int:
        return max((j for _, j in self.terms), default=-1)

    def rows(self) -> dict[int, dict[int, int]]:
        """Group terms by ``x``-degree: ``{i: {j: coeff}}``."""
        out: dict[int, dict[int, int]] = {}
        for (i, j), v in self.terms.items():
            out.setdefault(i, {})[j] = v
        return out

    @classmethod
    def from_rows(cls, rows: dict[int, dict[int, int]]) -> "BivarPoly":
        return cls({(i, j): v for i, row in rows.items() for j, v in row.items()})

    def leading_row(self) -> dict[int, int]:
        return self.rows().get(self.deg_x(), {})

    def divmod_monic_x(self, divisor: "BivarPoly") -> tuple["BivarPoly", "BivarPoly"]:
        """Division in ``x`` by a divisor whose leading ``x`` coefficient is 1."""
        dx = divisor.deg_x()
        if dx < 0 or divisor.leading_row() != {0: 1}:
            raise ValueError("divisor must be monic in x")
        rem = self.rows()
        drows = {i: row for i, row in divisor.rows().items() if i != dx}
        quot: dict[int, dict[int, int]] = {}
        top = self.deg_x()
        for i in range(top, dx - 1, -1):
            row = rem.pop(i, None)
            if not row:
                continue
            shift = i - dx
            quot[shift] = row
            for di, drow in drows.items():
                target = rem.setdefault(shift + di, {})
                for j1, v1 in row.items():
                    for j2, v2 in drow.items():
                        j = j1 + j2
                        nv = target.get(j, 0) - v1 * v2
                        if nv:
                            target[j] = nv
                        else:
                            target.pop(j, None)
        return BivarPoly.from_rows(quot), BivarPoly.from_rows(rem)

    def evaluate(self, x0, c0):
        """Evaluate at field elements (QuadElem, Fraction, int or FpElem)."""
        rows = self.rows()
        if not rows:
            return x0 * 0
        cdeg = self.deg_c()
        cpow = [c0 * 0 + 1]
        for _ in range(cdeg):
            cpow.append(cpow[-1] * c0)
        acc = x0 * 0
        for i in range(self.deg_x(), -1, -1):
            acc = acc * x0
            row = rows.get(i)
            if row:
                for j, v in row.items():
                    acc = acc + cpow[j] * v
        return acc

    def sorted_terms(self) -> list[tuple[int, int, int]]:
        """Terms as ``(i, j, k)`` in graded-lex order (total degree, then ``x`` degree, descending)."""
        keys = sorted(self.terms, key=lambda ij: (-(ij[0] + ij[1]), -ij[0]))
        return [(i, j, self.terms[(i, j)]) for i, j in keys]

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{k}*x^{i}*c^{j}" for i, j, k in self.sorted_terms())

    def __repr__(self) -> str:
        return f"BivarPoly({self})"


def parse_bivar(text: str) -> BivarPoly:
    """Inverse of ``str(BivarPoly)``."""
    text = text.strip()
    if text == "0":
        return BivarPoly()
    terms: dict[tuple[int, int], int] = {}
    for chunk in text.split(" + "):
        k, xs, cs = chunk.split("*")
        terms[(int(xs[2:]), int(cs[2:]))] = int(k)
    return BivarPoly(terms)


def mobius(n: int) -> int:
    if n < 1:
        raise ValueError("mobius is defined for positive integers")
    result, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    return -result if n > 1 else result


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def _check_period(N: int) -> None:
    if not isinstance(N, int) or N < 1 or N > MAX_PERIOD:
        raise LimitError(f"period must lie in 1..{MAX_PERIOD}, got {N!r}")


@lru_cache(maxsize=None)
def iterate_poly(N: int) -> BivarPoly:
    """The N-th iterate f_c^N(x) as a polynomial in ``x`` and ``c``."""
    _check_period(N)
    if N == 1:
        return BivarPoly({(2, 0): 1, (0, 1): 1})
    prev = iterate_poly(N - 1)
    return prev * prev + BivarPoly.c()


def _period_factor(n: int) -> BivarPoly:
    return iterate_poly(n) - BivarPoly.x()


def _product(polys: Iterable[BivarPoly]) -> BivarPoly:
    out = BivarPoly.const(1)
    for p in polys:
        out = out * p
    return out


@lru_cache(maxsize=None)
def dynatomic_poly(N: int) -> BivarPoly:
    """The dynatomic polynomial of period N (exact Moebius quotient)."""
    _check_period(N)
    num = _product(_period_factor(n) for n in divisors(N) if mobius(N // n) == 1)
    den = _product(_period_factor(n) for n in divisors(N) if mobius(N // n) == -1)
    quot, rem = num.divmod_monic_x(den)
    if not rem.is_zero():
        raise ConsistencyError(f"nonzero remainder while dividing out period {N}")
    return quot


def dnrn(N: int) -> tuple[int, int]:
    """``(d, r)``: the ``x``-degree of the period-N dynatomic polynomial and d / N."""
    if not isinstance(N, int) or N < 1:
        raise LimitError(f"period must be a positive integer, got {N!r}")
    d = sum(mobius(N // n) * 2**n for n in divisors(N))
    return d, d // N


def max_cycles(N: int) -> int:
    """Largest possible number of N-cycles over any field of characteristic 0."""
    return dnrn(N)[1]


def eval_dynatomic(N: int, x0, c0):
    """Value of the period-N dynatomic polynomial at ``(x0, c0)``."""
    return dynatomic_poly(N).evaluate(x0, c0)

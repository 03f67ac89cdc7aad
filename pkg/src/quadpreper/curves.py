"""Hyperelliptic curves y^2 = f(x): genus, point counts, point search, resultants.

Polynomials are :class:`UniPoly` values with exact coefficients (Fractions
or QuadElems), stored lowest degree first.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from math import gcd, isqrt
from pathlib import Path
from typing import Iterable, Optional

import numpy as np

from .errors import (
    BadReductionError,
    DataIntegrityError,
    LimitError,
    NotSmoothError,
    OffCurveError,
    RationalValueError,
    UsageError,
)
from .fp import check_prime
from .qfield import QuadElem, as_elem, rational_sqrt, squarefree_kernel

MAX_SEARCH_HEIGHT = 10**6


class UniPoly:
    """Univariate polynomial with exact coefficients, lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [c if isinstance(c, QuadElem) else Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = cs

    @classmethod
    def from_roots_form(cls, text: str) -> "UniPoly":
        return parse_poly(text)

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def lc(self):
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, x):
        acc = x * 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other):
        return isinstance(other, UniPoly) and self.coeffs == other.coeffs

    def __add__(self, other: "UniPoly") -> "UniPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + [0] * (n - len(self.coeffs))
        b = other.coeffs + [0] * (n - len(other.coeffs))
        return UniPoly(x + y for x, y in zip(a, b))

    def __neg__(self) -> "UniPoly":
        return UniPoly(-c for c in self.coeffs)

    def __sub__(self, other: "UniPoly") -> "UniPoly":
        return self + (-other)

    def __mul__(self, other) -> "UniPoly":
        if not isinstance(other, UniPoly):
            return UniPoly(c * other for c in self.coeffs)
        if self.is_zero() or other.is_zero():
            return UniPoly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def divmod(self, other: "UniPoly") -> tuple["UniPoly", "UniPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return UniPoly(), UniPoly(rem)
        quot = [Fraction(0)] * (dq + 1)
        lead = other.lc()
        for k in range(dq, -1, -1):
            coef = rem[k + len(other.coeffs) - 1] / lead
            quot[k] = coef
            if coef != 0:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] = rem[k + j] - coef * b
        return UniPoly(quot), UniPoly(rem[: len(other.coeffs) - 1])

    def derivative(self) -> "UniPoly":
        return UniPoly(i * c for i, c in enumerate(self.coeffs) if i)

    def monic(self) -> "UniPoly":
        return UniPoly(c / self.lc() for c in self.coeffs)

    def __repr__(self) -> str:
        return f"UniPoly({format_poly(self)!r})"

    def __str__(self) -> str:
        return format_poly(self)


def poly_gcd(f: UniPoly, g: UniPoly) -> UniPoly:
    while not g.is_zero():
        f, g = g, f.divmod(g)[1]
    return f.monic() if not f.is_zero() else f


def format_poly(f: UniPoly, var: str = "x") -> str:
    if f.is_zero():
        return "0"
    terms = []
    for i in range(f.degree(), -1, -1):
        c = f.coeffs[i]
        if c == 0:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        cs = str(c)
        if isinstance(c, QuadElem) and c.b != 0:
            cs = f"({cs})"
        if mono and cs == "1":
            terms.append(mono)
        elif mono and cs == "-1":
            terms.append("-" + mono)
        else:
            terms.append(cs + ("*" + mono if mono else ""))
    return " + ".join(terms).replace("+ -", "- ")


def parse_poly(text: str, var: Optional[str] = None) -> UniPoly:
    """Parse a rational univariate polynomial such as ``-(x^2-3)(x^2+1)``."""
    from sympy import Poly, Symbol
    from sympy.parsing.sympy_parser import (
        convert_xor,
        implicit_multiplication_application,
        parse_expr,
        standard_transformations,
    )

    try:
        expr = parse_expr(
            text, transformations=standard_transformations + (implicit_multiplication_application, convert_xor)
        )
    except Exception as exc:  # sympy raises a zoo of exception types here
        raise UsageError(f"cannot parse polynomial {text!r}: {exc}") from None
    symbols = sorted(expr.free_symbols, key=str)
    if len(symbols) > 1:
        raise UsageError(f"polynomial {text!r} has more than one variable")
    sym = symbols[0] if symbols else Symbol(var or "x")
    poly = Poly(expr, sym)
    coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(poly.all_coeffs())]
    return UniPoly(coeffs)


# -- models --------------------------------------------------------------------


@dataclass
class CurveModel:
    """``y^2 = f(x)`` with optional genus annotation and reference string."""

    f: UniPoly
    genus_annotation: Optional[int] = None
    name: str = ""
    ref: str = ""

    def __post_init__(self):
        if isinstance(self.f, str):
            self.f = parse_poly(self.f)
        elif not isinstance(self.f, UniPoly):
            self.f = UniPoly(self.f)


def parse_model_line(line: str) -> CurveModel:
    """``name; y^2 = <poly>; genus=<n>; ref=<string>`` (last two optional)."""
    parts = [p.strip() for p in line.split(";")]
    if len(parts) < 2:
        raise DataIntegrityError(f"model line needs a name and an equation: {line!r}")
    name, eq = parts[0], parts[1]
    m = re.fullmatch(r"y\s*\^\s*2\s*=\s*(.+)", eq)
    if not m:
        raise DataIntegrityError(f"model equation must read 'y^2 = ...': {eq!r}")
    genus, ref = None, ""
    for extra in parts[2:]:
        if extra.startswith("genus="):
            genus = int(extra[len("genus=") :])
        elif extra.startswith("ref="):
            ref = extra[len("ref=") :]
        elif extra:
            raise DataIntegrityError(f"unknown model field {extra!r}")
    try:
        f = parse_poly(m.group(1))
    except UsageError as exc:
        raise DataIntegrityError(str(exc)) from None
    model = CurveModel(f, genus, name, ref)
    if genus is not None and hyperelliptic_genus(model) != genus:
        raise DataIntegrityError(f"model {name}: annotated genus {genus} disagrees with the degree")
    return model


def load_models(path: Optional[str] = None) -> dict[str, CurveModel]:
    if path:
        text = Path(path).read_text(encoding="utf-8")
    else:
        text = resources.files("quadpreper").joinpath("data").joinpath("models.txt").read_text(encoding="utf-8")
    out = {}
    for line in text.splitlines():
        if line.strip() and not line.lstrip().startswith("#"):
            model = parse_model_line(line)
            if model.name in out:
                raise DataIntegrityError(f"duplicate model name {model.name}")
            out[model.name] = model
    return out


def _as_model(model) -> CurveModel:
    if isinstance(model, CurveModel):
        return model
    return CurveModel(model)


def hyperelliptic_genus(model) -> int:
    """Genus of the smooth model of ``y^2 = f(x)``; ``f`` must be squarefree."""
    f = _as_model(model).f
    if f.degree() < 1:
        raise NotSmoothError("constant right-hand side does not define a curve")
    if poly_gcd(f, f.derivative()).degree() > 0:
        raise NotSmoothError(f"{f} has a repeated factor")
    return (f.degree() + 1) // 2 - 1


# -- reduction mod p ---------------------------------------------------------------


def _reduce_mod_p(f: UniPoly, p: int) -> list[int]:
    out = []
    for c in f.coeffs:
        if isinstance(c, QuadElem):
            if c.b != 0:
                raise UsageError("point counting needs rational coefficients")
            c = c.a
        if c.denominator % p == 0:
            raise BadReductionError(f"coefficient {c} is not p-integral at p = {p}")
        out.append(c.numerator * pow(c.denominator, -1, p) % p)
    return out


def _gf_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _gf_gcd_degree(a: list[int], b: list[int], p: int) -> int:
    a, b = _gf_trim(list(a)), _gf_trim(list(b))
    while b:
        inv = pow(b[-1], -1, p)
        while len(a) >= len(b):
            coef = a[-1] * inv % p
            shift = len(a) - len(b)
            for j, bj in enumerate(b):
                a[shift + j] = (a[shift + j] - coef * bj) % p
            _gf_trim(a)
            if not a:
                break
        a, b = b, a
    return len(a) - 1


def has_good_reduction(model, p: int) -> bool:
    f = _as_model(model).f
    try:
        fp = _reduce_mod_p(f, p)
    except BadReductionError:
        return False
    if fp[-1] % p == 0 if fp else True:
        return False
    deriv = [(i * c) % p for i, c in enumerate(fp)][1:]
    return _gf_gcd_degree(fp, deriv, p) == 0


@dataclass(frozen=True)
class FpCount:
    p: int
    affine: int
    at_infinity: int

    @property
    def total(self) -> int:
        return self.affine + self.at_infinity


def count_points_mod_p(model, p: int) -> FpCount:
    """F_p points on the smooth projective model (good reduction only).

    An even-degree model has two points at infinity when the leading
    coefficient is a square mod p and none otherwise; an odd-degree model has one.
    """
    try:
        check_prime(p)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    f = _as_model(model).f
    if not has_good_reduction(f, p):
        raise BadReductionError(f"bad reduction at p = {p}")
    fp = _reduce_mod_p(f, p)
    xs = np.arange(p, dtype=np.int64)
    vals = np.zeros(p, dtype=np.int64)
    for c in reversed(fp):
        vals = (vals * xs + c) % p
    squares = np.zeros(p, dtype=bool)
    squares[(xs * xs) % p] = True
    affine = int(np.sum(vals == 0) + 2 * np.sum(squares[vals] & (vals != 0)))
    d = len(fp) - 1
    if d % 2:
        infinity = 1
    else:
        infinity = 2 if pow(fp[-1], (p - 1) // 2, p) == 1 else 0
    return FpCount(p, affine, infinity)


def hasse_weil_ok(count: int, genus: int, p: int) -> bool:
    """``|count - (p + 1)| <= 2 g sqrt(p)``, tested in integers."""
    diff = count - (p + 1)
    return diff * diff <= 4 * genus * genus * p


def stoll_bound(count: int, rank: int, p: int) -> int:
    """Upper bound for rational points from an F_p count and the Jacobian rank."""
    if p <= 2:
        raise UsageError("the bound needs an odd prime")
    return count + 2 * rank + (2 * rank) // (p - 2)


# -- rational point search -----------------------------------------------------------

_SIEVE_MODULI = (16, 9, 25, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71)


def _integral_model(f: UniPoly) -> tuple[list[int], int]:
    """Integer coefficients of ``L^2 f`` and the scale ``L``."""
    den = 1
    for c in f.coeffs:
        if isinstance(c, QuadElem):
            raise UsageError("point search needs rational coefficients")
        den = den * c.denominator // gcd(den, c.denominator)
    return [int(c * den * den) for c in f.coeffs], den


def _homogeneous(coeffs: list[int], a: int, b: int, weight: int) -> int:
    total = 0
    for i, c in enumerate(coeffs):
        if c:
            total += c * a**i * b ** (weight - i)
    return total


def search_rational_points(model, height: int, chunk: int = 64) -> list[tuple[Fraction, Fraction]]:
    """Affine rational points with ``x = a/b``, ``|a|, b <= height``, sorted.

    Candidates are filtered by quadratic-residue tables modulo small prime
    powers before the exact integer square test.
    """
    if height < 1 or height > MAX_SEARCH_HEIGHT:
        raise LimitError(f"height must lie in 1..{MAX_SEARCH_HEIGHT}")
    f = _as_model(model).f
    hyperelliptic_genus(f)
    coeffs, scale = _integral_model(f)
    d = len(coeffs) - 1
    weight = d + (d % 2)
    half = weight // 2
    tables = []
    for q in _SIEVE_MODULI:
        sq = np.zeros(q, dtype=bool)
        sq[[(x * x) % q for x in range(q)]] = True
        a = np.arange(q, dtype=np.int64)[:, None]
        b = np.arange(q, dtype=np.int64)[None, :]
        acc = np.zeros((q, q), dtype=np.int64)
        for i, c in enumerate(coeffs):
            term = np.full((q, q), c % q, dtype=np.int64)
            for _ in range(i):
                term = term * a % q
            for _ in range(weight - i):
                term = term * b % q
            acc = (acc + term) % q
        tables.append((q, sq[acc]))
    a_vals = np.arange(-height, height + 1, dtype=np.int64)
    found: set[tuple[Fraction, Fraction]] = set()
    for b0 in range(1, height + 1, chunk):
        b_vals = np.arange(b0, min(b0 + chunk, height + 1), dtype=np.int64)
        q, table = tables[0]
        mask = table[(a_vals % q)[None, :], (b_vals % q)[:, None]]
        bi, ai = np.nonzero(mask)
        A, B = a_vals[ai], b_vals[bi]
        for q, table in tables[1:]:
            keep = table[A % q, B % q]
            A, B = A[keep], B[keep]
            if A.size == 0:
                break
        if A.size == 0:
            continue
        keep = np.gcd(A, B) == 1
        for a, b in zip(A[keep].tolist(), B[keep].tolist()):
            val = _homogeneous(coeffs, a, b, weight)
            if val < 0:
                continue
            r = isqrt(val)
            if r * r == val:
                x = Fraction(a, b)
                y = Fraction(r, b**half * scale)
                found.add((x, y))
                found.add((x, -y))
    return sorted(found)


# -- quadratic points ------------------------------------------------------------------


def obvious_quadratic_point(model, x0) -> tuple[int, tuple[QuadElem, QuadElem]]:
    """The point ``(x0, sqrt(f(x0)))`` and the field Q(sqrt(D)) it lives in."""
    f = _as_model(model).f
    x0 = Fraction(x0)
    val = Fraction(f(x0))
    if val == 0 or rational_sqrt(val) is not None:
        raise RationalValueError(f"f({x0}) = {val} is a rational square")
    prod = val.numerator * val.denominator
    D = squarefree_kernel(prod)
    k = isqrt(prod // D)
    y = QuadElem(0, Fraction(k, val.denominator), D)
    return D, (as_elem(x0, D), y)


def ec_quadratic_relation(a, b, c, d, x0, y0, v) -> UniPoly:
    """Monic quadratic cut out on ``y^2 = a x^3 + b x^2 + c x + d`` by the line of slope ``v`` through ``(x0, y0)``.

    Its roots are the x-coordinates of the two remaining intersection points.
    ``d`` enters only through the check that ``(x0, y0)`` lies on the curve.
    """
    a, b, c, d, x0, y0, v = (Fraction(t) if not isinstance(t, QuadElem) else t for t in (a, b, c, d, x0, y0, v))
    if a == 0:
        raise UsageError("the cubic coefficient must be nonzero")
    if y0 * y0 != ((a * x0 + b) * x0 + c) * x0 + d:
        raise OffCurveError(f"({x0}, {y0}) is not on the curve")
    lin = (a * x0 - v * v + b) / a
    const = (a * x0 * x0 + v * v * x0 + b * x0 - 2 * y0 * v + c) / a
    return UniPoly([const, lin, Fraction(1)])


def quadratic_is_reducible(q: UniPoly) -> bool:
    """Does a rational quadratic split over Q?"""
    if q.degree() != 2:
        raise UsageError("expected a quadratic")
    c0, c1, c2 = q.coeffs
    return rational_sqrt(c1 * c1 - 4 * c0 * c2) is not None


# -- resultants ------------------------------------------------------------------------


def resultant(f, g) -> Fraction:
    """Resultant of two polynomials by the Euclidean recurrence."""
    f = f if isinstance(f, UniPoly) else UniPoly(f)
    g = g if isinstance(g, UniPoly) else UniPoly(g)
    if f.is_zero() or g.is_zero():
        raise UsageError("resultant of the zero polynomial")
    result = Fraction(1)
    while True:
        m, n = f.degree(), g.degree()
        if n == 0:
            return result * g.lc() ** m
        if m == 0:
            return result * f.lc() ** n
        r = f.divmod(g)[1]
        if r.is_zero():
            return Fraction(0)
        k = r.degree()
        if (m * n) % 2:
            result = -result
        result *= g.lc() ** (m - k)
        f, g = g, r


def sylvester_resultant(f: UniPoly, g: UniPoly) -> Fraction:
    """Determinant of the Sylvester matrix; slow but independent of :func:`resultant`."""
    m, n = f.degree(), g.degree()
    if m < 0 or n < 0:
        return Fraction(0)
    size = m + n
    if size == 0:
        return Fraction(1)
    rows = []
    fc = list(reversed(f.coeffs))
    gc = list(reversed(g.coeffs))
    for i in range(n):
        rows.append([Fraction(0)] * i + fc + [Fraction(0)] * (size - i - len(fc)))
    for i in range(m):
        rows.append([Fraction(0)] * i + gc + [Fraction(0)] * (size - i - len(gc)))
    det = Fraction(1)
    for col in range(size):
        pivot = next((r for r in range(col, size) if rows[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            det = -det
        det *= rows[col][col]
        for r in range(col + 1, size):
            if rows[r][col] != 0:
                factor = rows[r][col] / rows[col][col]
                rows[r] = [x - factor * y for x, y in zip(rows[r], rows[col])]
    return det

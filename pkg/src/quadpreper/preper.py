"""Preperiodic points of f_c(z) = z^2 + c over Q and quadratic fields.

Enumeration is provably complete.  At every place v a preperiodic point
satisfies a size bound:

* at a finite place with ``|c|_v <= 1`` it is v-integral;
* at a finite place with ``|c|_v > 1`` it has ``|x|_v**2 == |c|_v``, which is
  impossible when ``v(c)`` is odd (then nothing is preperiodic);
* at an archimedean place ``|x|_v <= (1 + sqrt(1 + 4|c|_v)) / 2``.

The finite conditions say ``m * x`` lies in the ring of integers, where ``m``
is the least positive integer with ``m**2 * c`` integral.  Writing
``m * x = s + t*omega`` in an integral basis ``{1, omega}``, the archimedean
conditions cut out a finite box of integer pairs ``(s, t)``.  The map f_c
acts on these integer coordinates exactly, and a point is preperiodic iff
its forward orbit never leaves the box.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt
from typing import Iterator, Optional, Sequence, Union

from sympy.ntheory import sqrt_mod

from .errors import BoxTooLargeError, FieldError, GraphError
from .fp import FpElem
from .qfield import (
    RATIONAL,
    QuadElem,
    abs_bounds_per_place,
    as_elem,
    sqrt_in_field,
    sqrt_lower,
    sqrt_upper,
)

DEFAULT_MAX_BOX = 10**7


@dataclass(frozen=True, order=True)
class PointType:
    """Eventual period and preperiod of a point (written ``period_preperiod``)."""

    period: int
    preperiod: int

    def __str__(self) -> str:
        return f"{self.period}_{self.preperiod}"

    @classmethod
    def parse(cls, text: str) -> "PointType":
        try:
            m, n = text.strip().split("_")
            pt = cls(int(m), int(n))
        except ValueError as exc:
            raise ValueError(f"bad point type {text!r}, expected like 3_1") from exc
        if pt.period < 1 or pt.preperiod < 0:
            raise ValueError(f"bad point type {text!r}")
        return pt


@dataclass
class OrbitRecord:
    start: object
    trajectory: list
    type: Optional[PointType]
    escape: Optional[str] = None  # "finite", "archimedean" or "step_cap"

    @property
    def escaped(self) -> bool:
        return self.type is None

    def cycle(self) -> list:
        if self.type is None:
            return []
        n = self.type.preperiod
        return self.trajectory[n : n + self.type.period]


# -- integral coordinates ----------------------------------------------------


def _omega_data(D: int) -> tuple[int, int]:
    """``(e1, e0)`` with ``omega**2 = e1*omega + e0`` for the standard integral basis."""
    if D == RATIONAL:
        return (0, 0)
    if D % 4 == 1:
        return (1, (D - 1) // 4)
    return (0, D)


def _omega_coords(x: QuadElem, D: int) -> tuple[Fraction, Fraction]:
    """Rational coordinates of ``x`` in the basis ``{1, omega}``."""
    if D == RATIONAL or x.b == 0:
        return (x.a, Fraction(0))
    if D % 4 == 1:
        return (x.a - x.b, 2 * x.b)
    return (x.a, x.b)


def _from_omega(s: Fraction, t: Fraction, D: int) -> QuadElem:
    if D == RATIONAL or t == 0:
        return QuadElem._raw(Fraction(s), Fraction(0), D)
    if D % 4 == 1:
        return QuadElem._raw(s + t / 2, t / 2, D)
    return QuadElem._raw(Fraction(s), Fraction(t), D)


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def _least_root_multiple(e: int) -> int:
    """Least ``m > 0`` with ``e | m**2``."""
    from sympy import factorint

    m = 1
    for p, k in factorint(e).items():
        m *= p ** ((k + 1) // 2)
    return m


def _vp(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of zero")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _hensel_root(g1: int, g0: int, r: int, p: int, k: int) -> int:
    """Lift a simple root ``r`` of ``X^2 + g1 X + g0`` mod p to mod p**k."""
    mod = p
    while mod < p**k:
        mod = min(mod * mod, p**k)
        val = (r * r + g1 * r + g0) % mod
        der = (2 * r + g1) % mod
        r = (r - val * pow(der, -1, mod)) % mod
    return r


def splitting_type(D: int, p: int) -> str:
    """How the rational prime ``p`` factors in Q(sqrt(D)): split, inert or ramified."""
    disc = D if D % 4 == 1 else 4 * D
    if disc % p == 0:
        return "ramified"
    if p == 2:
        return "split" if D % 8 == 1 else "inert"
    return "split" if pow(D % p, (p - 1) // 2, p) == 1 else "inert"


def prime_valuations(x: QuadElem, D: int, p: int) -> list[int]:
    """Valuations of a nonzero ``x`` at the primes of Q(sqrt(D)) above ``p``."""
    x = as_elem(x)
    if not x:
        raise ValueError("valuation of zero")
    if D == RATIONAL:
        return [_vp(x.a.numerator, p) - _vp(x.a.denominator, p)]
    kind = splitting_type(D, p)
    nrm = x.norm()
    vn = _vp(nrm.numerator, p) - _vp(nrm.denominator, p)
    if kind == "ramified":
        return [vn]
    if kind == "inert":
        return [vn // 2]
    cs, ct = _omega_coords(x, D)
    den = _lcm(cs.denominator, ct.denominator)
    s, t = int(cs * den), int(ct * den)
    e1, e0 = _omega_data(D)
    n_int = s * s + e1 * s * t - e0 * t * t
    k = _vp(n_int, p) + 1
    if p == 2:
        roots = [0, 1]
    elif D % 4 == 1:
        inv2 = pow(2, -1, p)
        roots = [((1 + r) * inv2) % p for r in sqrt_mod(D % p, p, all_roots=True)]
    else:
        roots = list(sqrt_mod(D % p, p, all_roots=True))
    out = []
    for r in roots:
        rho = _hensel_root(-e1, -e0, r, p, k)
        val = (s + t * rho) % p**k
        v = k if val == 0 else _vp(val, p)
        out.append(min(v, k) - _vp(den, p))
    return out


# -- bounds --------------------------------------------------------------------


@dataclass(frozen=True)
class EmptyBounds:
    """No point of the field can be preperiodic for this ``c``."""

    reason: str
    empty: bool = True


@dataclass
class Box:
    """Finite search region for preperiodic points.

    Candidates are ``(s + t*omega) / m`` with ``(s, t)`` integers in the box.
    ``place_bounds`` holds the archimedean radius used at each place.
    """

    D: int
    c: QuadElem
    m: int
    place_bounds: list[Fraction]
    c_coords: tuple[int, int]
    empty: bool = False
    _ranges: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._e1, self._e0 = _omega_data(self.D)
        m = self.m
        if self.D == RATIONAL:
            self._tmax = 0
            self._smax_rat = int(m * self.place_bounds[0])
        elif self.D < 0:
            self._norm_cap = (m * self.place_bounds[0]) ** 2
            scale = 4 if self.D % 4 == 1 else 1
            self._tmax = isqrt(int(scale * self._norm_cap / -self.D))
        else:
            self._sqrt_lo = sqrt_lower(self.D)
            self._sqrt_hi = sqrt_upper(self.D)
            if self.D % 4 == 1:
                self._omega_iv = [
                    ((1 + self._sqrt_lo) / 2, (1 + self._sqrt_hi) / 2),
                    ((1 - self._sqrt_hi) / 2, (1 - self._sqrt_lo) / 2),
                ]
                delta_lo = self._sqrt_lo
            else:
                self._omega_iv = [(self._sqrt_lo, self._sqrt_hi), (-self._sqrt_hi, -self._sqrt_lo)]
                delta_lo = 2 * self._sqrt_lo
            total = m * (self.place_bounds[0] + self.place_bounds[1])
            self._tmax = int(total / delta_lo)

    def t_range(self) -> range:
        return range(-self._tmax, self._tmax + 1)

    def s_range(self, t: int) -> tuple[int, int]:
        """Inclusive bounds for ``s`` at a given ``t`` (empty when lo > hi)."""
        if t in self._ranges:
            return self._ranges[t]
        if abs(t) > self._tmax:
            return (1, 0)
        m = self.m
        if self.D == RATIONAL:
            out = (-self._smax_rat, self._smax_rat)
        elif self.D < 0:
            if self.D % 4 == 1:
                rem = 4 * self._norm_cap + self.D * t * t
                if rem < 0:
                    out = (1, 0)
                else:
                    r = isqrt(int(rem))
                    out = (-((r + t) // 2), (r - t) // 2)
            else:
                rem = self._norm_cap + self.D * t * t
                if rem < 0:
                    out = (1, 0)
                else:
                    r = isqrt(int(rem))
                    out = (-r, r)
        else:
            lo, hi = None, None
            for bound, (w_lo, w_hi) in zip(self.place_bounds, self._omega_iv):
                tw = (t * w_lo, t * w_hi)
                tw_min, tw_max = min(tw), max(tw)
                cand_lo = -m * bound - tw_max
                cand_hi = m * bound - tw_min
                lo = cand_lo if lo is None else max(lo, cand_lo)
                hi = cand_hi if hi is None else min(hi, cand_hi)
            out = (_ceil(lo), _floor(hi))
        if len(self._ranges) < 1_000_000:
            self._ranges[t] = out
        return out

    def cardinality(self, limit: Optional[int] = None) -> int:
        total = 0
        for t in self.t_range():
            lo, hi = self.s_range(t)
            if hi >= lo:
                total += hi - lo + 1
            if limit is not None and total > limit:
                return total
        return total

    def contains(self, s: int, t: int) -> bool:
        lo, hi = self.s_range(t)
        return lo <= s <= hi

    def points(self) -> Iterator[tuple[int, int]]:
        for t in self.t_range():
            lo, hi = self.s_range(t)
            for s in range(lo, hi + 1):
                yield (s, t)

    def coords(self, x: QuadElem) -> Optional[tuple[int, int]]:
        """Integer coordinates of ``m * x``, or ``None`` if it is not integral."""
        cs, ct = _omega_coords(as_elem(x), self.D)
        s, t = cs * self.m, ct * self.m
        if s.denominator != 1 or t.denominator != 1:
            return None
        return (int(s), int(t))

    def elem(self, s: int, t: int) -> QuadElem:
        return _from_omega(Fraction(s, self.m), Fraction(t, self.m), self.D)

    def step(self, s: int, t: int) -> Optional[tuple[int, int]]:
        """Image under f_c in coordinates; ``None`` if it leaves the integral lattice."""
        cs, ct = self.c_coords
        ns = s * s + self._e0 * t * t + cs
        nt = 2 * s * t + self._e1 * t * t + ct
        q1, r1 = divmod(ns, self.m)
        q2, r2 = divmod(nt, self.m)
        if r1 or r2:
            return None
        return (q1, q2)


def _ceil(q: Fraction) -> int:
    return -((-q.numerator) // q.denominator)


def _floor(q: Fraction) -> int:
    return q.numerator // q.denominator


def _field_of(K: int, c: QuadElem) -> tuple[int, QuadElem]:
    from .qfield import make_field

    K = make_field(K) if K != RATIONAL else RATIONAL
    c = as_elem(c)
    if c.b != 0 and c.D != K:
        raise FieldError(f"c = {c} does not lie in Q(sqrt({K}))")
    return K, QuadElem._raw(c.a, c.b, K)


def escape_radius(abs_c: Fraction) -> Fraction:
    """Rational upper bound for ``(1 + sqrt(1 + 4*|c|)) / 2``."""
    return (1 + sqrt_upper(1 + 4 * abs_c)) / 2


def preper_bounds(K: int, c, max_box: Optional[int] = None) -> Union[Box, EmptyBounds]:
    """Search box for preperiodic points of f_c over K, or ``EmptyBounds``.

    ``max_box`` (when given) raises :class:`BoxTooLargeError` if the box
    holds more candidates than that.
    """
    K, c = _field_of(K, c)
    cs0, ct0 = _omega_coords(c, K)
    e = _lcm(cs0.denominator, ct0.denominator)
    if e > 1:
        from sympy import primefactors

        for p in primefactors(e):
            for v in prime_valuations(c, K, p):
                if v < 0 and v % 2:
                    return EmptyBounds(f"c has odd negative valuation {v} at a prime above {p}")
    m = _least_root_multiple(e)
    place_bounds = [escape_radius(b) for b in abs_bounds_per_place(c)]
    c_coords = (int(cs0 * m * m), int(ct0 * m * m))
    box = Box(K, c, m, place_bounds, c_coords)
    if max_box is not None:
        if 2 * box._tmax + 1 > max_box or box.cardinality(limit=max_box) > max_box:
            raise BoxTooLargeError(f"enumeration box for c = {c} over D = {K} exceeds {max_box} candidates")
    return box


# -- orbits ------------------------------------------------------------------


def _orbit_generic(c, x, step_cap: int) -> OrbitRecord:
    seen = {x: 0}
    traj = [x]
    cur = x
    for i in range(1, step_cap + 1):
        cur = cur * cur + c
        if cur in seen:
            n = seen[cur]
            return OrbitRecord(x, traj, PointType(i - n, n))
        seen[cur] = i
        traj.append(cur)
    return OrbitRecord(x, traj, None, "step_cap")


def orbit(c, x, step_cap: int = 10_000, K: Optional[int] = None) -> OrbitRecord:
    """Iterate f_c from ``x`` until a value repeats or the orbit provably escapes.

    Escape is detected exactly for elements of Q and Q(sqrt(D)): an iterate
    that leaves the preperiodicity box cannot be preperiodic.  For F_p
    elements every orbit cycles and only ``step_cap`` applies.
    """
    if isinstance(x, FpElem) or isinstance(c, FpElem):
        return _orbit_generic(c, x, step_cap)
    x, c = as_elem(x), as_elem(c)
    if K is None:
        K = x.D if x.b != 0 else c.D
    K, c = _field_of(K, c)
    if x.b != 0 and x.D != K:
        raise FieldError(f"x = {x} does not lie in Q(sqrt({K}))")
    x = QuadElem._raw(x.a, x.b, K)
    bounds = preper_bounds(K, c)
    if bounds.empty:
        return OrbitRecord(x, [x], None, "finite")
    box = bounds
    seen: dict[tuple[int, int], int] = {}
    traj = [x]
    pt = box.coords(x)
    if pt is None:
        return OrbitRecord(x, traj, None, "finite")
    for i in range(step_cap + 1):
        if not box.contains(*pt):
            return OrbitRecord(x, traj, None, "archimedean")
        if pt in seen:
            n = seen[pt]
            traj.pop()
            return OrbitRecord(x, traj, PointType(i - n, n))
        seen[pt] = i
        nxt = box.step(*pt)
        if nxt is None:
            traj.append(box.elem(*pt) * box.elem(*pt) + c)
            return OrbitRecord(x, traj, None, "finite")
        pt = nxt
        traj.append(box.elem(*pt))
    traj.pop()
    return OrbitRecord(x, traj, None, "step_cap")


# -- enumeration ---------------------------------------------------------------


def _classify_box(box: Box) -> dict[tuple[int, int], PointType]:
    """Types of all preperiodic box points, via one pass over the box's functional graph."""
    status: dict[tuple[int, int], Optional[PointType]] = {}
    for start in box.points():
        if start in status:
            continue
        path: list[tuple[int, int]] = []
        index: dict[tuple[int, int], int] = {}
        cur: Optional[tuple[int, int]] = start
        while True:
            if cur is None or not box.contains(*cur):
                for p in path:
                    status[p] = None
                break
            if cur in status:
                tail = status[cur]
                for p in reversed(path):
                    tail = None if tail is None else PointType(tail.period, tail.preperiod + 1)
                    status[p] = tail
                break
            if cur in index:
                k = index[cur]
                period = len(path) - k
                for p in path[k:]:
                    status[p] = PointType(period, 0)
                tail = PointType(period, 0)
                for p in reversed(path[:k]):
                    tail = PointType(period, tail.preperiod + 1)
                    status[p] = tail
                break
            index[cur] = len(path)
            path.append(cur)
            cur = box.step(*cur)
    return {p: t for p, t in status.items() if t is not None}


def preperiodic_points(K: int, c, max_box: int = DEFAULT_MAX_BOX) -> list[tuple[QuadElem, PointType]]:
    """All preperiodic points of f_c in K with their types, sorted by ``(a, b)``."""
    bounds = preper_bounds(K, c, max_box=max_box)
    if bounds.empty:
        return []
    box = bounds
    found = _classify_box(box)
    out = [(box.elem(s, t), pt) for (s, t), pt in found.items()]
    out.sort(key=lambda item: item[0].sort_key())
    return out


def preimages(c, beta, K: Optional[int] = None) -> list[QuadElem]:
    """The K-rational solutions of ``x**2 + c == beta`` (zero, one or two of them)."""
    beta, c = as_elem(beta), as_elem(c)
    diff = beta - c
    if K is None:
        K = diff.D
    if diff.b != 0 and diff.D != K:
        raise FieldError("beta - c does not lie in the requested field")
    root = sqrt_in_field(QuadElem._raw(diff.a, diff.b, K))
    if root is None:
        return []
    if not root:
        return [root]
    return [root, -root]


def preper_via_closure(K: int, c, max_box: int = DEFAULT_MAX_BOX) -> list[tuple[QuadElem, PointType]]:
    """Independent route: periodic points from the box, tails from backward closure."""
    K, c = _field_of(K, c)
    periodic = {x: pt for x, pt in preperiodic_points(K, c, max_box) if pt.preperiod == 0}
    found = dict(periodic)
    frontier = list(periodic)
    while frontier:
        beta = frontier.pop()
        bt = found[beta]
        for gamma in preimages(c, beta, K):
            if gamma in found:
                continue
            found[gamma] = PointType(bt.period, bt.preperiod + 1)
            frontier.append(gamma)
    out = [(QuadElem._raw(x.a, x.b, K), pt) for x, pt in found.items()]
    out.sort(key=lambda item: item[0].sort_key())
    return out


def build_graph(points: Sequence, c, types: Optional[dict] = None):
    """Functional graph of f_c on a forward-closed point set."""
    from .graphs import PreperGraph

    pts = [p[0] if isinstance(p, tuple) else p for p in points]
    if types is None:
        types = {p[0]: p[1] for p in points if isinstance(p, tuple)}
    index = {x: i for i, x in enumerate(pts)}
    succ = {}
    for x in pts:
        y = x * x + c
        if y not in index:
            raise GraphError(f"point set is not closed under f_c: f({x}) = {y} is missing")
        succ[index[x]] = index[y]
    return PreperGraph(
        vertices=list(range(len(pts))),
        succ=succ,
        labels={index[x]: x for x in pts},
        types={index[x]: t for x, t in types.items() if x in index},
    )


def graph_of(K: int, c, max_box: int = DEFAULT_MAX_BOX):
    """Convenience: the preperiodic graph of f_c over K."""
    K, c = _field_of(K, c)
    return build_graph(preperiodic_points(K, c, max_box), c)

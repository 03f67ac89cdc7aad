"""Parametrised families of quadratic maps with marked preperiodic points.

Each family maps parameters (a point on a moduli curve) to a value of ``c``
together with marked points of prescribed types, and back.  Forward maps
never trust the formulas: every marked point is iterated and its type is
compared with the claim, so a transcription slip in any coefficient shows
up as a :class:`ConsistencyError`.

Formulas are written against the plain ``+ - * /`` protocol, so parameters
may be rationals, :class:`QuadElem` values or :class:`FpElem` values.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import ConsistencyError, CuspError, OffCurveError, UsageError
from .fp import FpElem
from .preper import PointType, orbit
from .qfield import QuadElem, as_elem, sqrt_in_field, squarefree_kernel

HALF = Fraction(1, 2)


class FamilyId(str, Enum):
    PER1 = "PER1"
    PER2 = "PER2"
    PER3 = "PER3"
    PER4 = "PER4"
    PER12 = "PER12"
    PER13 = "PER13"
    PER23 = "PER23"
    PER33 = "PER33"
    PER14 = "PER14"
    PER34 = "PER34"
    PER123 = "PER123"
    G1 = "G1"
    G4P = "G4P"
    G5 = "G5"
    G6P = "G6P"
    G8P = "G8P"
    G10 = "G10"


@dataclass
class MarkedConfig:
    """A value of ``c`` with named marked points and their verified types."""

    family: FamilyId
    c: object
    points: dict
    types: dict = field(default_factory=dict)

    def f(self, x, n: int = 1):
        for _ in range(n):
            x = x * x + self.c
        return x


# -- shared polynomials ----------------------------------------------------------


def _f(x, c, n: int = 1):
    for _ in range(n):
        x = x * x + c
    return x


def per3_alpha(t):
    return (t**3 + 2 * t**2 + t + 1) / (2 * t * (t + 1))


def per3_c(t):
    return -(t**6 + 2 * t**5 + 4 * t**4 + 8 * t**3 + 9 * t**2 + 4 * t + 1) / (4 * t**2 * (t + 1) ** 2)


def per3_cycle(t) -> list:
    """The three cycle points written as rational functions of ``t``."""
    d = 2 * t * (t + 1)
    return [
        (t**3 + 2 * t**2 + t + 1) / d,
        (t**3 - t - 1) / d,
        -(t**3 + 2 * t**2 + 3 * t + 1) / d,
    ]


def per4_rhs(u):
    return -u * (u**2 + 1) * (u**2 - 2 * u - 1)


def per4_alpha(u, v):
    return (u - 1) / (2 * (u + 1)) + v / (2 * u * (u - 1))


def per4_c(u):
    return (u**2 - 4 * u - 1) * (u**4 + u**3 + 2 * u**2 - u + 1) / (4 * u * (u + 1) ** 2 * (u - 1) ** 2)


def per4_cycle(u, v) -> list:
    return [
        (u - 1) / (2 * (u + 1)) + v / (2 * u * (u - 1)),
        -(u + 1) / (2 * (u - 1)) + v / (2 * u * (u + 1)),
        (u - 1) / (2 * (u + 1)) - v / (2 * u * (u - 1)),
        -(u + 1) / (2 * (u - 1)) - v / (2 * u * (u + 1)),
    ]


def per4_inverse(alpha, c):
    a2 = _f(alpha, c, 2)
    u = -(a2 + alpha + 1) / (a2 + alpha - 1)
    v = u * (u - 1) * (2 * alpha * u + 2 * alpha - u + 1) / (u + 1)
    return u, v


def per12_c(q):
    return -(q**2 + 3) * (3 * q**2 + 1) / (4 * (q - 1) ** 2 * (q + 1) ** 2)


def per13_rhs(t):
    return t**6 + 2 * t**5 + 5 * t**4 + 10 * t**3 + 10 * t**2 + 4 * t + 1


def per23_rhs(t):
    return t**6 + 2 * t**5 + t**4 + 2 * t**3 + 6 * t**2 + 4 * t + 1


def per14_rhs(u):
    return -u * (u**6 - 4 * u**5 - 3 * u**4 - 8 * u**3 + 3 * u**2 - 4 * u - 1)


def per33_h(t, u):
    return (
        t * (t + 1) * u**3
        + (t**3 + 2 * t**2 - t - 1) * u**2
        + (t**3 - t**2 - 4 * t - 1) * u
        - t * (t + 1)
    )


def per34_relation(t, u):
    """Vanishes exactly when the period-3 and period-4 values of ``c`` agree (denominators cleared)."""
    return -(t**6 + 2 * t**5 + 4 * t**4 + 8 * t**3 + 9 * t**2 + 4 * t + 1) * u * (u + 1) ** 2 * (u - 1) ** 2 - (
        u**2 - 4 * u - 1
    ) * (u**4 + u**3 + 2 * u**2 - u + 1) * t**2 * (t + 1) ** 2


def g8_rhs(t, y):
    return t**6 + 2 * t**5 + 2 * t**4 + 4 * t**3 + 7 * t**2 + 4 * t + 1 - 2 * t * (t + 1) * y


def g10_rhs(t, y):
    return t**6 + 2 * t**5 + 6 * t**4 + 12 * t**3 + 11 * t**2 + 4 * t + 1 - 2 * t * (t + 1) * y


# -- family table ------------------------------------------------------------------


@dataclass(frozen=True)
class Family:
    id: FamilyId
    params: tuple
    equations: tuple  # (description, residual function)
    cusps: tuple  # (factor name, function)
    marked: tuple  # (name, type)
    forward: Callable
    inverse: Callable
    genus: Optional[int] = None
    disjoint: tuple = ()  # pairs of marked points whose orbits never meet
    description: str = ""


def _t_cusps():
    return (
        ("t", lambda p: p[0]),
        ("t+1", lambda p: p[0] + 1),
        ("t^2+t+1", lambda p: p[0] ** 2 + p[0] + 1),
    )


def _fw_per1(p):
    (r,) = p
    return 1 / Fraction(4) - r * r, {"alpha": HALF + r, "alpha'": HALF - r}


def _inv_per1(cfg):
    return (cfg.points["alpha"] - HALF,)


def _fw_per2(p):
    (s,) = p
    return -Fraction(3, 4) - s * s, {"alpha": -HALF + s}


def _inv_per2(cfg):
    return (cfg.points["alpha"] + HALF,)


def _fw_per3(p):
    (t,) = p
    return per3_c(t), {"alpha": per3_alpha(t)}


def _inv_per3(cfg):
    a = cfg.points["alpha"]
    return (a + cfg.f(a),)


def _fw_per4(p):
    u, v = p
    return per4_c(u), {"alpha": per4_alpha(u, v)}


def _inv_per4(cfg):
    return per4_inverse(cfg.points["alpha"], cfg.c)


def _fw_per12(p):
    (q,) = p
    r = -(q**2 + 1) / ((q - 1) * (q + 1))
    s = 2 * q / ((q - 1) * (q + 1))
    return per12_c(q), {"alpha": HALF + r, "beta": -HALF + s}


def _inv_per12(cfg):
    r = cfg.points["alpha"] - HALF
    s = cfg.points["beta"] + HALF
    return ((1 - r) / s,)


def _fw_per13(p):
    t, y = p
    return per3_c(t), {"alpha": (t**2 + t + y) / (2 * t * (t + 1)), "beta": per3_alpha(t)}


def _inv_per13(cfg):
    b = cfg.points["beta"]
    t = b + cfg.f(b)
    return (t, (2 * cfg.points["alpha"] - 1) * t * (t + 1))


def _fw_per23(p):
    t, z = p
    return per3_c(t), {"alpha": -(t**2 + t - z) / (2 * t * (t + 1)), "beta": per3_alpha(t)}


def _inv_per23(cfg):
    b = cfg.points["beta"]
    t = b + cfg.f(b)
    return (t, (2 * cfg.points["alpha"] + 1) * t * (t + 1))


def _fw_per33(p):
    t, u = p
    return per3_c(t), {"alpha": per3_alpha(t), "beta": per3_alpha(u)}


def _inv_per33(cfg):
    a, b = cfg.points["alpha"], cfg.points["beta"]
    return (a + cfg.f(a), b + cfg.f(b))


def _fw_per14(p):
    u, v, w = p
    return per4_c(u), {"alpha": HALF + w / (2 * u * (u - 1) * (u + 1)), "beta": per4_alpha(u, v)}


def _inv_per14(cfg):
    u, v = per4_inverse(cfg.points["beta"], cfg.c)
    return (u, v, u * (u - 1) * (u + 1) * (2 * cfg.points["alpha"] - 1))


def _fw_per34(p):
    t, u, v = p
    return per3_c(t), {"alpha": per3_alpha(t), "beta": per4_alpha(u, v)}


def _inv_per34(cfg):
    a = cfg.points["alpha"]
    u, v = per4_inverse(cfg.points["beta"], cfg.c)
    return (a + cfg.f(a), u, v)


def _fw_per123(p):
    t, y, z = p
    d = 2 * t * (t + 1)
    return per3_c(t), {
        "alpha1": (t**2 + t + y) / d,
        "alpha2": -(t**2 + t - z) / d,
        "alpha3": per3_alpha(t),
    }


def _inv_per123(cfg):
    a3 = cfg.points["alpha3"]
    t = a3 + cfg.f(a3)
    return (t, (2 * cfg.points["alpha1"] - 1) * t * (t + 1), (2 * cfg.points["alpha2"] + 1) * t * (t + 1))


def _fw_g1(p):
    x, y, z = p
    d = (x - 1) * (x + 1)
    return -2 * (x**2 + 1) / d**2, {"alpha": z / d, "beta": y / d}


def _inv_g1(cfg):
    a = cfg.points["alpha"]
    x = -cfg.f(a) / cfg.f(a, 2)
    return (x, cfg.points["beta"] * (x * x - 1), a * (x * x - 1))


def _fw_g4(p):
    x, y, z = p
    d = (x - 1) * (x + 1)
    c = -(x**4 + 2 * x**3 + 2 * x**2 - 2 * x + 1) / d**2
    return c, {"alpha": (x * x - 1 + z) / (2 * d), "beta": y / d}


def _inv_g4(cfg):
    b = cfg.points["beta"]
    x = (cfg.f(b) - 1) / cfg.f(b, 2)
    return (x, b * (x * x - 1), (2 * cfg.points["alpha"] - 1) * (x - 1) * (x + 1))


def _fw_g5(p):
    x, y, z = p
    d = 2 * (x * x - 1)
    c = -(x**2 + 3) * (3 * x**2 + 1) / (4 * (x - 1) ** 2 * (x + 1) ** 2)
    return c, {"alpha1": y / d, "alpha2": z / d, "beta": -(x**2 - 4 * x - 1) / d}


def _inv_g5(cfg):
    a1 = cfg.points["alpha1"]
    x = (2 * cfg.f(a1) + 3) / (2 * cfg.points["beta"] + 1)
    return (x, 2 * a1 * (x * x - 1), 2 * cfg.points["alpha2"] * (x * x - 1))


def _fw_g6(p):
    q, y, z = p
    d = 2 * (q * q - 1)
    return per12_c(q), {"alpha": y / d, "beta": z / d}


def _inv_g6(cfg):
    a, b = cfg.points["alpha"], cfg.points["beta"]
    q = -(3 + 2 * cfg.f(a)) / (1 + 2 * cfg.f(b, 2))
    return (q, 2 * a * (q * q - 1), 2 * b * (q * q - 1))


def _fw_g8(p):
    t, y, z = p
    return per3_c(t), {"alpha": z / (2 * t * (t + 1)), "beta": per3_alpha(t)}


def _inv_g8(cfg):
    b = cfg.points["beta"]
    t = b + cfg.f(b)
    a = cfg.points["alpha"]
    return (t, -t * (t + 1) * (2 * cfg.f(a) + 1), 2 * t * (t + 1) * a)


def _fw_g10(p):
    t, y, z = p
    return per3_c(t), {"alpha": z / (2 * t * (t + 1)), "beta": per3_alpha(t)}


def _inv_g10(cfg):
    b = cfg.points["beta"]
    t = b + cfg.f(b)
    a = cfg.points["alpha"]
    return (t, -t * (t + 1) * (2 * cfg.f(a) - 1), 2 * t * (t + 1) * a)


def _pt(s: str) -> PointType:
    return PointType.parse(s)


FAMILIES: dict[FamilyId, Family] = {}


def _register(fam: Family) -> None:
    FAMILIES[fam.id] = fam


_register(Family(
    FamilyId.PER1, ("r",), (), (("r", lambda p: p[0]),),
    (("alpha", _pt("1_0")), ("alpha'", _pt("1_0"))), _fw_per1, _inv_per1, 0,
    description="two distinct fixed points",
))
_register(Family(
    FamilyId.PER2, ("s",), (), (("s", lambda p: p[0]),),
    (("alpha", _pt("2_0")),), _fw_per2, _inv_per2, 0,
    description="a point of period 2",
))
_register(Family(
    FamilyId.PER3, ("t",), (), _t_cusps(),
    (("alpha", _pt("3_0")),), _fw_per3, _inv_per3, 0,
    description="a point of period 3",
))
_register(Family(
    FamilyId.PER4, ("u", "v"),
    (("v^2 = -u(u^2+1)(u^2-2u-1)", lambda p: p[1] ** 2 - per4_rhs(p[0])),),
    (("v", lambda p: p[1]), ("u-1", lambda p: p[0] - 1), ("u+1", lambda p: p[0] + 1)),
    (("alpha", _pt("4_0")),), _fw_per4, _inv_per4, 2,
    description="a point of period 4",
))
_register(Family(
    FamilyId.PER12, ("q",), (),
    (("q", lambda p: p[0]), ("q-1", lambda p: p[0] - 1), ("q+1", lambda p: p[0] + 1)),
    (("alpha", _pt("1_0")), ("beta", _pt("2_0"))), _fw_per12, _inv_per12, 0,
    description="a fixed point and a point of period 2",
))
_register(Family(
    FamilyId.PER13, ("t", "y"),
    (("y^2 = t^6+2t^5+5t^4+10t^3+10t^2+4t+1", lambda p: p[1] ** 2 - per13_rhs(p[0])),),
    _t_cusps(), (("alpha", _pt("1_0")), ("beta", _pt("3_0"))), _fw_per13, _inv_per13, 2,
    description="a fixed point and a point of period 3",
))
_register(Family(
    FamilyId.PER23, ("t", "z"),
    (("z^2 = t^6+2t^5+t^4+2t^3+6t^2+4t+1", lambda p: p[1] ** 2 - per23_rhs(p[0])),),
    _t_cusps() + (("z", lambda p: p[1]),),
    (("alpha", _pt("2_0")), ("beta", _pt("3_0"))), _fw_per23, _inv_per23, 2,
    description="points of periods 2 and 3",
))
_register(Family(
    FamilyId.PER33, ("t", "u"),
    (("h(t,u) = 0", lambda p: per33_h(p[0], p[1])),),
    _t_cusps() + (
        ("u^2+u+1", lambda p: p[1] ** 2 + p[1] + 1),
        ("u^3+u^2-2u-1", lambda p: p[1] ** 3 + p[1] ** 2 - 2 * p[1] - 1),
    ),
    (("alpha", _pt("3_0")), ("beta", _pt("3_0"))), _fw_per33, _inv_per33, 4,
    disjoint=(("alpha", "beta"),),
    description="points on two different 3-cycles",
))
_register(Family(
    FamilyId.PER14, ("u", "v", "w"),
    (
        ("v^2 = -u(u^2+1)(u^2-2u-1)", lambda p: p[1] ** 2 - per4_rhs(p[0])),
        ("w^2 = -u(u^6-4u^5-3u^4-8u^3+3u^2-4u-1)", lambda p: p[2] ** 2 - per14_rhs(p[0])),
    ),
    (("v", lambda p: p[1]), ("u-1", lambda p: p[0] - 1), ("u+1", lambda p: p[0] + 1)),
    (("alpha", _pt("1_0")), ("beta", _pt("4_0"))), _fw_per14, _inv_per14, 9,
    description="a fixed point and a point of period 4",
))
_register(Family(
    FamilyId.PER34, ("t", "u", "v"),
    (
        ("period-3 c = period-4 c", lambda p: per34_relation(p[0], p[1])),
        ("v^2 = -u(u^2+1)(u^2-2u-1)", lambda p: p[2] ** 2 - per4_rhs(p[1])),
    ),
    _t_cusps() + (
        ("u-1", lambda p: p[1] - 1), ("u+1", lambda p: p[1] + 1), ("v", lambda p: p[2]),
    ),
    (("alpha", _pt("3_0")), ("beta", _pt("4_0"))), _fw_per34, _inv_per34, 49,
    description="points of periods 3 and 4",
))
_register(Family(
    FamilyId.PER123, ("t", "y", "z"),
    (
        ("y^2 = t^6+2t^5+5t^4+10t^3+10t^2+4t+1", lambda p: p[1] ** 2 - per13_rhs(p[0])),
        ("z^2 = t^6+2t^5+t^4+2t^3+6t^2+4t+1", lambda p: p[2] ** 2 - per23_rhs(p[0])),
    ),
    _t_cusps() + (("z", lambda p: p[2]),),
    (("alpha1", _pt("1_0")), ("alpha2", _pt("2_0")), ("alpha3", _pt("3_0"))),
    _fw_per123, _inv_per123, 9,
    description="points of periods 1, 2 and 3",
))
_register(Family(
    FamilyId.G1, ("x", "y", "z"),
    (
        ("y^2 = -(x^2-3)(x^2+1)", lambda p: p[1] ** 2 + (p[0] ** 2 - 3) * (p[0] ** 2 + 1)),
        ("z^2 = -2(x^3-x^2-x-1)", lambda p: p[2] ** 2 + 2 * (p[0] ** 3 - p[0] ** 2 - p[0] - 1)),
    ),
    (
        ("x-1", lambda p: p[0] - 1), ("x+1", lambda p: p[0] + 1),
        ("x^2+1", lambda p: p[0] ** 2 + 1), ("x^2+3", lambda p: p[0] ** 2 + 3),
    ),
    (("alpha", _pt("1_3")), ("beta", _pt("1_2"))), _fw_g1, _inv_g1, 5,
    disjoint=(("alpha", "beta"),),
    description="points of types 1_3 and 1_2 over different fixed points",
))
_register(Family(
    FamilyId.G4P, ("x", "y", "z"),
    (
        ("y^2 = 2(x^3+x^2-x+1)", lambda p: p[1] ** 2 - 2 * (p[0] ** 3 + p[0] ** 2 - p[0] + 1)),
        ("z^2 = 5x^4+8x^3+6x^2-8x+5",
         lambda p: p[2] ** 2 - (5 * p[0] ** 4 + 8 * p[0] ** 3 + 6 * p[0] ** 2 - 8 * p[0] + 5)),
    ),
    (
        ("x", lambda p: p[0]), ("x-1", lambda p: p[0] - 1), ("x+1", lambda p: p[0] + 1),
        ("x^2+4x-1", lambda p: p[0] ** 2 + 4 * p[0] - 1),
    ),
    (("alpha", _pt("1_0")), ("beta", _pt("2_3"))), _fw_g4, _inv_g4, 5,
    description="a fixed point and a point of type 2_3",
))
_register(Family(
    FamilyId.G5, ("x", "y", "z"),
    (
        ("y^2 = (5x^2-1)(x^2+3)", lambda p: p[1] ** 2 - (5 * p[0] ** 2 - 1) * (p[0] ** 2 + 3)),
        ("z^2 = -(3x^2+1)(x^2-5)", lambda p: p[2] ** 2 + (3 * p[0] ** 2 + 1) * (p[0] ** 2 - 5)),
    ),
    (
        ("x", lambda p: p[0]), ("x-1", lambda p: p[0] - 1), ("x+1", lambda p: p[0] + 1),
        ("x^2+1", lambda p: p[0] ** 2 + 1), ("x^2+3", lambda p: p[0] ** 2 + 3),
        ("3x^2+1", lambda p: 3 * p[0] ** 2 + 1),
    ),
    (("alpha1", _pt("1_2")), ("alpha2", _pt("1_2")), ("beta", _pt("2_0"))), _fw_g5, _inv_g5, 5,
    disjoint=(("alpha1", "alpha2"),),
    description="two type 1_2 points over different fixed points and a point of period 2",
))
_register(Family(
    FamilyId.G6P, ("q", "y", "z"),
    (
        ("y^2 = (5q^2-1)(q^2+3)", lambda p: p[1] ** 2 - (5 * p[0] ** 2 - 1) * (p[0] ** 2 + 3)),
        ("z^2 = 5q^4-8q^3+6q^2+8q+5",
         lambda p: p[2] ** 2 - (5 * p[0] ** 4 - 8 * p[0] ** 3 + 6 * p[0] ** 2 + 8 * p[0] + 5)),
    ),
    (
        ("q", lambda p: p[0]), ("q-1", lambda p: p[0] - 1), ("q+1", lambda p: p[0] + 1),
        ("q^2+3", lambda p: p[0] ** 2 + 3), ("q^2-4q-1", lambda p: p[0] ** 2 - 4 * p[0] - 1),
    ),
    (("alpha", _pt("1_2")), ("beta", _pt("2_2"))), _fw_g6, _inv_g6, 5,
    description="points of types 1_2 and 2_2",
))
_register(Family(
    FamilyId.G8P, ("t", "y", "z"),
    (
        ("y^2 = t^6+2t^5+5t^4+10t^3+10t^2+4t+1", lambda p: p[1] ** 2 - per13_rhs(p[0])),
        ("z^2 = t^6+2t^5+2t^4+4t^3+7t^2+4t+1-2t(t+1)y", lambda p: p[2] ** 2 - g8_rhs(p[0], p[1])),
    ),
    _t_cusps() + (("y+t^2+t", lambda p: p[1] + p[0] ** 2 + p[0]),),
    (("alpha", _pt("1_2")), ("beta", _pt("3_0"))), _fw_g8, _inv_g8, 9,
    description="a point of type 1_2 and a point of period 3",
))
_register(Family(
    FamilyId.G10, ("t", "y", "z"),
    (
        ("y^2 = t^6+2t^5+t^4+2t^3+6t^2+4t+1", lambda p: p[1] ** 2 - per23_rhs(p[0])),
        ("z^2 = t^6+2t^5+6t^4+12t^3+11t^2+4t+1-2t(t+1)y", lambda p: p[2] ** 2 - g10_rhs(p[0], p[1])),
    ),
    _t_cusps() + (("y", lambda p: p[1]), ("y-t^2-t", lambda p: p[1] - p[0] ** 2 - p[0])),
    (("alpha", _pt("2_2")), ("beta", _pt("3_0"))), _fw_g10, _inv_g10, 9,
    description="a point of type 2_2 and a point of period 3",
))


def get_family(fid) -> Family:
    try:
        return FAMILIES[FamilyId(fid)]
    except ValueError:
        raise UsageError(f"unknown family {fid!r}; known: {', '.join(f.value for f in FamilyId)}") from None


def check_parameters(fid, params: Sequence) -> None:
    """Raise :class:`OffCurveError` or :class:`CuspError` for unusable parameters."""
    fam = get_family(fid)
    if len(params) != len(fam.params):
        raise UsageError(f"{fam.id.value} takes parameters ({', '.join(fam.params)})")
    for desc, residual in fam.equations:
        if residual(params) != 0:
            raise OffCurveError(f"{fam.id.value}: parameters do not satisfy {desc}")
    for name, factor in fam.cusps:
        if factor(params) == 0:
            raise CuspError(name)


def _orbit_set(c, x, period: int, preperiod: int) -> list:
    out = [x]
    for _ in range(period + preperiod - 1):
        x = x * x + c
        out.append(x)
    return out


def family_forward(fid, params: Sequence, step_cap: int = 64) -> MarkedConfig:
    """Map parameters to ``c`` and marked points, verifying every claimed type."""
    fam = get_family(fid)
    params = tuple(params)
    check_parameters(fam.id, params)
    try:
        c, points = fam.forward(params)
    except ZeroDivisionError as exc:
        raise CuspError("denominator", f"{fam.id.value}: a denominator vanishes at these parameters") from exc
    types = {}
    for name, expected in fam.marked:
        rec = orbit(c, points[name], step_cap=step_cap)
        if rec.type != expected:
            got = "escaping" if rec.type is None else str(rec.type)
            raise ConsistencyError(f"{fam.id.value}: {name} should have type {expected}, found {got}")
        types[name] = rec.type
    for a, b in fam.disjoint:
        ta, tb = types[a], types[b]
        oa = set(_orbit_set(c, points[a], ta.period, ta.preperiod))
        ob = set(_orbit_set(c, points[b], tb.period, tb.preperiod))
        if oa & ob:
            raise ConsistencyError(f"{fam.id.value}: orbits of {a} and {b} meet")
    return MarkedConfig(fam.id, c, points, types)


def family_inverse(fid, config: MarkedConfig) -> tuple:
    """Recover the parameters from ``c`` and the marked points."""
    fam = get_family(fid)
    try:
        return tuple(fam.inverse(config))
    except ZeroDivisionError as exc:
        raise CuspError("denominator", f"{fam.id.value}: inverse map undefined for this configuration") from exc


def roundtrip(fid, params: Sequence) -> bool:
    cfg = family_forward(fid, params)
    return family_inverse(fid, cfg) == tuple(params)


# -- automorphisms and quotients ---------------------------------------------------


class AutoId(str, Enum):
    SIGMA3_T = "SIGMA3_T"
    SIGMA4_UV = "SIGMA4_UV"
    SIGMA33 = "SIGMA33"
    SIGMA6_12AND3 = "SIGMA6_12AND3"
    AUTO_C3 = "AUTO_C3"
    AUTO_C4 = "AUTO_C4"


def _sigma3(t):
    return -(t + 1) / t


_AUTOS: dict[AutoId, tuple[Callable, int]] = {
    AutoId.SIGMA3_T: (lambda p: (_sigma3(p[0]),), 3),
    AutoId.SIGMA4_UV: (lambda p: (-1 / p[0], p[1] / p[0] ** 3), 4),
    AutoId.SIGMA33: (lambda p: (_sigma3(p[0]), -1 / (p[1] + 1)), 3),
    AutoId.SIGMA6_12AND3: (lambda p: (_sigma3(p[0]), -p[1] / p[0] ** 6), 6),
    AutoId.AUTO_C3: (lambda p: (-1 / p[0], p[1] / p[0] ** 4), 2),
    AutoId.AUTO_C4: (lambda p: (-1 / p[0], p[1] / p[0] ** 5), 4),
}


def curve_automorphism(aid, point: Sequence) -> tuple:
    fn, _ = _AUTOS[AutoId(aid)]
    try:
        return tuple(fn(tuple(point)))
    except ZeroDivisionError as exc:
        raise CuspError("pole", f"{AutoId(aid).value} has a pole at {tuple(point)}") from exc


def automorphism_order(aid) -> int:
    return _AUTOS[AutoId(aid)][1]


def x034_quotient(t, u) -> tuple:
    """Invariants ``(T, U)`` of the period-3 and period-4 symmetries."""
    return (t**3 - 3 * t - 1) / (t * (t + 1)), (u - 1) * (u + 1) / u


def x034_quotient_relation(T, U):
    """Vanishes on the quotient curve."""
    return -(T**2 + 2 * T + 8) * U**2 - (U**2 + U + 4) * (U - 4)


def x034_to_elliptic(T, U) -> tuple:
    """Birational map from the quotient curve to ``y^2 + y = x^3 - x^2``."""
    return -U / 4, -(T * U + U + 4) / 8


def elliptic_to_x034(x, y) -> tuple:
    return -(x - 2 * y - 1) / x, -4 * x


def per33_invariants(t, u) -> tuple:
    """``(w, x)``: sums over the order-3 symmetry orbit of ``t`` and of ``t*u``."""
    s = lambda a: -(a + 1) / a  # noqa: E731
    su = lambda b: -1 / (b + 1)  # noqa: E731
    t1, u1 = s(t), su(u)
    t2, u2 = s(t1), su(u1)
    return t + t1 + t2, t * u + t1 * u1 + t2 * u2


def per33_c_from_invariant(x):
    return (x**3 - 8 * x**2 + 19 * x - 13) / (4 * (x - 2) * (x - 3))


def per33_quotient_relation(w, x):
    """Vanishes on the quotient of the period-(3,3) curve."""
    return (w + 1) ** 2 * (x - 2) * (x - 3) + (x**3 - x**2 - 16 * x + 29)


# -- parameter sampling ------------------------------------------------------------

# Families whose curves have easily written points over quadratic fields.
QUADRATIC_SAMPLED = frozenset({
    FamilyId.PER1, FamilyId.PER2, FamilyId.PER3, FamilyId.PER12,
    FamilyId.PER4, FamilyId.PER13, FamilyId.PER23,
})
DEFAULT_SAMPLE_PRIME = 10007

_PER3_NUMERATOR = (1, 4, 9, 8, 4, 2, 1)


def _fp_roots(coeffs: Sequence[int], p: int) -> list[int]:
    """Roots in F_p of an integer polynomial (lowest degree first), by evaluating everywhere."""
    xs = np.arange(p, dtype=np.int64)
    acc = np.zeros(p, dtype=np.int64)
    for c in reversed(coeffs):
        acc = (acc * xs + c) % p
    return np.nonzero(acc == 0)[0].tolist()


def _random_quadratic(rng: random.Random, D: int, height: int) -> QuadElem:
    a = Fraction(rng.randint(-height, height), rng.randint(1, height))
    b = Fraction(rng.randint(-height, height), rng.randint(1, height))
    return QuadElem(a, b, D)


def _draw_quadratic(fid: FamilyId, rng: random.Random, height: int) -> Optional[tuple]:
    if fid in (FamilyId.PER1, FamilyId.PER2, FamilyId.PER3, FamilyId.PER12):
        D = rng.choice([d for d in range(-30, 31) if d not in (0, 1) and squarefree_kernel(d) == d])
        return (_random_quadratic(rng, D, height),)
    x = Fraction(rng.randint(-height, height), rng.randint(1, height))
    rhs = {FamilyId.PER4: per4_rhs, FamilyId.PER13: per13_rhs, FamilyId.PER23: per23_rhs}[fid](x)
    if rhs == 0:
        return None
    D = squarefree_kernel(rhs.numerator * rhs.denominator)
    y = sqrt_in_field(as_elem(rhs, D))
    return as_elem(x, D), (y if rng.random() < 0.5 else -y)


def _draw_fp(fid: FamilyId, rng: random.Random, p: int) -> Optional[tuple]:
    E = lambda v: FpElem(v, p)  # noqa: E731
    x = E(rng.randrange(p))

    def sq(val):
        root = val.sqrt()
        if root is None:
            return None
        return root if rng.random() < 0.5 else -root

    if fid in (FamilyId.PER1, FamilyId.PER2, FamilyId.PER3, FamilyId.PER12):
        return (x,)
    if fid in (FamilyId.PER4, FamilyId.PER13, FamilyId.PER23):
        y = sq({FamilyId.PER4: per4_rhs, FamilyId.PER13: per13_rhs, FamilyId.PER23: per23_rhs}[fid](x))
        return None if y is None else (x, y)
    if fid is FamilyId.PER33:
        t = x.v
        roots = _fp_roots([-t * (t + 1), t**3 - t**2 - 4 * t - 1, t**3 + 2 * t**2 - t - 1, t * (t + 1)], p)
        return (x, E(rng.choice(roots))) if roots else None
    if fid is FamilyId.PER14:
        v, w = sq(per4_rhs(x)), sq(per14_rhs(x))
        return None if v is None or w is None else (x, v, w)
    if fid is FamilyId.PER34:
        v = sq(per4_rhs(x))
        if v is None:
            return None
        U = (x * (x + 1) ** 2 * (x - 1) ** 2).v
        B = ((x**2 - 4 * x - 1) * (x**4 + x**3 + 2 * x**2 - x + 1)).v
        coeffs = [-U * a for a in _PER3_NUMERATOR]
        for k, b in ((2, 1), (3, 2), (4, 1)):
            coeffs[k] -= B * b
        roots = [r for r in _fp_roots(coeffs, p) if r]
        return (E(rng.choice(roots)), x, v) if roots else None
    if fid is FamilyId.PER123:
        y, z = sq(per13_rhs(x)), sq(per23_rhs(x))
        return None if y is None or z is None else (x, y, z)
    pair = {
        FamilyId.G1: (lambda t: -(t**2 - 3) * (t**2 + 1), lambda t: -2 * (t**3 - t**2 - t - 1)),
        FamilyId.G4P: (lambda t: 2 * (t**3 + t**2 - t + 1), lambda t: 5 * t**4 + 8 * t**3 + 6 * t**2 - 8 * t + 5),
        FamilyId.G5: (lambda t: (5 * t**2 - 1) * (t**2 + 3), lambda t: -(3 * t**2 + 1) * (t**2 - 5)),
        FamilyId.G6P: (lambda t: (5 * t**2 - 1) * (t**2 + 3), lambda t: 5 * t**4 - 8 * t**3 + 6 * t**2 + 8 * t + 5),
    }
    if fid in pair:
        y, z = sq(pair[fid][0](x)), sq(pair[fid][1](x))
        return None if y is None or z is None else (x, y, z)
    base, top = (per13_rhs, g8_rhs) if fid is FamilyId.G8P else (per23_rhs, g10_rhs)
    y = sq(base(x))
    if y is None:
        return None
    z = sq(top(x, y))
    return None if z is None else (x, y, z)


def sample_parameters(fid, rng: random.Random, p: Optional[int] = None, height: int = 30,
                      attempts: int = 10_000) -> tuple:
    """A random parameter tuple on the family's curve, away from its cusps.

    With ``p`` unset, the families in :data:`QUADRATIC_SAMPLED` draw from
    quadratic fields (obvious points for the curves) and the rest fall back
    to F_p with the default prime.
    """
    fam = get_family(fid)
    if p is None and fam.id not in QUADRATIC_SAMPLED:
        p = DEFAULT_SAMPLE_PRIME
    for _ in range(attempts):
        params = _draw_quadratic(fam.id, rng, height) if p is None else _draw_fp(fam.id, rng, p)
        if params is None:
            continue
        try:
            check_parameters(fam.id, params)
            fam.forward(params)
        except (CuspError, ZeroDivisionError):
            continue
        return params
    raise UsageError(f"no valid parameters for {fam.id.value} after {attempts} attempts")

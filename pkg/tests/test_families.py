import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quadpreper.errors import CuspError, OffCurveError, UsageError
from quadpreper.families import (
    FAMILIES,
    AutoId,
    FamilyId,
    automorphism_order,
    check_parameters,
    curve_automorphism,
    elliptic_to_x034,
    family_forward,
    family_inverse,
    get_family,
    per3_c,
    per33_c_from_invariant,
    per33_invariants,
    roundtrip,
    sample_parameters,
    x034_quotient,
    x034_quotient_relation,
    x034_to_elliptic,
)
from quadpreper.preper import PointType, orbit
from quadpreper.qfield import QuadElem


def test_all_families_registered():
    assert set(FAMILIES) == set(FamilyId)
    assert len(FAMILIES) == 17


@pytest.mark.parametrize("fid", list(FamilyId))
def test_roundtrip_on_samples(fid):
    rng = random.Random(f"roundtrip-{fid.value}")
    for _ in range(100):
        params = sample_parameters(fid, rng)
        assert roundtrip(fid, params)


def test_per3_at_one():
    cfg = family_forward("PER3", (Fraction(1),))
    assert cfg.c == Fraction(-29, 16)
    assert cfg.points["alpha"] == Fraction(5, 4)
    assert [cfg.f(cfg.points["alpha"], k) for k in (1, 2)] == [Fraction(-1, 4), Fraction(-7, 4)]
    assert orbit(cfg.c, cfg.points["alpha"]).type == PointType(3, 0)
    assert per3_c(Fraction(1)) == Fraction(-29, 16)


def test_per2_quadratic_parameter():
    s = QuadElem(Fraction(1, 3), Fraction(2), -5)
    cfg = family_forward("PER2", (s,))
    assert cfg.types["alpha"] == PointType(2, 0)
    assert family_inverse("PER2", cfg) == (s,)


@pytest.mark.parametrize("fid, params", [("PER3", (0,)), ("PER3", (-1,)), ("PER1", (0,)), ("PER12", (1,))])
def test_cusps_rejected(fid, params):
    with pytest.raises(CuspError):
        family_forward(fid, tuple(Fraction(p) for p in params))


def test_off_curve_rejected():
    with pytest.raises(OffCurveError):
        check_parameters("PER4", (Fraction(2), Fraction(1)))


def test_wrong_arity_and_unknown_family():
    with pytest.raises(UsageError):
        check_parameters("PER3", (Fraction(1), Fraction(2)))
    with pytest.raises(UsageError):
        get_family("PER99")


def _g4_with_printed_division(cfg):
    # the alternative inverse where the last coordinate divides by (x-1)(x+1)
    b = cfg.points["beta"]
    x = (cfg.f(b) - 1) / cfg.f(b, 2)
    return (x, b * (x * x - 1), (2 * cfg.points["alpha"] - 1) / ((x - 1) * (x + 1)))


def test_g4_inverse_must_multiply():
    rng = random.Random(11)
    misses = 0
    for _ in range(20):
        params = sample_parameters("G4P", rng)
        cfg = family_forward("G4P", params)
        assert family_inverse("G4P", cfg) == tuple(params)
        misses += _g4_with_printed_division(cfg) != tuple(params)
    assert misses == 20


@pytest.mark.parametrize("aid", list(AutoId))
def test_automorphism_orders(aid):
    point = {
        AutoId.SIGMA3_T: (Fraction(2, 7),),
        AutoId.SIGMA33: (Fraction(2, 7), Fraction(3, 5)),
    }.get(aid, (Fraction(2, 7), Fraction(3, 5)))
    p = point
    for _ in range(automorphism_order(aid)):
        p = curve_automorphism(aid, p)
    assert p == point
    if automorphism_order(aid) > 1:
        assert curve_automorphism(aid, point) != point


def test_automorphism_pole():
    with pytest.raises(CuspError):
        curve_automorphism(AutoId.SIGMA3_T, (Fraction(0),))


def test_sigma3_preserves_per3_c():
    t = Fraction(5, 3)
    (s,) = curve_automorphism(AutoId.SIGMA3_T, (t,))
    assert per3_c(s) == per3_c(t)


def test_elliptic_map_inverse():
    for x, y in [(Fraction(1), Fraction(0)), (Fraction(1), Fraction(-1)), (Fraction(3, 4), Fraction(5, 7))]:
        T, U = elliptic_to_x034(x, y)
        assert x034_to_elliptic(T, U) == (x, y)


@settings(max_examples=50, deadline=None)
@given(st.builds(Fraction, st.integers(-50, 50), st.integers(1, 20)))
def test_per33_invariant_formula(t):
    rng = random.Random(int(t.numerator * 997 + t.denominator))
    params = sample_parameters("PER33", rng, p=10007)
    tt, u = params
    w, x = per33_invariants(tt, u)
    if (x - 2) * (x - 3) != 0:
        cfg = family_forward("PER33", params)
        assert per33_c_from_invariant(x) == cfg.c

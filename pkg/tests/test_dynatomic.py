from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from quadpreper.dynatomic import (
    BivarPoly,
    divisors,
    dnrn,
    dynatomic_poly,
    eval_dynatomic,
    iterate_poly,
    max_cycles,
    mobius,
    parse_bivar,
)
from quadpreper.errors import LimitError
from quadpreper.qfield import QuadElem

TABLE = {1: (2, 2), 2: (2, 1), 3: (6, 2), 4: (12, 3), 5: (30, 6), 6: (54, 9), 7: (126, 18), 8: (240, 30)}


def test_mobius_and_divisors():
    assert [mobius(n) for n in range(1, 11)] == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1]
    assert divisors(12) == [1, 2, 3, 4, 6, 12]


def test_small_dynatomic_polys():
    x, c = BivarPoly.x(), BivarPoly.c()
    assert dynatomic_poly(1) == x * x - x + c
    assert dynatomic_poly(2) == x * x + x + c + BivarPoly.const(1)


@pytest.mark.parametrize("N", range(1, 9))
def test_degree_and_cycle_cap(N):
    assert dnrn(N) == TABLE[N]
    assert dynatomic_poly(N).deg_x() == TABLE[N][0]
    assert max_cycles(N) == TABLE[N][1]


@pytest.mark.parametrize("N", range(1, 6))
def test_divisor_product_identity(N):
    prod = BivarPoly.const(1)
    for n in divisors(N):
        prod = prod * dynatomic_poly(n)
    assert prod == iterate_poly(N) - BivarPoly.x()


def test_period_three_point_is_root():
    assert eval_dynatomic(3, Fraction(5, 4), Fraction(-29, 16)) == 0
    assert eval_dynatomic(3, Fraction(1, 2), Fraction(-29, 16)) != 0


def test_two_cycle_over_quadratic_field():
    c = QuadElem(Fraction(-31, 48), 0, -15)
    x = QuadElem(Fraction(-1, 2), Fraction(1, 12), -15)
    assert eval_dynatomic(2, x, c) == 0
    assert (x * x + c) ** 2 + c == x
    assert x * x + c != x


def test_iteration_limit():
    with pytest.raises(LimitError):
        iterate_poly(9)


def test_text_roundtrip():
    for N in (1, 2, 3, 4):
        p = dynatomic_poly(N)
        assert parse_bivar(str(p)) == p


@given(st.fractions(max_denominator=20).filter(lambda q: abs(q) < 10),
       st.fractions(max_denominator=20).filter(lambda q: abs(q) < 10))
def test_evaluation_matches_iteration(x0, c0):
    # Phi_1 * Phi_2 = f^2(x) - x pointwise
    f2 = (x0 * x0 + c0) ** 2 + c0
    assert eval_dynatomic(1, x0, c0) * eval_dynatomic(2, x0, c0) == f2 - x0

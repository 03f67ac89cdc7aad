from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quadpreper.errors import FieldError, FieldMismatchError
from quadpreper.qfield import (
    QuadElem,
    arith,
    as_elem,
    conj_norm_trace,
    abs_bounds_per_place,
    embedding_intervals,
    format_elem,
    make_field,
    parse_elem,
    rational_sqrt,
    sqrt_in_field,
    squarefree_kernel,
)

FIELDS = [-15, -7, -3, -2, -1, 2, 3, 5, 17, 33]

fractions = st.builds(Fraction, st.integers(-200, 200), st.integers(1, 50))


@st.composite
def elems(draw, D=None):
    D = D if D is not None else draw(st.sampled_from(FIELDS))
    return QuadElem(draw(fractions), draw(fractions), D)


@st.composite
def elem_pairs(draw):
    D = draw(st.sampled_from(FIELDS))
    return draw(elems(D)), draw(elems(D))


def test_make_field_normalises():
    assert make_field(12) == 3
    assert make_field(-7) == -7
    assert make_field(9) == 1
    with pytest.raises(FieldError):
        make_field(0)


def test_squarefree_kernel_keeps_sign():
    assert squarefree_kernel(-28) == -7
    assert squarefree_kernel(50) == 2


def test_unit_and_inverse():
    r2 = QuadElem(0, 1, 2)
    assert (1 + r2) * (1 - r2) == -1
    assert 1 / (1 + r2) == QuadElem(-1, 1, 2)


def test_norm_and_trace():
    x = parse_elem("-3/16 + 1/4*sqrt(-7)")
    _, n, t = conj_norm_trace(x)
    assert n == Fraction(121, 256)
    assert t == Fraction(-3, 8)


def test_square_roots():
    assert sqrt_in_field(QuadElem(3, 2, 2)) == QuadElem(1, 1, 2)
    gamma = QuadElem(Fraction(-3, 16), Fraction(1, 4), -7)
    assert sqrt_in_field(gamma) == QuadElem(Fraction(1, 2), Fraction(1, 4), -7)
    assert sqrt_in_field(QuadElem(2, 0, 3)) is None
    assert sqrt_in_field(QuadElem(3, 0, 3)) == QuadElem(0, 1, 3)


def test_rational_embeds_into_any_field():
    x = QuadElem(1, 1, 5)
    assert x + Fraction(1, 2) == QuadElem(Fraction(3, 2), 1, 5)
    assert as_elem(3, 5) * x == QuadElem(3, 3, 5)


def test_field_mismatch():
    with pytest.raises(FieldMismatchError):
        arith("add", QuadElem(0, 1, 2), QuadElem(0, 1, 3))


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        QuadElem(1, 1, 2) / QuadElem(0, 0, 2)


def test_parser_rejects_garbage():
    with pytest.raises(FieldError):
        parse_elem("1/2 +")
    with pytest.raises(FieldError):
        parse_elem("sqrt(2) + sqrt(3)")


def test_format_forms():
    assert format_elem(QuadElem(3, 0, 1)) == "3"
    assert format_elem(QuadElem(Fraction(-3, 4), 0, 2)) == "-3/4"
    assert format_elem(QuadElem(Fraction(1, 2), -1, -7)) == "(1/2)+(-1)*sqrt(-7)"


def test_rational_hash_matches_fraction():
    assert hash(QuadElem(Fraction(3, 4), 0, 5)) == hash(Fraction(3, 4))
    assert rational_sqrt(Fraction(9, 4)) == Fraction(3, 2)


@given(elem_pairs())
def test_ring_axioms(pair):
    x, y = pair
    assert x + y == y + x
    assert x * y == y * x
    assert (x + y) * (x - y) == x * x - y * y
    if y != 0:
        assert (x / y) * y == x


@given(elem_pairs())
def test_norm_multiplicative(pair):
    x, y = pair
    assert (x * y).norm() == x.norm() * y.norm()
    assert (x + y).trace() == x.trace() + y.trace()


@given(elems())
def test_format_parse_roundtrip(x):
    assert parse_elem(format_elem(x), x.D) == x


@given(elems())
def test_sqrt_of_square(x):
    root = sqrt_in_field(x * x)
    assert root is not None
    assert root * root == x * x
    assert root.a > 0 or (root.a == 0 and root.b >= 0)


@settings(max_examples=50)
@given(elems(D=5))
def test_embeddings_bracket_value(x):
    (lo1, hi1), (lo2, hi2) = embedding_intervals(x)
    assert lo1 <= hi1 and lo2 <= hi2
    # the two embeddings sum to the trace and multiply to the norm
    assert lo1 + lo2 <= x.trace() <= hi1 + hi2
    assert max(abs(lo1), abs(hi1)) <= abs_bounds_per_place(x)[0]


def test_imaginary_field_has_no_real_embedding():
    with pytest.raises(ValueError):
        embedding_intervals(QuadElem(0, 1, -15))

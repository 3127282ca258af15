from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ncsurface.scalars import Scalar

rationals = st.fractions(min_value=-6, max_value=6, max_denominator=9)


def scalars(hsq=Fraction(1, 3)):
    return st.builds(lambda a, b, c, d: Scalar(a, b, c, d, hsq=hsq),
                     rationals, rationals, rationals, rationals)


def test_zero_and_equality():
    assert Scalar(0).is_zero()
    assert Scalar(1) + Scalar(-1) == Scalar(0)
    assert Scalar(Fraction(1, 2)) != Scalar(Fraction(1, 3))
    assert Scalar(2) == 2


def test_i_squares_to_minus_one():
    i = Scalar.i()
    assert i * i == Scalar(-1)


def test_h_squares_to_hsq():
    h = Scalar(0, 0, 1, 0, hsq=Fraction(2, 5))
    assert h * h == Scalar(Fraction(2, 5))
    ih = Scalar.i_hbar(Fraction(2, 5))
    assert ih * ih == Scalar(Fraction(-2, 5))


def test_mixing_extensions_rejected():
    a = Scalar(0, 0, 1, 0, hsq=Fraction(1, 2))
    b = Scalar(0, 0, 1, 0, hsq=Fraction(1, 3))
    with pytest.raises(ValueError):
        a + b
    with pytest.raises(ValueError):
        a * b


def test_rational_scalar_adopts_extension():
    a = Scalar(0, 0, 1, 0, hsq=Fraction(1, 2))
    assert (a + Scalar(1)) - Scalar(1) == a
    assert Scalar(2) * a == Scalar(0, 0, 2, 0, hsq=Fraction(1, 2))


def test_canonical_hsq_when_h_part_vanishes():
    h = Scalar(0, 0, 1, 0, hsq=Fraction(1, 2))
    diff = h - h
    assert diff.hsq == 0 and diff == Scalar(0)


def test_to_complex_and_drop_h():
    s = Scalar(1, 2, 3, 4, hsq=Fraction(1, 4))   # h = 1/2
    val = s.to_complex()
    assert abs(val - complex(1 + 1.5, 2 + 2)) < 1e-15
    assert s.drop_h() == Scalar(1, 2)


def test_str_forms():
    assert str(Scalar(0)) == "0"
    assert str(Scalar(Fraction(4, 3))) == "4/3"
    assert str(Scalar(-1)) == "-1"
    assert str(Scalar(Fraction(1, 2), Fraction(3, 4))) == "1/2+3/4*i"
    assert str(Scalar(Fraction(1, 2), Fraction(-3, 4))) == "1/2-3/4*i"
    assert str(Scalar(0, 0, 0, 1, hsq=Fraction(1, 3))) == "1*i*h"


@given(scalars(), scalars(), scalars())
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a


@given(scalars())
def test_additive_inverse(a):
    assert (a - a).is_zero()


@given(scalars())
def test_numeric_embedding_respects_product(a):
    b = Scalar(Fraction(2, 7), Fraction(-1, 3), Fraction(1, 9), Fraction(5, 4),
               hsq=Fraction(1, 3))
    exact = (a * b).to_complex()
    approx = a.to_complex() * b.to_complex()
    assert abs(exact - approx) <= 1e-9 * max(1.0, abs(exact))

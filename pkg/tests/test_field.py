from fractions import Fraction
import random

import pytest

from preproj.field import (CharTwo, DivisionByZero, FieldMismatch, GF, QQ, Scalar, half,
                           parse_field)


@pytest.mark.parametrize("text,p", [("gf2", 2), ("GF3", 3), ("gfP:7", 7), ("GF(5)", 5),
                                    ("rat", 0), ("Q", 0)])
def test_parse_field(text, p):
    assert parse_field(text).characteristic == p


@pytest.mark.parametrize("text", ["gf4", "gf1", "reals", ""])
def test_parse_field_rejects(text):
    with pytest.raises(ValueError):
        parse_field(text)


def test_gf_arithmetic():
    F = GF(5)
    assert F.add(3, 4) == 2
    assert F.mul(3, 4) == 2
    assert F.inv(2) == 3
    assert F.pow(2, -1) == 3
    assert F(Fraction(1, 2)) == 3
    assert F(-1) == 4
    with pytest.raises(DivisionByZero):
        F.inv(0)
    with pytest.raises(DivisionByZero):
        F(Fraction(1, 5))


def test_rationals_exact():
    assert QQ.add(QQ("1/3"), QQ("1/6")) == Fraction(1, 2)
    assert QQ.inv(QQ(-4)) == Fraction(-1, 4)


def test_scalar_ops_and_mismatch():
    a = Scalar(GF(3), 2)
    assert a + 1 == 0
    assert a * a == 1
    assert a / 2 == 1
    assert -a == 1
    assert a ** 2 == 1
    with pytest.raises(FieldMismatch):
        a + Scalar(GF(5), 1)
    with pytest.raises(AttributeError):
        a.value = 1


def test_half():
    assert half(GF(3)).value == 2
    assert half(QQ).value == Fraction(1, 2)
    with pytest.raises(CharTwo):
        half(GF(2))


def test_random_nonzero(field):
    rng = random.Random(1)
    assert all(field.random(rng, nonzero=True) != 0 for _ in range(200))


def test_field_axioms_gf7_exhaustive():
    F = GF(7)
    for a in F.elements():
        for b in F.elements():
            assert F.add(a, b) == F.add(b, a)
            assert F.sub(F.add(a, b), b) == a
            if b:
                assert F.mul(F.div(a, b), b) == a

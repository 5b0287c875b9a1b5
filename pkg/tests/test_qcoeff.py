from __future__ import annotations

from fractions import Fraction

import pytest
from support import laurents, rationals
from hypothesis import given, settings

from qverma.qcoeff import (
    ONE,
    Q,
    ZERO,
    NotSpecializableError,
    QParseError,
    evaluate_at,
    format_q,
    laurent,
    parse,
    q_binomial,
    q_factorial,
    q_number,
    qpow,
)

QI = qpow(-1)


def test_add_q_and_inverse():
    assert Q + QI == (qpow(2) + 1) / Q
    assert format_q(Q + QI) == "q + q^-1"


def test_multiplicative_identity():
    x = parse("(q^3 - 2)/(q + 5)")
    assert x * 1 == x
    assert x * ONE == x


def test_exact_division():
    assert (qpow(2) - qpow(-2)) / (Q - QI) == Q + QI


def test_q_numbers():
    assert q_number(1) == ONE
    assert q_number(0) == ZERO
    assert q_number(3) == laurent({2: 1, 0: 1, -2: 1})
    assert q_number(-2) == -q_number(2)
    assert q_binomial(4, 2) == laurent({4: 1, 2: 1, 0: 2, -2: 1, -4: 1})
    assert q_factorial(3) == q_number(2) * q_number(3)


def test_q_binomial_bounds():
    with pytest.raises(ValueError):
        q_binomial(2, 3)
    with pytest.raises(ValueError):
        q_factorial(-1)


def test_evaluate_at():
    assert evaluate_at(q_number(5), 1) == 5
    assert evaluate_at(qpow(3), 1) == 1
    assert evaluate_at(Q + QI, Fraction(1, 2)) == Fraction(5, 2)
    with pytest.raises(NotSpecializableError):
        evaluate_at(ONE / (Q - QI), 1)
    with pytest.raises(NotSpecializableError):
        evaluate_at(QI, 0)


def test_parse_canonical():
    a = parse("q^2 - 2 + q^-2")
    assert a == (qpow(2) - 1) ** 2 / qpow(2)
    assert a.is_laurent
    b = parse("(q - q^-1)/(q + q^-1)")
    assert b == (qpow(2) - 1) / (qpow(2) + 1)
    assert format_q(parse("0")) == "0"
    assert parse("-3/4") == ONE * Fraction(-3, 4)


@pytest.mark.parametrize("text", ["q^", "(q + 1", "q ** 2", "2 +", "x", "1/0"])
def test_parse_errors(text):
    with pytest.raises((QParseError, ZeroDivisionError)):
        parse(text)


def test_laurent_terms():
    a = laurent({-1: 2, 3: -1})
    assert a.laurent_terms() == {-1: 2, 3: -1}
    assert not (ONE / (Q + 1)).is_laurent


@settings(max_examples=60, deadline=None)
@given(rationals(), rationals(), rationals())
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a
    assert a - a == ZERO
    if a:
        assert a * a.inverse() == ONE
        assert (b / a) * a == b


@settings(max_examples=60, deadline=None)
@given(rationals())
def test_format_parse_round_trip(a):
    assert parse(format_q(a)) == a
    assert hash(parse(format_q(a))) == hash(a)


@settings(max_examples=60, deadline=None)
@given(laurents(), laurents())
def test_evaluation_is_a_ring_map(a, b):
    for q0 in (Fraction(2), Fraction(-3, 5)):
        assert evaluate_at(a * b, q0) == evaluate_at(a, q0) * evaluate_at(b, q0)
        assert evaluate_at(a + b, q0) == evaluate_at(a, q0) + evaluate_at(b, q0)


def test_q_number_symmetry():
    for v in range(-5, 6):
        assert q_number(v).laurent_terms() == {-e: c for e, c in q_number(v).laurent_terms().items()}
        assert evaluate_at(q_number(v), 1) == v

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sphmod.coeff import (
    ONE,
    U,
    ZERO,
    CaseConfig,
    NotDivisible,
    NotDyadic,
    OddExponent,
    Scalar,
    format_scalar,
    parse_scalar,
    q0_of,
    q_of,
    scalar_add,
    scalar_eval_q,
    scalar_exact_div,
    scalar_mul,
    scalar_neg,
)
from sphmod.qcomb import e_factor

from strategies import nonzero_scalars, scalars

u2 = U ** 2


def test_difference_of_squares():
    assert scalar_mul(ONE + u2, ONE - u2) == ONE - U ** 4


def test_additive_inverse():
    a = parse_scalar("1/2*u^-3 + 7")
    assert scalar_add(a, scalar_neg(a)) == ZERO


def test_q_squared_case_s():
    q = q_of(CaseConfig("S", 1))
    assert q * q == U ** 4


def test_q_aliases():
    assert q_of(CaseConfig("A")) == u2
    assert q_of(CaseConfig("uH")) == U ** 4
    assert q0_of(CaseConfig("uH")) == -u2
    with pytest.raises(ValueError):
        q0_of(CaseConfig("S", -1))


def test_exact_division():
    assert scalar_exact_div(U ** 4 - ONE, u2 - ONE) == u2 + ONE
    with pytest.raises(NotDivisible):
        scalar_exact_div(u2 + ONE, u2 - ONE)
    with pytest.raises(ZeroDivisionError):
        scalar_exact_div(ONE, ZERO)


def test_exact_division_of_e_factors():
    cfg = CaseConfig("S", 1)
    q = q_of(cfg)
    num = e_factor(2, 1, cfg) * e_factor(2, -1, cfg)
    assert scalar_exact_div(num, q * q - ONE) == ONE


def test_division_by_units_is_laurent():
    assert scalar_exact_div(ONE, U ** 3) == U ** -3
    assert scalar_exact_div(ONE, Scalar.const(-2)) == Scalar.const(Fraction(-1, 2))


def test_eval():
    assert scalar_eval_q(ONE + u2, 3, "S") == 4
    with pytest.raises(OddExponent):
        scalar_eval_q(U, 3, "S")
    # uH specialises at q0, with u^2 = -q0
    assert scalar_eval_q(ONE - u2, 2, "uH") == 3


def test_dyadic_only():
    with pytest.raises(NotDyadic):
        Scalar({0: Fraction(1, 3)})
    with pytest.raises(NotDivisible):
        scalar_exact_div(ONE, Scalar.const(3))


def test_format_examples():
    assert format_scalar(ZERO) == "0"
    assert format_scalar(parse_scalar("1 - u^2")) == "1 - u^2"
    assert format_scalar(Scalar({-2: Fraction(1, 2), 1: -1})) == "1/2*u^-2 - u"
    with pytest.raises(ValueError):
        parse_scalar("u^x")
    with pytest.raises(ValueError):
        parse_scalar("")


def test_case_config_validation():
    assert CaseConfig("A").gamma == 2
    assert CaseConfig("S", -1).gamma == 1
    with pytest.raises(ValueError):
        CaseConfig("uH", -1)
    with pytest.raises(ValueError):
        CaseConfig("T")
    with pytest.raises(ValueError):
        CaseConfig("S", 0)


@given(scalars(), scalars(), scalars())
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a + ZERO == a and a * ONE == a
    assert a - a == ZERO


@given(scalars(), nonzero_scalars)
def test_exact_division_inverts_multiplication(a, b):
    assert scalar_exact_div(a * b, b) == a


@given(scalars(even=True), scalars(even=True), st.sampled_from([("S", 3), ("S", 5), ("A", 2), ("uH", 2), ("uH", 3)]))
def test_eval_is_homomorphism(a, b, point):
    case, qv = point
    ev = lambda x: scalar_eval_q(x, qv, case)
    assert ev(a + b) == ev(a) + ev(b)
    assert ev(a * b) == ev(a) * ev(b)
    assert ev(ONE) == 1


@given(scalars())
def test_format_parse_round_trip(a):
    assert parse_scalar(format_scalar(a)) == a

from fractions import Fraction

import pytest

from fmcob.beauville_model import ext_oracle, taut, tensor_product
from fmcob.coeff_ring import t_var
from fmcob.expr import ExprError, parse_expression, parse_scalar


def test_rationals_and_names():
    B = taut(2)
    x = parse_expression("1/3 - 2*theta + theta2", B)
    assert x.coeffs == {0: Fraction(1, 3), 1: Fraction(-2), 2: Fraction(1)}


def test_powers_and_parentheses_use_the_algebra_product():
    B = taut(1)
    assert parse_expression("2*(1+theta)^2", B) == parse_expression("2 + 4*theta", B)
    assert parse_expression("theta^2", B) == parse_expression("0", B)


def test_odd_classes_anticommute():
    E = ext_oracle(1)
    assert parse_expression("x1*y1 + y1*x1", E) == parse_expression("0", E)


def test_tensor_names_with_bars():
    P = tensor_product(taut(1), taut(1))
    x = parse_expression("theta|1 * 1|theta", P)
    assert x == parse_expression("theta|theta", P)


def test_t_variables_need_an_order():
    B = taut(1)
    x = parse_expression("t1*theta + t2", B, t_order=3)
    assert x.coeffs[1] == t_var(1, 3)
    with pytest.raises(ExprError):
        parse_expression("t1*theta", B)


@pytest.mark.parametrize("text, message, column", [
    ("theta +", "unexpected end of expression", 8),
    ("foo", "unknown name 'foo'", 1),
    ("(theta", "expected ')'", 7),
    ("theta $", "unexpected character '$'", 7),
    ("1/0", "zero denominator", 1),
])
def test_errors_carry_a_column(text, message, column):
    with pytest.raises(ExprError) as info:
        parse_expression(text, taut(1))
    assert message in str(info.value)
    assert str(info.value).endswith(f"at column {column}")


def test_parse_scalar():
    assert parse_scalar("-3/4") == Fraction(-3, 4)
    with pytest.raises(ExprError):
        parse_scalar("theta")

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fmcob.beauville_model import taut
from fmcob.coeff_ring import (
    TauVector,
    TPoly,
    canonical_tau,
    format_tpoly,
    mono_mul,
    parse_rational,
    parse_tpoly,
    t_var,
    todd_inverse,
    trivial_tau,
    twisted_c1,
    twisted_pullback,
    weight,
)

F = Fraction
ORDER = 6

monomial = st.lists(st.integers(0, 3), min_size=0, max_size=4).map(tuple)
tpolys = st.dictionaries(monomial, st.fractions(-4, 4, max_denominator=5), max_size=5).map(
    lambda d: TPoly(d, ORDER))


@settings(max_examples=60, deadline=None)
@given(tpolys, tpolys, tpolys)
def test_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert (a + b) + c == a + (b + c)
    assert a - a == TPoly({}, ORDER)
    assert a * a.one() == a


@settings(max_examples=60, deadline=None)
@given(monomial, monomial)
def test_grading_of_products(m1, m2):
    a, b = TPoly({m1: 1}, 64), TPoly({m2: 1}, 64)
    prod = a * b
    assert prod.degrees() == {-(weight(m1) + weight(m2))}


def test_truncation_drops_high_weight():
    t1, t4 = t_var(1, 4), t_var(4, 4)
    assert t1 * t4 == TPoly({}, 4)
    assert t1 ** 4 == TPoly({(4,): 1}, 4)
    assert t1 ** 5 == TPoly({}, 4)
    assert t_var(5, 4) == TPoly({}, 4)


def test_zero_is_empty():
    p = TPoly({(1,): F(2), (): 0}, 4) - TPoly({(1,): F(2)}, 4)
    assert p.terms == {}
    assert not p


def test_mixing_orders_rejected():
    with pytest.raises(ValueError, match="orders"):
        t_var(1, 3) + t_var(1, 4)


def test_text_roundtrip():
    p = parse_tpoly("3/2*t1*t3 - t2^2 + 7 - t1", 8)
    assert parse_tpoly(format_tpoly(p), 8) == p
    assert format_tpoly(TPoly({}, 3)) == "0"


def test_parse_rational_errors():
    assert parse_rational("-22/7") == F(-22, 7)
    with pytest.raises(ValueError, match="malformed rational '2.5'"):
        parse_rational("2.5")
    with pytest.raises(ValueError, match="zero denominator"):
        parse_rational("1/0")


def test_tau_validation():
    with pytest.raises(ValueError, match="tau_0"):
        TauVector((F(2),))
    with pytest.raises(ValueError, match="degree"):
        TauVector((TPoly.const(1, 3), t_var(2, 3)))


# todd_inverse / twisted_c1 --------------------------------------------------


def theta_class(g, order):
    B = taut(g)
    return B, B.basis_element(1).map_coefficients(lambda c: TPoly.const(c, order))


def test_todd_inverse_untwisted_is_one():
    B, theta = theta_class(2, 3)
    assert todd_inverse(trivial_tau(3), theta) == theta.one()


def test_todd_inverse_square_zero():
    B, theta = theta_class(1, 3)
    assert todd_inverse(canonical_tau(3), theta) == theta.one() + theta * t_var(1, 3)


def test_todd_inverse_in_taut2():
    B, theta = theta_class(2, 3)
    got = todd_inverse(canonical_tau(3), theta)
    # theta^2 = 2 * (theta^2/2!)
    expected = theta.one() + theta * t_var(1, 3) + B.basis_element(2).scale(2 * t_var(2, 3))
    assert got == expected


def test_twisted_c1_untwisted():
    _, theta = theta_class(2, 3)
    assert twisted_c1(trivial_tau(3), theta) == theta


def test_twisted_c1_square_zero():
    _, theta = theta_class(1, 3)
    assert twisted_c1(canonical_tau(3), theta) == theta


def test_twisted_c1_cube_zero():
    _, theta = theta_class(2, 3)
    assert twisted_c1(canonical_tau(3), theta) == theta + (theta * theta) * t_var(1, 3)


def test_twisted_pullback_collapses_for_abelian_varieties():
    B, theta = theta_class(2, 3)
    zero = theta.scale(0)
    assert todd_inverse(canonical_tau(3), zero) == theta.one()
    op = twisted_pullback(canonical_tau(3), lambda x: x, [zero, zero], [zero, zero])
    assert op.factor == theta.one()
    assert op(theta) == theta


def test_twisted_pullback_nontrivial_roots():
    B, theta = theta_class(1, 3)
    op = twisted_pullback(canonical_tau(3), lambda x: x, [theta], [])
    assert op(theta.one()) == theta.one() + theta * t_var(1, 3)


def test_mono_mul_and_weight():
    assert mono_mul((1,), (0, 2)) == (1, 2)
    assert weight((1, 2)) == 5

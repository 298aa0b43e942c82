from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from fmcob.coeff_ring import TPoly, parse_tpoly, t_var
from fmcob.formal_series import (
    TruncatedSeries,
    bivariate_coeff,
    compose,
    exp_of_u,
    exp_series,
    format_series,
    formal_group_law,
    kernel_series,
    lambda_t,
    log_series,
    log_t,
    parse_series,
    revert,
)

F = Fraction


def series(*coeffs, order=None):
    coeffs = [F(c) if isinstance(c, int) else c for c in coeffs]
    return TruncatedSeries(coeffs, order if order is not None else len(coeffs) - 1)


def u_series(order, one=F(1)):
    return TruncatedSeries.variable(order, one)


def sympy_revert(coeffs, order):
    """Undetermined coefficients: solve g(f(u)) = u with sympy."""
    u = sympy.Symbol("u")
    a = sympy.symbols(f"a2:{order + 1}")
    f = sum(sympy.nsimplify(c) * u ** k for k, c in enumerate(coeffs))
    g = u + sum(a[k - 2] * u ** k for k in range(2, order + 1))
    expr = sympy.expand(g.subs(u, f))
    eqs = [expr.coeff(u, k) for k in range(2, order + 1)]
    sol = sympy.solve(eqs, a, dict=True)[0]
    return [0, 1] + [sol[a[k - 2]] for k in range(2, order + 1)]


# compose -------------------------------------------------------------------


def test_compose_identity_outer():
    g = series(0, 1, 3, F(1, 2))
    assert compose(u_series(3), g) == g


def test_compose_exp_with_u():
    assert compose(exp_of_u(4), u_series(4)) == series(1, 1, F(1, 2), F(1, 6), F(1, 24))


def test_compose_rejects_mismatched_orders():
    with pytest.raises(ValueError, match="mismatched"):
        compose(u_series(3), u_series(4))


def test_compose_rejects_constant_inner():
    with pytest.raises(ValueError, match="constant"):
        compose(u_series(3), series(1, 1, 0, 0))


def test_log_then_lambda_is_identity():
    lam, log = lambda_t(4), log_t(4)
    one = TPoly.const(1, 4)
    assert compose(log, lam) == u_series(4, one)
    assert compose(lam, log) == u_series(4, one)


# revert --------------------------------------------------------------------


def test_revert_identity():
    assert revert(u_series(5)) == u_series(5)


def test_revert_u_plus_u2():
    assert revert(series(0, 1, 1, 0)) == series(0, 1, -1, 2)


def test_revert_u_plus_u2_matches_catalan_pattern():
    # the inverse of u + u^2 has coefficients (-1)^(k-1) C_(k-1)
    D = 8
    g = revert(series(0, 1, 1, *([0] * (D - 2))))
    for k in range(1, D + 1):
        assert g[k] == (-1) ** (k - 1) * sympy.catalan(k - 1)


def test_revert_lambda_t_order4():
    expected = {
        1: "1",
        2: "-t1",
        3: "2*t1^2 - t2",
        4: "-5*t1^3 + 5*t1*t2 - t3",
    }
    log = log_t(4)
    for k, text in expected.items():
        assert log[k] == parse_tpoly(text, 4)


def test_revert_lambda_t_against_sympy():
    t1, t2, t3, u = sympy.symbols("t1 t2 t3 u")
    a2, a3, a4 = sympy.symbols("a2 a3 a4")
    lam = u + t1 * u ** 2 + t2 * u ** 3 + t3 * u ** 4
    g = u + a2 * u ** 2 + a3 * u ** 3 + a4 * u ** 4
    expr = sympy.expand(g.subs(u, lam))
    sol = sympy.solve([expr.coeff(u, k) for k in (2, 3, 4)], [a2, a3, a4], dict=True)[0]
    log = log_t(4)
    for k, sym in ((2, a2), (3, a3), (4, a4)):
        poly = sympy.Poly(sympy.expand(sol[sym]), t1, t2, t3)
        terms = {}
        for (e1, e2, e3), c in poly.terms():
            terms[(e1, e2, e3)] = F(int(c.p), int(c.q))
        assert log[k] == TPoly(terms, 4)


def test_revert_rejects_non_unit_linear_term():
    with pytest.raises(ValueError, match="u-coefficient 1"):
        revert(series(0, 2, 1))


def test_revert_rejects_constant_term():
    with pytest.raises(ValueError, match="constant"):
        revert(series(1, 1, 1))


rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=1, max_value=8), st.lists(rationals, min_size=7, max_size=7))
def test_revert_compose_back_over_q(D, tail):
    f = TruncatedSeries([F(0), F(1)] + tail[: D - 1], D)
    g = revert(f)
    assert compose(g, f) == u_series(D)
    assert compose(f, g) == u_series(D)


@settings(max_examples=15, deadline=None)
@given(st.lists(st.tuples(st.integers(1, 5), rationals), min_size=1, max_size=5))
def test_revert_against_sympy_oracle(entries):
    D = 5
    coeffs = [F(0), F(1)] + [F(0)] * (D - 1)
    for k, c in entries:
        if k >= 2:
            coeffs[k] += c
    g = revert(TruncatedSeries(coeffs, D))
    oracle = sympy_revert(coeffs, D)
    assert [sympy.nsimplify(c) for c in g.coeffs] == [sympy.nsimplify(c) for c in oracle]


# exp / log -----------------------------------------------------------------


def test_exp_of_zero():
    assert exp_series(series(0, 0, 0)) == series(1, 0, 0)


def test_exp_of_u():
    assert exp_series(u_series(3)) == series(1, 1, F(1, 2), F(1, 6))


def test_log_exp_inverse_pair():
    one = TPoly.const(1, 4)
    f = TruncatedSeries([TPoly({}, 4), one, t_var(1, 4), TPoly({}, 4), TPoly({}, 4)], 4)
    assert log_series(exp_series(f)) == f


@settings(max_examples=30, deadline=None)
@given(st.lists(rationals, min_size=6, max_size=6))
def test_exp_log_roundtrip(tail):
    f = TruncatedSeries([F(0)] + tail, 6)
    assert log_series(exp_series(f)) == f
    g = TruncatedSeries([F(1)] + tail, 6)
    assert exp_series(log_series(g)) == g


def test_exp_rejects_constant_term():
    with pytest.raises(ValueError):
        exp_series(series(1, 1))


# named series --------------------------------------------------------------


@pytest.mark.parametrize("D", range(1, 9))
def test_kernel_collapse(D):
    G = kernel_series(D)
    assert compose(G, lambda_t(D)) == exp_of_u(D, TPoly.const(1, D))


def test_named_series_homogeneity():
    lam, log = lambda_t(6), log_t(6)
    for k in range(1, 7):
        assert lam[k].is_homogeneous(1 - k)
        if log[k]:
            assert log[k].is_homogeneous(1 - k)


def test_kernel_series_degree_range():
    G = kernel_series(6)
    for k in range(1, 7):
        assert all(1 - k <= d <= 0 for d in G[k].degrees())


def test_formal_group_law_low_terms():
    Fuv = formal_group_law(3)
    assert bivariate_coeff(Fuv, 1, 0) == TPoly.const(1, 3)
    assert bivariate_coeff(Fuv, 0, 1) == TPoly.const(1, 3)
    assert bivariate_coeff(Fuv, 1, 1) == parse_tpoly("2*t1", 3)
    assert bivariate_coeff(Fuv, 2, 1) == parse_tpoly("3*t2 - 2*t1^2", 3)


def test_formal_group_law_symmetric():
    Fuv = formal_group_law(4)
    for i in range(5):
        for j in range(5 - i):
            assert bivariate_coeff(Fuv, i, j) == bivariate_coeff(Fuv, j, i)


# text format ---------------------------------------------------------------


def test_series_text_roundtrip_rational():
    f = series(0, 1, F(-3, 7), F(22, 5))
    text = format_series(f)
    assert text.splitlines()[1] == "u^2 : -3/7"
    assert parse_series(text) == f


def test_series_text_roundtrip_tpoly():
    f = log_t(6)
    assert parse_series(format_series(f), 6) == f


@settings(max_examples=30, deadline=None)
@given(st.lists(st.fractions(max_denominator=10 ** 6), min_size=4, max_size=4))
def test_series_text_exact_denominators(coeffs):
    f = TruncatedSeries([F(0)] + coeffs, 4)
    back = parse_series(format_series(f))
    assert [c.denominator for c in back.coeffs] == [c.denominator for c in f.coeffs]
    assert back == f


def test_parse_series_errors():
    with pytest.raises(ValueError, match="line 1"):
        parse_series("v^1 : 1")
    with pytest.raises(ValueError, match="malformed rational"):
        parse_series("u^1 : 1/x")

from fractions import Fraction

import pytest

from fmcob.algebra import Element
from fmcob.beauville_model import (
    BasisLabel,
    BeauvilleAlgebra,
    ModelError,
    components,
    degree,
    dual_basis,
    ell_rk1,
    ext_oracle,
    fourier,
    fourier_sign_search,
    is_perfect,
    kernel_realization,
    mult_pullback,
    mult_pushforward,
    numerical_kernel_basis,
    pairing,
    pontryagin,
    pontryagin_from_table,
    sigma,
    taut,
    taut_fourier_signs,
    tensor_product,
    validate,
)
from fmcob.expr import parse_expression

F = Fraction


def el(B, text):
    return parse_expression(text, B)


# tautological models --------------------------------------------------------


def test_taut1_structure():
    B = taut(1)
    assert B.names == ["1", "theta"]
    assert el(B, "theta") * el(B, "theta") == el(B, "0")
    assert degree(B, el(B, "theta")) == 1


def test_taut2_products_use_divided_powers():
    B = taut(2)
    assert el(B, "theta") * el(B, "theta") == el(B, "2*theta2")


@pytest.mark.parametrize("g", [1, 2, 3])
def test_taut_fourier_matches_classical_formula(g):
    # F(theta^p/p!) = (-1)^(g-p) theta^(g-p)/(g-p)!
    assert taut_fourier_signs(g) == tuple((-1) ** (g - p) for p in range(g + 1))
    B = taut(g)
    for p in range(g + 1):
        assert fourier(B, B.basis_element(p)) == B.basis_element(g - p).scale((-1) ** (g - p))


def test_taut_fourier_of_one_is_theta_power():
    B = taut(2)
    assert fourier(B, B.one()) == el(B, "theta2")
    assert fourier(B, el(B, "theta2")) == B.one()


@pytest.mark.parametrize("g", [1, 2, 3])
def test_taut_validates(g):
    rep = validate(taut(g))
    assert rep.ok, rep.render()


# exterior oracle ------------------------------------------------------------


def test_ext1_fourier_values():
    E = ext_oracle(1)
    assert E.names == ["1", "x1", "y1", "x1y1"]
    assert fourier(E, E.one()) == el(E, "-x1y1")
    assert fourier(E, el(E, "x1y1")) == E.one()
    # F keeps s fixed, so odd classes are eigenvectors up to sign
    assert set(fourier(E, el(E, "x1")).coeffs) == {E.names.index("x1")}
    assert set(fourier(E, el(E, "y1")).coeffs) == {E.names.index("y1")}


def test_ext_bidegrees():
    E = ext_oracle(2)
    assert E.bidegree(E.names.index("x1")) == (0, -1)
    assert E.bidegree(E.names.index("y2")) == (1, 1)
    assert E.weight(E.names.index("x1y1")) == 2


@pytest.mark.parametrize("g", [1, 2])
def test_ext_oracle_validates(g):
    rep = validate(ext_oracle(g))
    assert rep.ok, rep.render()


@pytest.mark.parametrize("g", [1, 2, 3])
def test_ext_oracle_agrees_with_taut_on_theta_powers(g):
    E = ext_oracle(g)
    theta = sum((el(E, f"x{i}y{i}") for i in range(2, g + 1)), el(E, "x1y1"))
    powers = [E.one()]
    for p in range(1, g + 1):
        powers.append((powers[-1] * theta).scale(F(1, p)))
    signs = taut_fourier_signs(g)
    for p in range(g + 1):
        assert fourier(E, powers[p]) == powers[g - p].scale(signs[p])


def test_ext_rejects_zero_dimension():
    with pytest.raises(ModelError):
        ext_oracle(0)
    with pytest.raises(ModelError):
        taut(0)


# operators ------------------------------------------------------------------


def test_n_operators_scale_by_weight():
    B = taut(2)
    x = el(B, "1 + theta + theta2")
    assert mult_pullback(B, 2, x) == el(B, "1 + 4*theta + 16*theta2")
    assert mult_pushforward(B, 2, x) == el(B, "16 + 4*theta + theta2")
    assert sigma(B, x) == x
    E = ext_oracle(1)
    assert sigma(E, el(E, "x1 + y1")) == el(E, "-x1 - y1")


def test_pontryagin_point_class_is_unit():
    for B in (taut(1), taut(2), ext_oracle(1)):
        pt = B.basis_element(B.dim - 1)
        for x in B.basis():
            assert pontryagin(B, pt, x) == x


def test_pontryagin_examples_taut1():
    B = taut(1)
    assert pontryagin(B, B.one(), B.one()) == el(B, "0")
    assert pontryagin(B, el(B, "theta"), el(B, "theta")) == el(B, "theta")


def test_pontryagin_table_needs_a_star_section():
    B = tensor_product(taut(1), taut(1))
    with pytest.raises(ModelError, match="Pontryagin table"):
        pontryagin_from_table(B, B.one(), B.one())


def test_components_split_by_bidegree():
    E = ext_oracle(1)
    parts = components(E, el(E, "1 + x1 + y1 + 3*x1y1"))
    assert set(parts) == {(0, 0), (0, -1), (1, 1), (1, 0)}
    assert parts[(1, 0)] == el(E, "3*x1y1")


# pairing --------------------------------------------------------------------


def test_pairing_and_dual_basis():
    B = taut(2)
    assert pairing(B, el(B, "theta"), el(B, "theta")) == 2
    assert is_perfect(B)
    duals = dual_basis(B)
    for i, b in enumerate(B.basis()):
        for j, d in enumerate(duals):
            assert pairing(B, b, d) == (1 if i == j else 0)


def test_numerical_kernel_of_ell_rk1():
    E = ell_rk1()
    (v,) = numerical_kernel_basis(E)
    assert set(v.coeffs) == {E.names.index("pi")}
    assert not is_perfect(E)


# tensor product -------------------------------------------------------------


def test_tensor_product_structure():
    P = tensor_product(taut(1), taut(1))
    assert P.g == 2
    assert P.names[0] == "1"
    assert "theta|theta" in P.names
    assert degree(P, el(P, "theta|theta")) == 1
    assert el(P, "theta|1") * el(P, "1|theta") == el(P, "theta|theta")
    rep = validate(P)
    assert rep.ok, rep.render()


def test_tensor_product_fourier_is_tensor_of_fouriers():
    P = tensor_product(taut(1), taut(1))
    assert fourier(P, P.one()) == el(P, "theta|theta")


def test_tensor_product_koszul_signs():
    P = tensor_product(ext_oracle(1), ext_oracle(1))
    a, b = el(P, "x1|1"), el(P, "1|y1")
    assert a * b == (b * a).scale(-1)


# elliptic model -------------------------------------------------------------


def test_ell_rk1_fourier():
    E = ell_rk1()
    assert E.g == 1 and not E.selfdual
    assert fourier(E, E.one()) == el(E, "-theta")
    assert fourier(E, el(E, "theta")) == E.one()
    assert fourier(E, el(E, "pi")) == el(E, "-pi")
    assert E.bidegree(E.names.index("pi")) == (1, 1)


def test_ell_rk1_validates_with_kernel():
    rep = validate(ell_rk1())
    assert rep.ok, rep.render()
    assert {"kernel-associativity", "kernel-realization"} <= {r.identity for r in rep}


def test_ell_rk1_kernel_realizes_fourier():
    E = ell_rk1()
    for x in E.basis():
        assert kernel_realization(E, x) == fourier(E, x)


def test_ell_rk1_sign_search():
    E = ell_rk1()
    magnitudes = [{1: F(1)}, {0: F(1)}, {2: F(1)}]
    solutions = fourier_sign_search(E, magnitudes)
    assert sorted(solutions) == sorted([(1, -1, 1), (1, -1, -1), (-1, 1, 1), (-1, 1, -1)])
    # the shipped choice is among them
    assert (-1, 1, -1) in solutions


def test_sign_search_alone_leaves_taut_signs_ambiguous():
    # the identities admit four sign vectors; the oracle picks one
    B = taut(2)
    magnitudes = [{2: F(1)}, {1: F(1)}, {0: F(1)}]
    solutions = fourier_sign_search(B, magnitudes)
    assert len(solutions) == 4
    assert taut_fourier_signs(2) in solutions


# validation failures --------------------------------------------------------


def broken(**changes):
    B = taut(1)
    args = dict(g=1, basis=B.labels, mult=B.table, degree=B.degree_map,
                fourier=[{1: F(-1)}, {0: F(1)}], selfdual=True)
    args.update(changes)
    return BeauvilleAlgebra(args.pop("g"), args.pop("basis"), args.pop("mult"),
                            args.pop("degree"), args.pop("fourier"), args.pop("selfdual"),
                            name="broken")


def failed(rep):
    return {r.identity for r in rep if not r.passed}


def test_validate_catches_wrong_fourier_sign():
    rep = validate(broken(fourier=[{1: F(1)}, {0: F(1)}]))
    assert "fourier-inversion" in failed(rep)


def test_validate_catches_out_of_bounds_bidegree():
    labels = [BasisLabel("1", 0, 0), BasisLabel("theta", 1, 0), BasisLabel("odd", 0, 1)]
    rep = validate(broken(basis=labels, fourier=[{1: F(-1)}, {0: F(1)}, {2: F(1)}]))
    assert "bidegree-bounds" in failed(rep)


def test_validate_catches_degree_off_top():
    rep = validate(broken(degree={0: F(1), 1: F(1)}))
    assert "degree-support" in failed(rep)


def test_validate_catches_nonassociative_table():
    labels = [BasisLabel("1", 0, 0), BasisLabel("a", 1, 0), BasisLabel("b", 1, 0)]
    mult = {(0, 0): {0: F(1)}, (0, 1): {1: F(1)}, (1, 0): {1: F(1)},
            (0, 2): {2: F(1)}, (2, 0): {2: F(1)}, (1, 2): {1: F(1)}}
    B = BeauvilleAlgebra(1, labels, mult, {1: F(1)}, None, False, name="bad")
    rep = validate(B)
    assert failed(rep) & {"graded-commutativity", "product-bidegree", "associativity"}


def test_unit_must_be_named_one():
    labels = [BasisLabel("e", 0, 0), BasisLabel("theta", 1, 0)]
    with pytest.raises(ModelError):
        BeauvilleAlgebra(1, labels, {}, {1: F(1)}, None, True, name="x")


def test_element_arithmetic_is_exact():
    B = taut(1)
    x = Element(B, {0: F(1, 3), 1: F(2, 7)})
    assert (x + x - x) == x
    assert x.scale(0) == Element(B, {})

import random
from fractions import Fraction

import pytest

from fmcob.beauville_model import ModelError, ell_rk1, ext_oracle, mult_pullback, taut, tensor_product
from fmcob.expr import parse_expression
from fmcob.motives import (
    Correspondence,
    canonical_projectors,
    compose,
    diagonal,
    format_correspondence,
    graph_class,
    id_times_pullback,
    motive_decompose,
    projector_suite,
    projectors_by_interpolation,
    random_correspondence,
    realization,
    tensor_square,
    transpose,
)


def corr(B, text):
    return Correspondence.from_element(B, parse_expression(text, tensor_square(B)))


def test_taut1_projectors():
    B = taut(1)
    pis = canonical_projectors(B)
    assert pis[0] == corr(B, "theta|1")
    assert not pis[1]
    assert pis[2] == corr(B, "1|theta")


def test_ext1_middle_projector():
    E = ext_oracle(1)
    pis = canonical_projectors(E)
    assert pis[1] == corr(E, "-x1|y1 + y1|x1")
    assert compose(pis[1], pis[1]) == pis[1]
    assert format_correspondence(pis[1])


def test_diagonal_realizes_identity():
    for B in (taut(2), ext_oracle(1)):
        R = realization(diagonal(B))
        for x in B.basis():
            assert R(x) == x


def test_graph_class_realizes_pullback():
    B = ext_oracle(1)
    for n in (2, -1, 3):
        R = realization(graph_class(B, n))
        for x in B.basis():
            assert R(x) == mult_pullback(B, n, x)


def test_graph_class_of_one_is_diagonal():
    B = taut(2)
    assert graph_class(B, 1) == diagonal(B)


def test_composition_is_functorial():
    B = ext_oracle(1)
    rng = random.Random(4)
    a, b = random_correspondence(B, rng), random_correspondence(B, rng)
    Rab = realization(compose(b, a))
    for x in B.basis():
        assert Rab(x) == realization(b)(realization(a)(x))


def test_transpose_and_eigenvalues():
    B = taut(2)
    pis = canonical_projectors(B)
    for i, p in enumerate(pis):
        assert transpose(p) == pis[2 * B.g - i]
        assert id_times_pullback(p, 3) == p.scale(Fraction(3) ** i)


def test_interpolation_is_independent_of_n():
    B = tensor_product(taut(1), taut(1))
    assert projectors_by_interpolation(B, 2) == projectors_by_interpolation(B, 3) == canonical_projectors(B)


def test_motive_summands_for_taut():
    for g in (1, 2, 3):
        summands = motive_decompose(taut(g), 3)
        assert sum(1 for s in summands if s.nonzero) == g + 1


@pytest.mark.parametrize("B", [taut(1), taut(2), taut(3), ext_oracle(1), ext_oracle(2),
                               tensor_product(taut(1), taut(1))], ids=lambda B: B.name)
def test_projector_suite(B):
    rep = projector_suite(B, 3)
    assert rep.ok, rep.render()


def test_degenerate_pairing_is_refused():
    rep = projector_suite(ell_rk1(), 3)
    assert not rep.ok
    assert rep[0].identity == "perfect-pairing"
    with pytest.raises(ModelError):
        canonical_projectors(ell_rk1())

"""Acceptance criteria. Every comparison is exact.

Each test carries a ``criterion`` marker; conftest.py prints one
PASS/FAIL line per criterion at the end of the session.
"""

import io
import random
from fractions import Fraction
from functools import lru_cache

import pytest

from fmcob.beauville_model import ell_rk1, ext_oracle, taut, tensor_product
from fmcob.checks import decomposition_suite, fourier_suite
from fmcob.cli import main
from fmcob.cobordism import OmegaClass, fourier_via_kernel, fourier_via_psi, random_class
from fmcob.coeff_ring import TPoly, monomials_up_to
from fmcob.formal_series import TruncatedSeries, compose, exp_of_u, kernel_series, lambda_t, revert
from fmcob.motives import canonical_projectors, projector_suite
from fmcob.numerical_equiv import fourier_preserves_kernel, numerical_kernel, star_nilpotence

D = 8
SAMPLES = 100


def shipped_models():
    return [taut(1), taut(2), taut(3), tensor_product(taut(1), taut(1)), ell_rk1(),
            ext_oracle(1), ext_oracle(2)]


SHIPPED_NAMES = ["taut:1", "taut:2", "taut:3", "product:1,1", "ell-rk1", "ext:1", "ext:2"]


@lru_cache(maxsize=None)
def decomposition_report(index):
    return decomposition_suite(shipped_models()[index], D, seed=0, samples=SAMPLES)


def assert_report(rep, identities=None):
    rows = [r for r in rep if identities is None or r.identity in identities]
    assert rows, "no rows selected"
    failed = [r.line() for r in rows if not r.passed]
    assert not failed, "\n".join(failed)


@pytest.mark.criterion(1, "series kernel collapse G(lambda_t(u)) = exp(u) to u^8")
def test_series_kernel_collapse():
    one = TPoly.const(1, D)
    collapse = compose(kernel_series(D), lambda_t(D))
    target = exp_of_u(D, one)
    for k in range(D + 1):
        assert collapse[k] == target[k], f"u^{k}"


def _random_q_series(rng):
    coeffs = [Fraction(0), Fraction(1)]
    coeffs += [Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(D - 1)]
    return TruncatedSeries(coeffs, D)


def _random_t_series(rng):
    monos = list(monomials_up_to(D))
    coeffs = [TPoly({}, D), TPoly.const(1, D)]
    for _ in range(D - 1):
        terms = {rng.choice(monos): Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(3)}
        coeffs.append(TPoly(terms, D))
    return TruncatedSeries(coeffs, D)


@pytest.mark.criterion(2, "reversion oracle on 50 random series over Q and over the t-ring")
def test_reversion_oracle():
    rng = random.Random(2)
    for make, one in ((_random_q_series, Fraction(1)), (_random_t_series, TPoly.const(1, D))):
        u = TruncatedSeries.variable(D, one)
        for _ in range(50):
            f = make(rng)
            assert compose(revert(f), f) == u


@pytest.mark.criterion(3, "Fourier route agreement on basis classes and 100 random classes")
@pytest.mark.parametrize("B", [taut(1), taut(2), taut(3), tensor_product(taut(1), taut(1)), ell_rk1()],
                         ids=lambda B: B.name)
def test_fourier_route_agreement(B):
    rng = random.Random(3)
    classes = [OmegaClass.basis_class(B, i, D) for i in range(B.dim)]
    classes += [random_class(B, D, rng) for _ in range(SAMPLES)]
    for x in classes:
        assert fourier_via_psi(x) == fourier_via_kernel(x), repr(x)


FOURIER_IDENTITIES = {
    "omega-fourier-inversion",
    "omega-fourier-exchange",
    "omega-fourier-isogeny",
    "omega-fourier-eigenvalues",
}


@pytest.mark.criterion(4, "Fourier inversion, exchange, isogeny and eigenvalue identities")
@pytest.mark.parametrize("index", range(len(SHIPPED_NAMES)), ids=SHIPPED_NAMES)
def test_fourier_identities(index):
    B = shipped_models()[index]
    assert_report(fourier_suite(B, D, seed=4, samples=SAMPLES), FOURIER_IDENTITIES)


@pytest.mark.criterion(5, "Beauville decomposition sums, eigenvectors and bounds")
@pytest.mark.parametrize("index", range(len(SHIPPED_NAMES)), ids=SHIPPED_NAMES)
def test_beauville_decomposition(index):
    assert_report(decomposition_report(index), {
        "decomposition-sums-to-input",
        "decomposition-eigenvectors",
        "decomposition-bounds",
    })


@pytest.mark.criterion(6, "five equivalent conditions agree on every pure component")
@pytest.mark.parametrize("index", range(len(SHIPPED_NAMES)), ids=SHIPPED_NAMES)
def test_pure_component_equivalences(index):
    rep = decomposition_report(index)
    rows = {r.identity for r in rep if r.identity.startswith("pure-class")}
    assert "pure-class-equivalence" in rows
    assert_report(rep, rows)


@pytest.mark.criterion(7, "numerical kernel values, Fourier stability and star nilpotence")
def test_numerical_equivalence():
    for g in (1, 2, 3):
        assert numerical_kernel(taut(g), D).is_zero
    E = ell_rk1()
    kernel = numerical_kernel(E, D)
    pi = E.basis_element(E.names.index("pi"))
    (vec,) = kernel.chow_basis
    ratio = {vec.coeffs[k] / pi.coeffs[k] for k in pi.coeffs}
    assert set(vec.coeffs) == set(pi.coeffs) and len(ratio) == 1
    assert star_nilpotence(E, 2)
    for B in shipped_models():
        assert_report(fourier_preserves_kernel(B, D))
        assert star_nilpotence(B, B.g + 1), B.name


@pytest.mark.criterion(8, "canonical projector identities and their t = 0 specialization")
@pytest.mark.parametrize("B", [taut(1), taut(2), ext_oracle(1), tensor_product(taut(1), taut(1))],
                         ids=lambda B: B.name)
def test_projector_identities(B):
    rep = projector_suite(B, D, seed=8)
    assert_report(rep)
    assert {"projectors-sum-to-diagonal", "projectors-orthogonal-idempotent",
            "projector-eigenvalues", "projector-transpose-duality", "projector-uniqueness",
            "projectors-specialize-at-t0"} <= {r.identity for r in rep}
    if B.name == "ext:1":
        assert canonical_projectors(B)[1]


@pytest.mark.criterion(9, "check output is byte-identical across runs and exits 0")
@pytest.mark.parametrize("spec", SHIPPED_NAMES)
def test_check_determinism(spec):
    runs = []
    for _ in range(2):
        out = io.StringIO()
        code = main(["check", spec, "--order", str(D)], out=out)
        runs.append((code, out.getvalue()))
    assert runs[0] == runs[1]
    assert runs[0][0] == 0, runs[0][1]

"""Numerical equivalence on cobordism classes and Pontryagin nilpotence.

The pairing <x, y> = pi_*(x . y) takes values in the truncated t-ring.
Writing x = sum t^I x_I, the coefficient of t^K in <x, t^J b> is
deg(x_I b) with I = K - J, and distinct I give distinct monomials t^(I+J).
So x pairs to zero with every t^J b exactly when every x_I pairs to zero
with every b: the kernel is the direct sum over monomials of copies of the
Chow-level kernel N(B), and test classes beyond J = () are redundant.
Below this is computed block by block from the expanded pairing rather than
assumed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import sympy

from .algebra import Element
from .beauville_model import (
    BeauvilleAlgebra,
    degree,
    fourier,
    from_sympy,
    pontryagin,
    to_sympy,
)
from .coeff_ring import DEFAULT_ORDER, TPoly, mono_mul, monomials_up_to, weight
from .cobordism import OmegaClass, fourier_via_psi
from .report import Report


def span_basis(vectors: list[Element], algebra) -> list[Element]:
    """Reduced echelon basis of the span of model elements."""
    n = algebra.dim
    rows = [[Fraction(v.coeffs.get(i, 0)) for i in range(n)] for v in vectors if v]
    if not rows:
        return []
    M = to_sympy(rows).rref()[0]
    out = []
    for row in from_sympy(M):
        if any(row):
            out.append(Element(algebra, {i: c for i, c in enumerate(row) if c}))
    return out


def omega_pairing(x: OmegaClass, y: OmegaClass) -> TPoly:
    """pi_*(x . y) as a truncated t-polynomial."""
    x._check(y)
    terms: dict = {}
    for m1, a in x.terms.items():
        for m2, b in y.terms.items():
            m = mono_mul(m1, m2)
            if weight(m) > x.order:
                continue
            d = degree(x.model, a * b)
            if d:
                terms[m] = terms.get(m, 0) + d
    return TPoly(terms, x.order)


@dataclass
class NumericalKernel:
    model: BeauvilleAlgebra
    order: int
    blocks: dict            # monomial -> list of model elements (rref basis)

    def basis(self) -> list[OmegaClass]:
        out = []
        for mono in sorted(self.blocks, key=lambda m: (weight(m), m)):
            for v in self.blocks[mono]:
                out.append(OmegaClass(self.model, {mono: v}, self.order))
        return out

    @property
    def chow_basis(self) -> list[Element]:
        return self.blocks.get((), [])

    @property
    def is_zero(self) -> bool:
        return not any(self.blocks.values())

    def quotient_dimensions(self) -> dict:
        return {m: self.model.dim - len(v) for m, v in self.blocks.items()}

    def contains(self, x: OmegaClass) -> bool:
        return is_numerically_trivial(x)


def _block_kernel(model: BeauvilleAlgebra, mono: tuple, order: int) -> list[Element]:
    """Kernel of the pairing restricted to classes t^mono * b against all t^J b'."""
    n = model.dim
    rows = []
    for J in monomials_up_to(order):
        K = mono_mul(mono, J)
        if weight(K) > order:
            continue
        # equations: sum_i a_i deg(b_i b_j) = 0 for the coefficient of t^K
        for j in range(n):
            rows.append([Fraction(degree(model, model.basis_element(i) * model.basis_element(j)))
                         for i in range(n)])
    null = to_sympy(rows).nullspace()
    if not null:
        return []
    vectors = from_sympy(sympy.Matrix.hstack(*null).T)
    return span_basis([Element(model, {i: c for i, c in enumerate(v) if c}) for v in vectors], model)


def numerical_kernel(model: BeauvilleAlgebra, order: int = DEFAULT_ORDER) -> NumericalKernel:
    """Basis of N*(A) truncated at t-degree D, one block per t-monomial."""
    gram_rows = {}
    blocks = {}
    for mono in monomials_up_to(order):
        # the equation set only depends on which monomials survive truncation
        key = weight(mono)
        if key not in gram_rows:
            gram_rows[key] = _block_kernel(model, mono, order)
        blocks[mono] = gram_rows[key]
    return NumericalKernel(model, order, blocks)


def is_numerically_trivial(x: OmegaClass) -> bool:
    B = x.model
    for mono, el in x.terms.items():
        for j in range(B.dim):
            test = OmegaClass(B, {(): B.basis_element(j)}, x.order)
            if omega_pairing(OmegaClass(B, {mono: el}, x.order), test):
                return False
    return True


def fourier_preserves_kernel(model: BeauvilleAlgebra, order: int = DEFAULT_ORDER,
                             kernel: NumericalKernel | None = None) -> Report:
    """F^Omega(N*(A)) is contained in N*(A^)."""
    kernel = kernel or numerical_kernel(model, order)
    rep = Report()
    bad = []
    for x in kernel.basis():
        if not is_numerically_trivial(fourier_via_psi(x)):
            bad.append(repr(x))
    rep.add(not bad, "fourier-preserves-numerical-kernel", model.name,
            "vacuous: kernel is zero" if kernel.is_zero else ", ".join(bad[:3]))
    return rep


def star_power_span(model: BeauvilleAlgebra, k: int) -> list[Element]:
    """Span of k-fold Pontryagin products of numerically trivial classes.

    The product is t-bilinear and the kernel is t-free, so the Chow-level
    block determines every block.
    """
    N = numerical_kernel(model, 0).chow_basis
    span = list(N)
    for _ in range(k - 1):
        span = span_basis([pontryagin(model, a, b) for a in span for b in N], model)
        if not span:
            break
    return span


def star_nilpotence(model: BeauvilleAlgebra, k: int) -> bool:
    """Whether N^{*k} = 0 for the Pontryagin product."""
    return not star_power_span(model, k)


def nilpotent_against_class(model: BeauvilleAlgebra, x: Element, p: int) -> bool:
    """N^{*(p+1)} * x = 0 for x with F(x) in codimension >= g - p."""
    g = model.g
    fx = fourier(model, x)
    if any(model.dual.p(k) < g - p for k in fx.coeffs):
        raise ValueError(f"F(x) has components below codimension {g - p}")
    span = star_power_span(model, p + 1)
    return all(not pontryagin(model, a, x) for a in span)


def check_kernel_ideal(model: BeauvilleAlgebra) -> Report:
    """N is an ideal for . and N * N stays inside N."""
    rep = Report()
    N = numerical_kernel(model, 0).chow_basis
    trivial = lambda z: all(not degree(model, z * b) for b in model.basis())
    bad = [repr(a) for a in N for b in model.basis() if not trivial(a * b)]
    rep.add(not bad, "numerical-kernel-ideal", model.name, ", ".join(bad[:3]))
    bad = [repr(a) for a in N for b in N if not trivial(pontryagin(model, a, b))]
    rep.add(not bad, "numerical-kernel-star-closed", model.name, ", ".join(bad[:3]))
    bad = [repr(a) for a in N if degree(model, a)]
    rep.add(not bad, "numerical-kernel-degree-zero", model.name, ", ".join(bad[:3]))
    return rep


def numerical_suite(model: BeauvilleAlgebra, order: int = DEFAULT_ORDER) -> Report:
    rep = Report()
    kernel = numerical_kernel(model, order)
    dims = sorted(set(kernel.quotient_dimensions().values()))
    rep.add(True, "numerical-kernel", model.name,
            f"dim N per t-monomial = {len(kernel.chow_basis)}, quotient dim = {dims}")
    rep.extend(fourier_preserves_kernel(model, order, kernel))
    rep.extend(check_kernel_ideal(model))
    g = model.g
    rep.add(star_nilpotence(model, g + 1), "star-nilpotence", model.name, f"N^*{g + 1} = 0")
    point = [i for i in model.keys() if model.bidegree(i) == (g, 0) and model.degree_map.get(i)]
    if point:
        x = model.basis_element(point[0])
        rep.add(nilpotent_against_class(model, x, g), "star-nilpotence-with-class", model.name,
                f"p={g}, x={model.names[point[0]]}")
    return rep

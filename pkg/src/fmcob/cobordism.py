"""Cobordism classes of A through psi: finite sums of t^I times model elements.

A term t^I * b with b in B^p'_s' has codimension p' - |I| and weight
s' - 2|I|, where |I| = sum i * n_i.  Monomials of weight above the order D
are dropped, matching the truncation of the t-ring.
"""

from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache
from typing import Mapping

from .algebra import Element
from .beauville_model import (
    BeauvilleAlgebra,
    fourier,
    fourier_hat,
    mult_pullback,
    mult_pushforward,
)
from .coeff_ring import DEFAULT_ORDER, TPoly, canonical_tau, mono_mul, monomials_up_to, twisted_c1, weight
from .formal_series import evaluate, kernel_series
from .report import Report


class OmegaClass:
    """x = sum over t-monomials I of t^I x_I, with x_I a model element."""

    __slots__ = ("model", "terms", "order")

    def __init__(self, model: BeauvilleAlgebra, terms: Mapping[tuple, Element] | None = None,
                 order: int = DEFAULT_ORDER):
        self.model = model
        self.order = order
        clean = {}
        for mono, el in (terms or {}).items():
            if el.algebra is not model:
                raise ValueError(f"term over {el.algebra.name}, expected {model.name}")
            mono = tuple(mono)
            while mono and mono[-1] == 0:
                mono = mono[:-1]
            if weight(mono) > order or not el:
                continue
            clean[mono] = clean[mono] + el if mono in clean else el
            if not clean[mono]:
                del clean[mono]
        self.terms = clean

    @classmethod
    def from_element(cls, x: Element, order: int = DEFAULT_ORDER) -> "OmegaClass":
        return cls(x.algebra, {(): x}, order)

    @classmethod
    def basis_class(cls, model, i: int, order: int = DEFAULT_ORDER) -> "OmegaClass":
        return cls(model, {(): model.basis_element(i)}, order)

    @classmethod
    def one(cls, model, order: int = DEFAULT_ORDER) -> "OmegaClass":
        return cls(model, {(): model.one()}, order)

    def _like(self, terms) -> "OmegaClass":
        return OmegaClass(self.model, terms, self.order)

    def _check(self, other: "OmegaClass") -> None:
        if other.model is not self.model:
            raise ValueError(f"classes on different models: {self.model.name} vs {other.model.name}")
        if other.order != self.order:
            raise ValueError(f"mixing truncation orders {self.order} and {other.order}")

    def __add__(self, other):
        if isinstance(other, OmegaClass):
            self._check(other)
            terms = dict(self.terms)
            for mono, el in other.terms.items():
                terms[mono] = terms[mono] + el if mono in terms else el
            return self._like(terms)
        if not other:
            return self
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return self._like({m: -el for m, el in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "OmegaClass":
        return self._like({m: el.scale(c) for m, el in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, OmegaClass):
            self._check(other)
            terms: dict = {}
            for m1, a in self.terms.items():
                for m2, b in other.terms.items():
                    m = mono_mul(m1, m2)
                    if weight(m) > self.order:
                        continue
                    prod = a * b
                    terms[m] = terms[m] + prod if m in terms else prod
            return self._like(terms)
        return self.scale(other)

    __rmul__ = scale

    def times_monomial(self, mono: tuple) -> "OmegaClass":
        return self._like({mono_mul(mono, m): el for m, el in self.terms.items()})

    def map_terms(self, fn, model=None) -> "OmegaClass":
        """Apply a linear map of model elements to every x_I."""
        return OmegaClass(model or self.model, {m: fn(el) for m, el in self.terms.items()}, self.order)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, OmegaClass):
            return (other.model is self.model and other.order == self.order
                    and not (self - other).terms)
        if isinstance(other, (int, Fraction)) and other == 0:
            return not self.terms
        return NotImplemented

    __hash__ = None

    def bidegrees(self) -> set[tuple[int, int]]:
        out = set()
        for mono, el in self.terms.items():
            w = weight(mono)
            for k in el.coeffs:
                p, s = self.model.bidegree(k)
                out.add((p - w, s - 2 * w))
        return out

    def codimensions(self) -> set[int]:
        return {p for p, _ in self.bidegrees()}

    def specialize_t(self) -> Element:
        """Set every t_i to zero."""
        return self.terms.get((), self.model.zero())

    def __repr__(self):
        from .formatting import format_class

        return f"<Omega {self.model.name}: {format_class(self)}>"


# ---------------------------------------------------------------------------
# psi


def psi(x: OmegaClass) -> Element:
    """The CH[t]-image: one model element with TPoly coefficients."""
    out: dict = {}
    for mono, el in x.terms.items():
        t = TPoly({mono: Fraction(1)}, x.order)
        for k, c in el.coeffs.items():
            term = t * c
            out[k] = out[k] + term if k in out else term
    return Element(x.model, out)


def psi_inv(y: Element, order: int = DEFAULT_ORDER) -> OmegaClass:
    terms: dict = {}
    for k, c in y.coeffs.items():
        if not isinstance(c, TPoly):
            c = TPoly.const(c, order)
        elif c.order != order:
            raise ValueError(f"coefficient has truncation order {c.order}, expected {order}")
        for mono, v in c.items():
            terms.setdefault(mono, {})[k] = v
    return OmegaClass(y.algebra, {m: Element(y.algebra, v) for m, v in terms.items()}, order)


# ---------------------------------------------------------------------------
# Fourier transforms


def fourier_via_psi(x: OmegaClass) -> OmegaClass:
    """Apply the Chow-level Fourier matrix to each t-monomial coefficient."""
    B = x.model
    return x.map_terms(lambda el: fourier(B, el), model=B.dual)


def fourier_hat_via_psi(y: OmegaClass, model: BeauvilleAlgebra) -> OmegaClass:
    """Dual transform from classes on the dual of ``model`` back to ``model``."""
    return y.map_terms(lambda el: fourier_hat(model, el), model=model)


@lru_cache(maxsize=None)
def kernel_class(B: BeauvilleAlgebra, order: int) -> Element:
    """G(c1^Omega(P)) in the kernel ambient, coefficients in the t-ring.

    c1^Omega(P) is the twisted first Chern class lambda_(t)(c1) and G is
    exp(l_(t)).  The series are taken to the larger of D and the nilpotency
    index of c1 so that no power of c1 is lost.
    """
    K = B.kernel_data
    c1 = K.c1.map_coefficients(lambda c: TPoly.const(c, order))
    c_omega = twisted_c1(canonical_tau(order), c1)
    series_order = max(order, K.nilpotency())
    G = kernel_series(series_order, order)
    return evaluate(G, c_omega)


def fourier_via_kernel(x: OmegaClass) -> OmegaClass:
    """Realization p2_*(p1^* psi(x) . G(c1^Omega(P))) computed in the ambient."""
    B = x.model
    K = B.kernel_data
    Kt = kernel_class(B, x.order)
    pulled = K.pull(psi(x).coeffs)
    image = K.push(pulled * Kt)
    return psi_inv(Element(B.dual, image), x.order)


def chow_kernel_transform(B: BeauvilleAlgebra, x: Element) -> Element:
    """t = 0 degeneration: p2_*(p1^* x . exp(c1(P)))."""
    from .beauville_model import kernel_realization

    return kernel_realization(B, x)


# ---------------------------------------------------------------------------
# t-linear extensions of model operators


def omega_pullback(x: OmegaClass, n: int) -> OmegaClass:
    return x.map_terms(lambda el: mult_pullback(x.model, n, el))


def omega_pushforward(x: OmegaClass, n: int) -> OmegaClass:
    return x.map_terms(lambda el: mult_pushforward(x.model, n, el))


def omega_sigma(x: OmegaClass) -> OmegaClass:
    return omega_pullback(x, -1)


def omega_pontryagin(x: OmegaClass, y: OmegaClass) -> OmegaClass:
    """t-bilinear extension of the Pontryagin product."""
    from .beauville_model import pontryagin

    x._check(y)
    terms: dict = {}
    for m1, a in x.terms.items():
        for m2, b in y.terms.items():
            m = mono_mul(m1, m2)
            if weight(m) > x.order:
                continue
            prod = pontryagin(x.model, a, b)
            terms[m] = terms[m] + prod if m in terms else prod
    return OmegaClass(x.model, terms, x.order)


# ---------------------------------------------------------------------------
# Beauville decomposition


def beauville_decompose(x: OmegaClass) -> dict[tuple[int, int], OmegaClass]:
    """Split x by induced bidegree (p, s); keys sorted."""
    B = x.model
    parts: dict = {}
    for mono, el in x.terms.items():
        w = weight(mono)
        for k, c in el.coeffs.items():
            p, s = B.bidegree(k)
            parts.setdefault((p - w, s - 2 * w), {}).setdefault(mono, {})[k] = c
    return {ps: OmegaClass(B, {m: Element(B, v) for m, v in terms.items()}, x.order)
            for ps, terms in sorted(parts.items())}


def within_bounds(p: int, s: int, g: int) -> bool:
    return 2 * p - 2 * g <= s <= min(2 * p, p)


def is_eigenvector(x: OmegaClass, n: int, eigenvalue) -> bool:
    return omega_pullback(x, n) == x.scale(eigenvalue)


PURE_CLASS_CONDITIONS = (
    "fourier-codimension",
    "eigenvector-all-n",
    "pullback-eigenvalue",
    "pushforward-eigenvalue",
    "fourier-bidegree",
)


def check_pure_class(x: OmegaClass, m: int, bidegree: tuple[int, int] | None = None,
                     label: str = "") -> Report:
    """The five equivalent conditions for a pure class of bidegree (p, s).

    With q = g - p + s they are: F(x) lies in codimension q; x is an
    n*-eigenvector with eigenvalue n^(2p-s) for n in {2, 3, 5, m}; the same
    for m* alone; m_* x = m^(2g-2p+s) x; F(x) has bidegree (q, s).

    Each condition is evaluated on its own, and any disagreement among them
    is reported as an inconsistency.
    """
    if m in (-1, 0, 1):
        raise ValueError("m must be an integer other than 0, 1, -1")
    B = x.model
    g = B.g
    name = label or B.name
    rep = Report()
    if bidegree is None:
        degs = x.bidegrees()
        if len(degs) > 1:
            raise ValueError(f"class is not of pure bidegree: {sorted(degs)}")
        if not degs:
            for cond in PURE_CLASS_CONDITIONS:
                rep.add(True, f"pure-class-{cond}", name, "zero class")
            return rep
        bidegree = next(iter(degs))
    p, s = bidegree
    Fx = fourier_via_psi(x)
    q = g - p + s
    conds = [
        Fx.codimensions() <= {q},
        all(is_eigenvector(x, n, Fraction(n) ** (2 * p - s)) for n in (2, 3, 5, m)),
        omega_pullback(x, m) == x.scale(Fraction(m) ** (2 * p - s)),
        omega_pushforward(x, m) == x.scale(Fraction(m) ** (2 * g - 2 * p + s)),
        Fx.bidegrees() <= {(q, s)},
    ]
    for cond, ok in zip(PURE_CLASS_CONDITIONS, conds):
        rep.add(ok, f"pure-class-{cond}", name, f"(p,s)=({p},{s}) m={m}")
    rep.add(len(set(conds)) == 1, "pure-class-equivalence", name, f"(p,s)=({p},{s})")
    return rep


# ---------------------------------------------------------------------------
# random classes


def random_rational(rng: random.Random, size: int = 5) -> Fraction:
    num = rng.randint(-size, size)
    return Fraction(num, rng.randint(1, 3))


def random_class(model: BeauvilleAlgebra, order: int = DEFAULT_ORDER, rng: random.Random | None = None,
                 terms: int = 4, max_weight: int | None = None) -> OmegaClass:
    """A reproducible random class with a few t-monomials and small rationals."""
    rng = rng or random.Random(0)
    monos = [m for m in monomials_up_to(order) if max_weight is None or weight(m) <= max_weight]
    out: dict = {}
    for _ in range(terms):
        mono = rng.choice(monos) if rng.random() < 0.6 else ()
        coeffs = {rng.randrange(model.dim): random_rational(rng) for _ in range(rng.randint(1, 3))}
        el = Element(model, coeffs)
        out[mono] = out[mono] + el if mono in out else el
    return OmegaClass(model, out, order)


def parse_class(text: str, model: BeauvilleAlgebra, order: int = DEFAULT_ORDER) -> OmegaClass:
    from .expr import parse_expression

    return psi_inv(parse_expression(text, model, order), order)


def format_omega(x: OmegaClass) -> str:
    from .formatting import format_class

    return format_class(x)

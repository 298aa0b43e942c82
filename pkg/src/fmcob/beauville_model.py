"""Finite bigraded models of CH_Q(A) for an abelian variety A of dimension g.

A model is a finite-dimensional Q-algebra whose basis elements carry a
codimension p and a weight s, with n* acting on B^p_s by n^(2p-s).  It also
carries the degree functional (pushforward to a point) and the matrix of the
Fourier transform.  Built-in models:

* ``taut(g)``: span of theta^p/p!, all weights zero;
* ``ext_oracle(g)``: the exterior algebra H*(A), with a brute-force Fourier
  transform computed from c1 of the Poincare bundle; used as the sign oracle;
* ``ell_rk1()``: an elliptic curve with one point class of weight 1;
* ``tensor_product(B1, B2)``: the model of a product.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from typing import Callable, Mapping, Sequence

import sympy

from .algebra import Element, TableAlgebra
from .kernel import (
    ExteriorKernel,
    KernelData,
    ProductKernel,
    TableKernel,
    log_unipotent,
    tensor_ambient,
)
from .report import Report

ModelElement = Element


@dataclass(frozen=True)
class BasisLabel:
    name: str
    p: int
    s: int


class ModelError(ValueError):
    pass


class BeauvilleAlgebra(TableAlgebra):
    """Bigraded model of CH_Q(A) with degree functional and Fourier matrix.

    ``fourier[i]`` is the image of basis element i, as ``{index: coeff}`` over
    the basis of the dual model.  Without an explicit ``dual`` the dual
    abelian variety is identified with A and the dual transform equals
    ``fourier``.
    """

    def __init__(self, g: int, basis: Sequence[BasisLabel], mult: Mapping,
                 degree: Mapping[int, Fraction], fourier: Sequence[Mapping] | None = None,
                 selfdual: bool = True, name: str = "model", *,
                 fourier_hat: Sequence[Mapping] | None = None,
                 star: Mapping | None = None, diagonal: Mapping | None = None,
                 kernel: KernelData | Callable[[], KernelData] | None = None,
                 factors: tuple | None = None):
        if g < 1:
            raise ModelError(f"dimension must be positive, got {g}")
        self.g = g
        self.labels = list(basis)
        names = [b.name for b in self.labels]
        if len(set(names)) != len(names):
            raise ModelError("duplicate basis names")
        try:
            unit = names.index("1")
        except ValueError:
            raise ModelError("the unit basis element must be named '1'") from None
        super().__init__(names, [b.s & 1 for b in self.labels], mult, unit=unit, name=name)
        self.degree_map = {i: Fraction(v) for i, v in degree.items() if v}
        self.fourier = [dict(r) for r in fourier] if fourier is not None else None
        self.selfdual = selfdual
        self.star = {k: dict(v) for k, v in star.items()} if star else None
        self.diagonal = dict(diagonal) if diagonal else None
        self.factors = factors
        self._dual = None
        self._fourier_hat = [dict(r) for r in fourier_hat] if fourier_hat is not None else None
        self._kernel = kernel

    # ---- grading --------------------------------------------------------
    def p(self, i: int) -> int:
        return self.labels[i].p

    def s(self, i: int) -> int:
        return self.labels[i].s

    def bidegree(self, i: int) -> tuple[int, int]:
        return self.labels[i].p, self.labels[i].s

    def weight(self, i: int) -> int:
        """Exponent of n in n*: 2p - s."""
        return 2 * self.labels[i].p - self.labels[i].s

    def key_order(self, key):
        return key

    # ---- duality --------------------------------------------------------
    @property
    def dual(self) -> "BeauvilleAlgebra":
        return self._dual if self._dual is not None else self

    @property
    def has_distinct_dual(self) -> bool:
        return self._dual is not None and self._dual is not self

    @property
    def fourier_hat(self) -> list[dict] | None:
        if self._fourier_hat is not None:
            return self._fourier_hat
        return self.fourier if not self.has_distinct_dual else None

    def attach_dual(self, dual: "BeauvilleAlgebra", fourier_hat: Sequence[Mapping]) -> None:
        """Link a distinct dual model; its Fourier data is the reverse pair."""
        self._dual = dual
        self._fourier_hat = [dict(r) for r in fourier_hat]
        dual._dual = self
        dual.fourier = [dict(r) for r in fourier_hat]
        dual._fourier_hat = self.fourier

    # ---- kernel ---------------------------------------------------------
    @property
    def kernel_data(self) -> KernelData:
        if callable(self._kernel) and not isinstance(self._kernel, KernelData):
            self._kernel = self._kernel()
        if self._kernel is None:
            if not self.selfdual or self.fourier is None or not is_perfect(self):
                raise ModelError(f"model {self.name} has no kernel data")
            self._kernel = surrogate_kernel(self)
        return self._kernel

    @property
    def has_kernel_data(self) -> bool:
        # the surrogate needs a dual basis, hence a perfect pairing
        return self._kernel is not None or (
            self.selfdual and self.fourier is not None and is_perfect(self))

    # ---- elements -------------------------------------------------------
    def basis_index(self, name: str) -> int:
        try:
            return self.index[name]
        except KeyError:
            raise KeyError(f"unknown basis element {name!r} in {self.name}") from None

    def from_names(self, coeffs: Mapping[str, object]) -> Element:
        return Element(self, {self.basis_index(n): Fraction(c) if isinstance(c, int) else c
                              for n, c in coeffs.items()})

    def basis(self) -> list[Element]:
        return [self.basis_element(i) for i in self.keys()]

    def same_data(self, other: "BeauvilleAlgebra") -> bool:
        """Equality of everything a model file records."""
        def tables(B):
            return {k: v for k, v in B.table.items() if v}
        return (
            self.g == other.g and self.labels == other.labels
            and tables(self) == tables(other) and self.degree_map == other.degree_map
            and self.fourier == other.fourier and self.selfdual == other.selfdual
            and (self.star or None) == (other.star or None)
            and (self.diagonal or None) == (other.diagonal or None)
        )

    def __repr__(self):
        return f"<BeauvilleAlgebra {self.name} g={self.g} dim={self.dim}>"


# ---------------------------------------------------------------------------
# linear operators on model elements


def _apply_rows(rows: Sequence[Mapping], x: Element, target) -> Element:
    out: dict = {}
    for i, c in x.coeffs.items():
        for j, v in rows[i].items():
            term = c * v
            if j in out:
                term = out[j] + term
            if term:
                out[j] = term
            else:
                out.pop(j, None)
    return Element._raw(target, out)


def _scale_by_weight(x: Element, factor: Callable[[int], int]) -> Element:
    return Element._raw(x.algebra, {i: c * factor(i) for i, c in x.coeffs.items()})


def fourier(B: BeauvilleAlgebra, x: Element) -> Element:
    """F: CH(A) -> CH(A^) from the model's Fourier matrix."""
    if B.fourier is None:
        raise ModelError(f"model {B.name} has no Fourier data")
    return _apply_rows(B.fourier, x, B.dual)


def fourier_hat(B: BeauvilleAlgebra, y: Element) -> Element:
    """The dual transform CH(A^) -> CH(A)."""
    rows = B.fourier_hat
    if rows is None:
        raise ModelError(f"model {B.name} has no dual Fourier data")
    return _apply_rows(rows, y, B)


def mult_pullback(B: BeauvilleAlgebra, n: int, x: Element) -> Element:
    """n* scales B^p_s by n^(2p - s)."""
    return _scale_by_weight(x, lambda i: n ** B.weight(i))


def mult_pushforward(B: BeauvilleAlgebra, n: int, x: Element) -> Element:
    """n_* scales B^p_s by n^(2g - 2p + s)."""
    return _scale_by_weight(x, lambda i: n ** (2 * B.g - B.weight(i)))


def sigma(B: BeauvilleAlgebra, x: Element) -> Element:
    """(-1)*: acts on B^p_s by (-1)^s."""
    return mult_pullback(B, -1, x)


def pontryagin(B: BeauvilleAlgebra, x: Element, y: Element) -> Element:
    """x * y = (-1)^g sigma^* F^(F(x) F(y)), landing in B^(p+q-g)_(s+t)."""
    fx, fy = fourier(B, x), fourier(B, y)
    z = fourier_hat(B, fx * fy)
    return sigma(B, z).scale((-1) ** B.g)


def pontryagin_from_table(B: BeauvilleAlgebra, x: Element, y: Element) -> Element:
    if B.star is None:
        raise ModelError(f"model {B.name} has no explicit Pontryagin table")
    out = B.zero()
    for a, ca in x.coeffs.items():
        for b, cb in y.coeffs.items():
            out = out + Element(B, B.star.get((a, b), {})).scale(ca * cb)
    return out


def degree(B: BeauvilleAlgebra, x: Element):
    total = 0
    for i, c in x.coeffs.items():
        v = B.degree_map.get(i)
        if v:
            total = total + c * v
    return total


def pairing(B: BeauvilleAlgebra, x: Element, y: Element):
    return degree(B, x * y)


def components(B: BeauvilleAlgebra, x: Element) -> dict[tuple[int, int], Element]:
    out: dict = {}
    for i, c in x.coeffs.items():
        out.setdefault(B.bidegree(i), {})[i] = c
    return {k: Element(B, v) for k, v in sorted(out.items())}


def gram_matrix(B: BeauvilleAlgebra) -> list[list[Fraction]]:
    n = B.dim
    G = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            G[i][j] = Fraction(pairing(B, B.basis_element(i), B.basis_element(j)))
    return G


def to_sympy(M) -> sympy.Matrix:
    return sympy.Matrix([[sympy.Rational(c.numerator, c.denominator) for c in row] for row in M])


def from_sympy(M: sympy.Matrix) -> list[list[Fraction]]:
    return [[Fraction(int(sympy.fraction(M[i, j])[0]), int(sympy.fraction(M[i, j])[1]))
             for j in range(M.cols)] for i in range(M.rows)]


def is_perfect(B: BeauvilleAlgebra) -> bool:
    return to_sympy(gram_matrix(B)).rank() == B.dim


@lru_cache(maxsize=None)
def _inverse_gram(B: BeauvilleAlgebra) -> tuple:
    G = to_sympy(gram_matrix(B))
    if G.rank() != B.dim:
        raise ModelError(f"pairing on {B.name} is not perfect")
    return tuple(tuple(row) for row in from_sympy(G.inv()))


def dual_basis(B: BeauvilleAlgebra) -> list[Element]:
    """d_i with <b_k, d_i> = delta_ki."""
    inv = _inverse_gram(B)
    return [Element(B, {m: inv[m][i] for m in range(B.dim)}) for i in range(B.dim)]


def numerical_kernel_basis(B: BeauvilleAlgebra) -> list[Element]:
    """Basis (reduced echelon form) of {x : deg(x y) = 0 for all y}."""
    G = to_sympy(gram_matrix(B))
    # x = sum a_i b_i is trivial iff a^T G = 0
    null = G.T.nullspace()
    if not null:
        return []
    M = sympy.Matrix.hstack(*null).T.rref()[0]
    rows = from_sympy(M)
    return [Element(B, {i: c for i, c in enumerate(row) if c}) for row in rows if any(row)]


# ---------------------------------------------------------------------------
# built-in models


def _taut_labels(g: int) -> list[BasisLabel]:
    return [BasisLabel("1" if p == 0 else ("theta" if p == 1 else f"theta{p}"), p, 0)
            for p in range(g + 1)]


def _taut_mult(g: int) -> dict:
    # (theta^a/a!)(theta^b/b!) = C(a+b, a) theta^(a+b)/(a+b)!
    return {(a, b): {a + b: Fraction(math.comb(a + b, a))}
            for a in range(g + 1) for b in range(g + 1) if a + b <= g}


def _theta_embedding(g: int) -> list[dict]:
    """theta^p/p! in H*(A) = sum over p-subsets S of prod_{i in S} x_i y_i."""
    out = []
    for p in range(g + 1):
        terms = {}
        for S in combinations(range(g), p):
            terms[sum(3 << (2 * i) for i in S)] = Fraction(1)
        out.append(terms)
    return out


def _theta_restriction(g: int):
    """Inverse of the theta embedding on its image; raises off the image."""
    pair_masks = {}
    for p in range(g + 1):
        for S in combinations(range(g), p):
            pair_masks[sum(3 << (2 * i) for i in S)] = p

    def extract(coeffs: dict) -> dict:
        out: dict = {}
        for mask, c in coeffs.items():
            if mask not in pair_masks:
                raise ModelError("class is not in the theta-power subalgebra")
            p = pair_masks[mask]
            if p in out and out[p] != c:
                raise ModelError("class is not in the theta-power subalgebra")
            out[p] = c
        for p, c in out.items():
            if sum(1 for m, q in pair_masks.items() if q == p and m in coeffs) != math.comb(g, p):
                raise ModelError("class is not in the theta-power subalgebra")
        return {p: c for p, c in out.items() if c}

    return extract


def _ext_masks(g: int) -> list[int]:
    return sorted(range(1 << (2 * g)), key=lambda m: (bin(m).count("1"), [i for i in range(2 * g) if m >> i & 1]))


def _ext_name(g: int, mask: int) -> str:
    if mask == 0:
        return "1"
    gens = []
    for i in range(g):
        gens += [f"x{i + 1}", f"y{i + 1}"]
    return "".join(gens[i] for i in range(2 * g) if mask >> i & 1)


def _exp_element(c: Element) -> Element:
    total, power, k = c.algebra.one(), c.algebra.one(), 1
    while True:
        power = power * c
        if not power:
            return total
        total = total + power.scale(Fraction(1, math.factorial(k)))
        k += 1


@lru_cache(maxsize=None)
def ext_oracle(g: int) -> BeauvilleAlgebra:
    """Exterior algebra H*(A) on x1, y1, ..., xg, yg with Fourier from first principles.

    x_i sits in (p, s) = (0, -1) and y_i in (1, 1), so a monomial with a
    x's and b y's has bidegree (b, b - a) and n* acts by n^(a+b).  theta is
    sum x_i y_i and deg(x1 y1 ... xg yg) = 1.  F(x) = p2_*(p1^* x . exp(c1(P)))
    is evaluated in the exterior algebra of A x A.
    """
    if g < 1:
        raise ModelError(f"dimension must be positive, got {g}")
    masks = _ext_masks(g)
    index = {m: i for i, m in enumerate(masks)}
    labels = []
    for m in masks:
        a = sum(1 for i in range(g) if m >> (2 * i) & 1)
        b = sum(1 for i in range(g) if m >> (2 * i + 1) & 1)
        labels.append(BasisLabel(_ext_name(g, m), b, b - a))
    from .algebra import exterior_sign

    mult = {}
    for m1, m2 in product(masks, repeat=2):
        if m1 & m2 == 0:
            mult[index[m1], index[m2]] = {index[m1 | m2]: Fraction(exterior_sign(m1, m2))}
    top = (1 << (2 * g)) - 1
    kernel = ExteriorKernel(
        g,
        embed=[{m: Fraction(1)} for m in masks],
        extract=lambda coeffs: {index[m]: c for m, c in coeffs.items()},
    )
    E = _exp_element(kernel.c1)
    rows = [kernel.push(kernel.pull({i: Fraction(1)}) * E) for i in range(len(masks))]
    return BeauvilleAlgebra(g, labels, mult, {index[top]: Fraction(1)}, rows, True,
                            name=f"ext:{g}", kernel=kernel)


@lru_cache(maxsize=None)
def taut_fourier_signs(g: int) -> tuple[int, ...]:
    """eps_p with F(theta^p/p!) = eps_p theta^(g-p)/(g-p)!, read off the oracle."""
    E = ext_oracle(g)
    embed = _theta_embedding(g)
    extract = _theta_restriction(g)
    masks = _ext_masks(g)
    index = {m: i for i, m in enumerate(masks)}
    signs = []
    for p in range(g + 1):
        x = Element(E, {index[m]: c for m, c in embed[p].items()})
        image = fourier(E, x)
        restricted = extract({masks[i]: c for i, c in image.coeffs.items()})
        if set(restricted) != {g - p} or abs(restricted[g - p]) != 1:
            raise ModelError(f"oracle image of theta^{p}/{p}! is not +-theta^{g - p}/{g - p}!")
        signs.append(int(restricted[g - p]))
    return tuple(signs)


@lru_cache(maxsize=None)
def taut(g: int) -> BeauvilleAlgebra:
    """Tautological model: basis theta^p/p! (named 1, theta, theta2, ...)."""
    if g < 1:
        raise ModelError(f"dimension must be positive, got {g}")
    signs = taut_fourier_signs(g)
    fourier_rows = [{g - p: Fraction(signs[p])} for p in range(g + 1)]
    embed = _theta_embedding(g)
    extract = _theta_restriction(g)
    return BeauvilleAlgebra(
        g, _taut_labels(g), _taut_mult(g), {g: Fraction(1)}, fourier_rows, True,
        name=f"taut:{g}", kernel=lambda: ExteriorKernel(g, embed, extract),
    )


def ell_rk1() -> BeauvilleAlgebra:
    """The shipped elliptic model with a weight-one point class pi(P)."""
    from .model_io import load_builtin_file

    return load_builtin_file("ell-rk1.model")


@lru_cache(maxsize=None)
def tensor_product(B1: BeauvilleAlgebra, B2: BeauvilleAlgebra) -> BeauvilleAlgebra:
    """Model of A1 x A2: Koszul-signed tensor algebra, Fourier F1 (x) F2."""
    n1, n2 = B1.dim, B2.dim
    pairs = [(i, j) for i in range(n1) for j in range(n2)]
    idx = {pr: k for k, pr in enumerate(pairs)}

    def name(i, j):
        a, b = B1.names[i], B2.names[j]
        if a == "1" and b == "1":
            return "1"
        return f"{a}|{b}"

    labels = [BasisLabel(name(i, j), B1.p(i) + B2.p(j), B1.s(i) + B2.s(j)) for i, j in pairs]
    mult = {}
    for (a, b), (c, d) in product(pairs, repeat=2):
        left, right = B1.mul_basis(a, c), B2.mul_basis(b, d)
        if not left or not right:
            continue
        sign = -1 if (B2.parity(b) and B1.parity(c)) else 1
        mult[idx[a, b], idx[c, d]] = {idx[k1, k2]: sign * v1 * v2
                                      for k1, v1 in left.items() for k2, v2 in right.items()}
    deg = {}
    for (i, j) in pairs:
        v = B1.degree_map.get(i, 0) * B2.degree_map.get(j, 0)
        if v:
            deg[idx[i, j]] = v
    rows = None
    if B1.fourier is not None and B2.fourier is not None:
        rows = [{idx[k1, k2]: v1 * v2 for k1, v1 in B1.fourier[i].items()
                 for k2, v2 in B2.fourier[j].items()} for i, j in pairs]
    kernel = None
    if B1.has_kernel_data and B2.has_kernel_data:
        kernel = lambda: ProductKernel(B1.kernel_data, B2.kernel_data, pairs, idx)
    out = BeauvilleAlgebra(B1.g + B2.g, labels, mult, deg, rows,
                           B1.selfdual and B2.selfdual, name=f"{B1.name}(x){B2.name}",
                           kernel=kernel, factors=(B1, B2))
    return out


def surrogate_kernel(B: BeauvilleAlgebra) -> TableKernel:
    """Kernel for a self-dual model without geometric kernel data.

    K = sum_i d_i (x) F(b_i) realizes F through the pairing; c1 := log K,
    which needs K - 1 nilpotent.  This stands in for c1(P) when the model
    does not contain the Poincare class.
    """
    D = B.dual
    amb = tensor_ambient(B.names, [B.parity(i) for i in B.keys()], B.mul_basis,
                         D.names, [D.parity(i) for i in D.keys()], D.mul_basis,
                         units=(B.unit_key, D.unit_key), name=f"{B.name}x{D.name}")
    n2 = D.dim
    K: dict = {}
    for i, d in enumerate(dual_basis(B)):
        for m, cm in d.coeffs.items():
            for j, cj in B.fourier[i].items():
                key = m * n2 + j
                K[key] = K.get(key, 0) + cm * cj
    K_el = Element(amb, K)
    one = amb.one()
    power, steps = K_el - one, 0
    while power:
        power = power * (K_el - one)
        steps += 1
        if steps > 4 * B.g + 2:
            raise ModelError(f"surrogate kernel of {B.name} is not unipotent")
    c1 = log_unipotent(K_el)
    pull = [{i * n2 + D.unit_key: Fraction(1)} for i in range(B.dim)]
    push = {}
    for i in range(B.dim):
        dv = B.degree_map.get(i)
        if dv:
            for j in range(n2):
                push[i * n2 + j] = {j: dv}
    return TableKernel(amb, pull, push, c1.coeffs)


def kernel_realization(B: BeauvilleAlgebra, x: Element) -> Element:
    """Chow-level transform p2_*(p1^* x . exp(c1(P))) through the kernel data."""
    K = B.kernel_data
    E = _exp_element(K.c1)
    return Element(B.dual, K.push(K.pull(x.coeffs) * E))


# ---------------------------------------------------------------------------
# validation


def _fmt(x: Element) -> str:
    from .formatting import format_element

    return format_element(x)


def _triples(B: BeauvilleAlgebra, limit: int, seed: int = 0):
    n = B.dim
    if n ** 3 <= limit:
        return product(range(n), repeat=3)
    rng = random.Random(seed)
    return [(rng.randrange(n), rng.randrange(n), rng.randrange(n)) for _ in range(limit)]


def validate(B: BeauvilleAlgebra, *, full: bool = True) -> Report:
    """Check every model invariant; never raises on a violated identity."""
    rep = Report()
    name, g = B.name, B.g
    basis = B.basis()

    bad = [f"{l.name}:({l.p},{l.s})" for l in B.labels
           if not (0 <= l.p <= g and 2 * l.p - 2 * g <= l.s <= min(2 * l.p, l.p))]
    rep.add(not bad, "bidegree-bounds", name, ", ".join(bad))

    u = B.unit_key
    rep.add(B.bidegree(u) == (0, 0), "unit-bidegree", name, f"1:{B.bidegree(u)}")

    bad = []
    for (i, j), prod_ in sorted(B.table.items()):
        target = (B.p(i) + B.p(j), B.s(i) + B.s(j))
        for k in prod_:
            if B.bidegree(k) != target:
                bad.append(f"{B.names[i]}*{B.names[j]}")
    rep.add(not bad, "product-bidegree", name, ", ".join(bad[:5]))

    bad = []
    for i, j, k in _triples(B, 30000):
        x, y, z = basis[i], basis[j], basis[k]
        if (x * y) * z != x * (y * z):
            bad.append(f"({B.names[i]},{B.names[j]},{B.names[k]})")
            break
    rep.add(not bad, "associativity", name, ", ".join(bad))

    bad = []
    for i, j in product(range(B.dim), repeat=2):
        sign = -1 if (B.parity(i) and B.parity(j)) else 1
        if basis[i] * basis[j] != (basis[j] * basis[i]).scale(sign):
            bad.append(f"{B.names[i]},{B.names[j]}")
    rep.add(not bad, "graded-commutativity", name, ", ".join(bad[:5]))

    bad = [B.names[i] for i in B.degree_map if B.bidegree(i) != (g, 0)]
    rep.add(not bad, "degree-support", name, ", ".join(bad))

    perfect = is_perfect(B)
    if B.selfdual:
        rep.add(perfect, "self-dual", name, "" if perfect else "not self-dual: pairing is degenerate")

    if B.fourier is None:
        rep.add(False, "fourier-data", name, "model lacks Fourier data")
        return rep
    _validate_fourier(B, rep)
    if B.has_distinct_dual:
        _validate_fourier(B.dual, rep)

    # F carries numerically trivial classes to numerically trivial ones
    ker = numerical_kernel_basis(B)
    D = B.dual
    bad = []
    for v in ker:
        fv = fourier(B, v)
        if any(pairing(D, fv, y) for y in D.basis()):
            bad.append(_fmt(v))
    rep.add(not bad, "fourier-preserves-numerical-kernel", name, ", ".join(bad))

    if B.star is not None:
        bad = [f"{B.names[i]},{B.names[j]}" for i, j in product(range(B.dim), repeat=2)
               if pontryagin(B, basis[i], basis[j]) != pontryagin_from_table(B, basis[i], basis[j])]
        rep.add(not bad, "star-table", name, ", ".join(bad[:5]))

    if full and B.has_kernel_data:
        _validate_kernel(B, rep)

    if B.diagonal is not None:
        from .motives import check_declared_diagonal

        check_declared_diagonal(B, rep)
    return rep


def _validate_fourier(B: BeauvilleAlgebra, rep: Report) -> None:
    name, g = B.name, B.g
    D = B.dual
    basis = B.basis()
    sg = (-1) ** g

    bad = []
    for i, x in enumerate(basis):
        p, s = B.bidegree(i)
        for k in fourier(B, x).coeffs:
            if D.bidegree(k) != (g - p + s, s):
                bad.append(B.names[i])
    rep.add(not bad, "fourier-bidegree", name, ", ".join(bad))

    bad = [B.names[i] for i, x in enumerate(basis)
           if fourier_hat(B, fourier(B, x)) != sigma(B, x).scale(sg)]
    rep.add(not bad, "fourier-inversion", name, ", ".join(bad))

    bad = []
    for i, j in product(range(B.dim), repeat=2):
        x, y = basis[i], basis[j]
        if fourier(B, pontryagin(B, x, y)) != fourier(B, x) * fourier(B, y):
            bad.append(f"star:{B.names[i]},{B.names[j]}")
        if fourier(B, x * y) != pontryagin(D, fourier(B, x), fourier(B, y)).scale(sg):
            bad.append(f"product:{B.names[i]},{B.names[j]}")
    rep.add(not bad, "fourier-exchange", name, ", ".join(bad[:5]))

    bad = []
    for m in (2, 3, -2):
        for i, x in enumerate(basis):
            if fourier(B, mult_pushforward(B, m, x)) != mult_pullback(D, m, fourier(B, x)):
                bad.append(f"m={m}:{B.names[i]}")
            if fourier(B, mult_pullback(B, m, x)) != mult_pushforward(D, m, fourier(B, x)):
                bad.append(f"m={m}*:{B.names[i]}")
    rep.add(not bad, "fourier-isogeny", name, ", ".join(bad[:5]))

    bad = []
    for n in (-2, -1, 2, 3):
        for i, x in enumerate(basis):
            if mult_pullback(B, n, mult_pushforward(B, n, x)) != x.scale(n ** (2 * g)):
                bad.append(f"n={n}:{B.names[i]}")
    rep.add(not bad, "pullback-pushforward", name, ", ".join(bad[:5]))

    bad = []
    for i, j in product(range(B.dim), repeat=2):
        target = (B.p(i) + B.p(j) - g, B.s(i) + B.s(j))
        z = pontryagin(B, basis[i], basis[j])
        if any(B.bidegree(k) != target for k in z.coeffs):
            bad.append(f"{B.names[i]},{B.names[j]}")
    rep.add(not bad, "star-bidegree", name, ", ".join(bad[:5]))


def _validate_kernel(B: BeauvilleAlgebra, rep: Report) -> None:
    name = B.name
    K = B.kernel_data
    amb = K.ambient
    if isinstance(amb, TableAlgebra):
        n = amb.dim
        keys = list(range(n))
        extras = [k for k in keys if "|" not in amb.names[k]]
        triples = product(keys, repeat=3) if n ** 3 <= 40000 else (
            t for t in product(keys, repeat=3) if any(k in extras for k in t))
        bad = []
        for a, b, c in triples:
            x, y, z = amb.basis_element(a), amb.basis_element(b), amb.basis_element(c)
            if (x * y) * z != x * (y * z):
                bad.append(f"({amb.names[a]},{amb.names[b]},{amb.names[c]})")
                break
        rep.add(not bad, "kernel-associativity", name, ", ".join(bad))
    bad = [B.names[i] for i, x in enumerate(B.basis())
           if kernel_realization(B, x) != fourier(B, x)]
    rep.add(not bad, "kernel-realization", name, ", ".join(bad))


def fourier_sign_search(B: BeauvilleAlgebra, magnitudes: Sequence[Mapping]) -> list[tuple[int, ...]]:
    """All sign vectors eps with F(b_i) = eps_i * magnitudes[i] passing validation.

    Used to pin Fourier signs of hand-written models by the identities
    rather than by literature conventions.
    """
    solutions = []
    for signs in product((1, -1), repeat=len(magnitudes)):
        rows = [{k: v * e for k, v in m.items()} for m, e in zip(magnitudes, signs)]
        trial = BeauvilleAlgebra(B.g, B.labels, B.table, B.degree_map, rows, B.selfdual,
                                 name=B.name)
        if validate(trial, full=False).ok:
            solutions.append(signs)
    return solutions

"""Correspondences on a model with perfect pairing, and canonical projectors.

A correspondence is an element a = sum a_ij b_i (x) b_j of B (x) B.  Its
realization pulls back from the first factor, multiplies and pushes to the
second: R(a)(b_k) = sum_ij <b_k, b_i> a_ij b_j.  In matrices, with G the
Gram matrix of the pairing, R(a) = G A, composition is
beta o alpha = A G B, and R(beta o alpha) = R(beta) o R(alpha).  No signs
arise in composition because the integrated top class is even; transposition
carries the Koszul sign (-1)^(|b_i||b_j|).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product

from .algebra import Element
from .beauville_model import (
    BeauvilleAlgebra,
    ModelError,
    _inverse_gram,
    gram_matrix,
    is_perfect,
    mult_pullback,
    tensor_product,
)
from .coeff_ring import DEFAULT_ORDER, TPoly
from .report import Report


class Correspondence:
    """Element of B (x) B read as a morphism from the first factor to the second."""

    __slots__ = ("model", "coeffs")

    def __init__(self, model: BeauvilleAlgebra, coeffs: dict):
        self.model = model
        self.coeffs = {k: c for k, c in coeffs.items() if c}

    @classmethod
    def from_element(cls, model: BeauvilleAlgebra, x: Element) -> "Correspondence":
        n = model.dim
        return cls(model, {divmod(k, n): c for k, c in x.coeffs.items()})

    def to_element(self) -> Element:
        n = self.model.dim
        T = tensor_square(self.model)
        return Element(T, {i * n + j: c for (i, j), c in self.coeffs.items()})

    def _check(self, other: "Correspondence") -> None:
        if other.model is not self.model:
            raise ValueError("correspondences on different models")

    def __add__(self, other):
        if isinstance(other, Correspondence):
            self._check(other)
            out = dict(self.coeffs)
            for k, c in other.coeffs.items():
                out[k] = out[k] + c if k in out else c
            return Correspondence(self.model, out)
        if not other:
            return self
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "Correspondence":
        return Correspondence(self.model, {k: v * c for k, v in self.coeffs.items()})

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, Correspondence):
            return other.model is self.model and not (self - other).coeffs
        if isinstance(other, int) and other == 0:
            return not self.coeffs
        return NotImplemented

    __hash__ = None

    def specialize_t(self) -> "Correspondence":
        """Set every t_i to zero."""
        return Correspondence(self.model, {k: c.constant() if isinstance(c, TPoly) else c
                                           for k, c in self.coeffs.items()})

    def bidegrees(self) -> set[tuple[int, int]]:
        B = self.model
        return {(B.p(i) + B.p(j), B.s(i) + B.s(j)) for i, j in self.coeffs}

    def __repr__(self):
        return f"<Correspondence {self.model.name}: {format_correspondence(self)}>"


def format_correspondence(a: Correspondence) -> str:
    from .formatting import format_element

    return format_element(a.to_element())


@lru_cache(maxsize=None)
def tensor_square(B: BeauvilleAlgebra) -> BeauvilleAlgebra:
    return tensor_product(B, B)


def _require_perfect(B: BeauvilleAlgebra) -> None:
    if not is_perfect(B):
        raise ModelError(f"pairing on {B.name} is not perfect")


@lru_cache(maxsize=None)
def _gram(B: BeauvilleAlgebra):
    return tuple(tuple(r) for r in gram_matrix(B))


def compose(beta: Correspondence, alpha: Correspondence) -> Correspondence:
    """beta o alpha: contract the middle factor through the pairing (A G B)."""
    beta._check(alpha)
    B = alpha.model
    _require_perfect(B)
    G = _gram(B)
    by_row: dict = {}
    for (k, l), c in beta.coeffs.items():
        by_row.setdefault(k, []).append((l, c))
    out: dict = {}
    for (i, j), a in alpha.coeffs.items():
        for k in range(B.dim):
            gjk = G[j][k]
            if not gjk:
                continue
            for l, b in by_row.get(k, ()):
                term = a * gjk * b
                out[i, l] = out[i, l] + term if (i, l) in out else term
    return Correspondence(B, out)


def realization(alpha: Correspondence):
    """R(alpha): x -> p2_*(p1^* x . alpha), as a function on model elements."""
    B = alpha.model
    G = _gram(B)

    def apply(x: Element) -> Element:
        out: dict = {}
        for k, ck in x.coeffs.items():
            for (i, j), a in alpha.coeffs.items():
                gki = G[k][i]
                if gki:
                    term = ck * gki * a
                    out[j] = out[j] + term if j in out else term
        return Element(B, out)

    return apply


def realization_matrix(alpha: Correspondence) -> list[list]:
    B = alpha.model
    R = realization(alpha)
    return [[R(B.basis_element(k)).coeffs.get(j, 0) for j in range(B.dim)] for k in range(B.dim)]


def transpose(alpha: Correspondence) -> Correspondence:
    B = alpha.model
    return Correspondence(B, {(j, i): (-c if B.parity(i) and B.parity(j) else c)
                              for (i, j), c in alpha.coeffs.items()})


def surrogate_diagonal(B: BeauvilleAlgebra) -> Correspondence:
    """sum_i b_i^dual (x) b_i with <b_k, b_i^dual> = delta_ki; realizes the identity."""
    _require_perfect(B)
    inv = _inverse_gram(B)
    return Correspondence(B, {(i, j): inv[i][j] for i in range(B.dim) for j in range(B.dim)
                              if inv[i][j]})


def diagonal(B: BeauvilleAlgebra) -> Correspondence:
    """The declared diagonal when the model carries one, else the surrogate."""
    if B.diagonal:
        return Correspondence(B, dict(B.diagonal))
    return surrogate_diagonal(B)


def id_times_pullback(alpha: Correspondence, n: int) -> Correspondence:
    """(id x n)^*: scale by n^(2q - t) for the second factor in B^q_t."""
    B = alpha.model
    return Correspondence(B, {(i, j): c * Fraction(n) ** B.weight(j) for (i, j), c in alpha.coeffs.items()})


def graph_class(B: BeauvilleAlgebra, n: int) -> Correspondence:
    """c(n) = sum_i b_i^dual (x) n^*(b_i), the correspondence realizing n^*."""
    return id_times_pullback(diagonal(B), n)


def canonical_projectors(B: BeauvilleAlgebra) -> list[Correspondence]:
    """pi_0 .. pi_2g: split the diagonal by the weight 2q - t of the second factor."""
    Delta = diagonal(B)
    parts: list[dict] = [dict() for _ in range(2 * B.g + 1)]
    for (i, j), c in Delta.coeffs.items():
        w = B.weight(j)
        if not 0 <= w <= 2 * B.g:
            raise ModelError(f"diagonal term with weight {w} outside 0..{2 * B.g}")
        parts[w][i, j] = c
    return [Correspondence(B, p) for p in parts]


def projectors_by_interpolation(B: BeauvilleAlgebra, n: int) -> list[Correspondence]:
    """pi_i = prod_{j != i} (c(n) o - n^j) / (n^i - n^j) applied to the diagonal."""
    Delta = diagonal(B)
    cn = graph_class(B, n)
    weights = range(2 * B.g + 1)
    out = []
    for i in weights:
        x = Delta
        for j in weights:
            if j == i:
                continue
            x = (compose(cn, x) - x.scale(Fraction(n) ** j)).scale(
                Fraction(1, n ** i - n ** j))
        out.append(x)
    return out


@dataclass(frozen=True)
class MotiveSummand:
    model: BeauvilleAlgebra
    index: int
    projector: Correspondence
    twist: int = 0

    @property
    def nonzero(self) -> bool:
        return bool(self.projector)

    @property
    def rank(self) -> int:
        """Dimension of the image of the realization."""
        from .beauville_model import to_sympy

        M = realization_matrix(self.projector)
        return to_sympy([[Fraction(c) for c in row] for row in M]).rank()


def lift_to_t(alpha: Correspondence, order: int = DEFAULT_ORDER) -> Correspondence:
    """psi^-1 of a Chow correspondence: coefficients moved into the t-ring."""
    return Correspondence(alpha.model, {k: TPoly.const(c, order) for k, c in alpha.coeffs.items()})


def motive_decompose(B: BeauvilleAlgebra, order: int = DEFAULT_ORDER) -> list[MotiveSummand]:
    """Summands (A, pi_i, 0) with projectors carrying t-ring coefficients."""
    chow = canonical_projectors(B)
    out = []
    for i, p in enumerate(chow):
        lifted = lift_to_t(p, order)
        if lifted.specialize_t() != p:
            raise ModelError(f"projector pi_{i} does not specialize to its Chow counterpart")
        out.append(MotiveSummand(B, i, lifted))
    return out


# ---------------------------------------------------------------------------
# verification


def random_correspondence(B: BeauvilleAlgebra, rng: random.Random, terms: int = 4,
                          order: int | None = None) -> Correspondence:
    from .coeff_ring import monomials_up_to

    out = {}
    monos = monomials_up_to(order) if order else [()]
    for _ in range(terms):
        key = (rng.randrange(B.dim), rng.randrange(B.dim))
        c = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
        if order:
            c = TPoly({rng.choice(monos): c}, order)
        out[key] = out[key] + c if key in out else c
    return Correspondence(B, out)


def _witness(a: Correspondence) -> str:
    return format_correspondence(a) if a else ""


def projector_suite(B: BeauvilleAlgebra, order: int = DEFAULT_ORDER, seed: int = 0,
                    samples: int = 5) -> Report:
    """Every identity of the canonical decomposition, one line each."""
    rep = Report()
    name = B.name
    if not is_perfect(B):
        rep.add(False, "perfect-pairing", name, "not self-dual: projectors need a perfect pairing")
        return rep
    g = B.g
    rng = random.Random(seed)
    Delta = diagonal(B)
    pis = canonical_projectors(B)

    bad = [B.names[k] for k in range(B.dim)
           if realization(Delta)(B.basis_element(k)) != B.basis_element(k)]
    rep.add(not bad, "diagonal-realizes-identity", name, ", ".join(bad))
    codims = sorted({p for p, _ in Delta.bidegrees()})
    rep.add(codims == [g], "diagonal-codimension", name, f"codim {codims}")
    rep.add(transpose(Delta) == Delta, "diagonal-symmetric", name)

    samples_ = [random_correspondence(B, rng) for _ in range(samples)]
    rep.add(all(compose(Delta, a) == a and compose(a, Delta) == a for a in samples_),
            "diagonal-neutral", name)
    bad = 0
    for a, b, c in zip(samples_, samples_[1:], samples_[2:]):
        if compose(c, compose(b, a)) != compose(compose(c, b), a):
            bad += 1
    rep.add(not bad, "composition-associative", name)
    bad = 0
    for a, b in zip(samples_, samples_[1:]):
        Rab = realization(compose(b, a))
        Ra, Rb = realization(a), realization(b)
        if any(Rab(x) != Rb(Ra(x)) for x in B.basis()):
            bad += 1
    rep.add(not bad, "realization-functorial", name)
    rep.add(all(transpose(transpose(a)) == a for a in samples_), "transpose-involution", name)
    bad = [str(n) for n in (2, 3, -2)
           if any(realization(graph_class(B, n))(x) != mult_pullback(B, n, x) for x in B.basis())]
    rep.add(not bad, "graph-class-realization", name, ", ".join(bad))
    bad = [f"{n},{m}" for n, m in ((2, 3), (3, -2))
           if compose(graph_class(B, n), graph_class(B, m)) != graph_class(B, n * m)]
    rep.add(not bad, "graph-class-multiplicative", name, ", ".join(bad))
    rep.add(all(compose(graph_class(B, 2), a) == id_times_pullback(a, 2) for a in samples_),
            "graph-composition-law", name)

    total = sum(pis[1:], pis[0])
    rep.add(total == Delta, "projectors-sum-to-diagonal", name, _witness(total - Delta))
    bad = []
    for i, j in product(range(2 * g + 1), repeat=2):
        target = pis[i] if i == j else Correspondence(B, {})
        if compose(pis[i], pis[j]) != target:
            bad.append(f"{i},{j}")
    rep.add(not bad, "projectors-orthogonal-idempotent", name, " ".join(bad[:5]))
    bad = []
    for n in (2, 3):
        cn = graph_class(B, n)
        for i, p in enumerate(pis):
            scaled = p.scale(Fraction(n) ** i)
            if id_times_pullback(p, n) != scaled:
                bad.append(f"(id x {n})^* pi_{i}")
            if compose(cn, p) != scaled:
                bad.append(f"c({n}) o pi_{i}")
            if compose(p, cn) != scaled:
                bad.append(f"pi_{i} o c({n})")
    rep.add(not bad, "projector-eigenvalues", name, ", ".join(bad[:5]))
    bad = [str(i) for i in range(2 * g + 1) if transpose(pis[i]) != pis[2 * g - i]]
    rep.add(not bad, "projector-transpose-duality", name, ", ".join(bad))
    via2 = projectors_by_interpolation(B, 2)
    via3 = projectors_by_interpolation(B, 3)
    bad = [str(i) for i in range(2 * g + 1) if not (via2[i] == via3[i] == pis[i])]
    rep.add(not bad, "projector-uniqueness", name, ", ".join(bad))

    # t-extension
    summands = motive_decompose(B, order)
    lifted = [s.projector for s in summands]
    rep.add(all(s.projector.specialize_t() == p for s, p in zip(summands, pis)),
            "projectors-specialize-at-t0", name)
    t_samples = [random_correspondence(B, rng, order=order) for _ in range(samples)]
    bad = []
    for a in t_samples:
        parts = [compose(p, a) for p in lifted]
        if sum(parts[1:], parts[0]) != compose(lift_to_t(Delta, order), a):
            bad.append("sum")
        for i, p in enumerate(lifted):
            if compose(lift_to_t(graph_class(B, 2), order), compose(a, p)) != \
                    id_times_pullback(compose(a, p), 2):
                bad.append(f"graph:{i}")
    bad += [f"{i},{j}" for i, j in product(range(2 * g + 1), repeat=2)
            if compose(lifted[i], lifted[j]) != (lifted[i] if i == j else 0)]
    rep.add(not bad, "projectors-over-t-ring", name, ", ".join(bad[:5]))
    total_R = [sum((realization(p)(x) for p in pis[1:]), realization(pis[0])(x)) for x in B.basis()]
    rep.add(total_R == B.basis(), "projector-realizations-sum-to-identity", name)
    nonzero = sum(1 for p in pis if p)
    rep.add(True, "motive-summands", name, f"{nonzero} nonzero of {2 * g + 1}")
    return rep


def check_declared_diagonal(B: BeauvilleAlgebra, rep: Report) -> None:
    """A diagonal supplied by a model file must realize the identity."""
    D = Correspondence(B, dict(B.diagonal))
    R = realization(D)
    bad = [B.names[k] for k in range(B.dim) if R(B.basis_element(k)) != B.basis_element(k)]
    rep.add(not bad, "declared-diagonal-identity", B.name, ", ".join(bad))

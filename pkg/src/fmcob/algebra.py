"""Finite-dimensional Z/2-graded algebras given by structure constants.

Basis keys are hashable; products of basis elements are returned as sparse
dicts ``{key: Fraction}``.  Elements carry coefficients in any commutative
ring that accepts Fractions (Q itself or the truncated t-ring).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Hashable, Iterable, Mapping


class FiniteAlgebra:
    """Abstract algebra: subclasses provide ``_mul`` and ``parity``."""

    name = "algebra"

    def _mul(self, a: Hashable, b: Hashable) -> Mapping[Hashable, Fraction]:
        raise NotImplementedError

    def parity(self, key: Hashable) -> int:
        return 0

    @property
    def unit_key(self) -> Hashable:
        raise NotImplementedError

    def key_name(self, key: Hashable) -> str:
        return str(key)

    def key_order(self, key: Hashable):
        return key

    def mul_basis(self, a: Hashable, b: Hashable) -> Mapping[Hashable, Fraction]:
        cache = self.__dict__.setdefault("_mul_cache", {})
        try:
            return cache[a, b]
        except KeyError:
            out = cache[a, b] = dict(self._mul(a, b))
            return out

    def element(self, coeffs: Mapping | None = None) -> "Element":
        return Element(self, coeffs or {})

    def basis_element(self, key: Hashable, coeff=Fraction(1)) -> "Element":
        return Element(self, {key: coeff})

    def one(self) -> "Element":
        return self.basis_element(self.unit_key)

    def zero(self) -> "Element":
        return Element(self, {})


def _clean(coeffs: Mapping) -> dict:
    out = {}
    for k, c in coeffs.items():
        if isinstance(c, int):
            c = Fraction(c)
        if c:
            out[k] = c
    return out


class Element:
    """Sparse vector over an algebra's basis with ring-valued coefficients."""

    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra: FiniteAlgebra, coeffs: Mapping):
        self.algebra = algebra
        self.coeffs = _clean(coeffs)

    @classmethod
    def _raw(cls, algebra, coeffs: dict) -> "Element":
        obj = cls.__new__(cls)
        obj.algebra = algebra
        obj.coeffs = coeffs
        return obj

    def one(self) -> "Element":
        return self.algebra.one()

    def _same(self, other: "Element") -> None:
        if other.algebra is not self.algebra:
            raise ValueError(
                f"elements of different algebras: {self.algebra.name} vs {other.algebra.name}"
            )

    def __add__(self, other):
        if isinstance(other, Element):
            self._same(other)
            out = dict(self.coeffs)
            for k, c in other.coeffs.items():
                v = out[k] + c if k in out else c
                if v:
                    out[k] = v
                else:
                    out.pop(k, None)
            return Element._raw(self.algebra, out)
        if not other:
            return self
        return self + self.algebra.one() * other

    __radd__ = __add__

    def __neg__(self):
        return Element._raw(self.algebra, {k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Element):
            self._same(other)
            alg = self.algebra
            out: dict = {}
            for a, ca in self.coeffs.items():
                for b, cb in other.coeffs.items():
                    prod = alg.mul_basis(a, b)
                    if not prod:
                        continue
                    cab = ca * cb
                    for k, v in prod.items():
                        term = cab * v
                        if k in out:
                            term = out[k] + term
                        if term:
                            out[k] = term
                        else:
                            out.pop(k, None)
            return Element._raw(alg, out)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c) -> "Element":
        out = {}
        for k, v in self.coeffs.items():
            w = v * c
            if w:
                out[k] = w
        return Element._raw(self.algebra, out)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(Fraction(1) / other)
        return NotImplemented

    def __pow__(self, n: int) -> "Element":
        out = self.algebra.one()
        for _ in range(n):
            out = out * self
        return out

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, Element):
            if other.algebra is not self.algebra:
                return False
            keys = set(self.coeffs) | set(other.coeffs)
            return all(not (self.coeffs.get(k, 0) - other.coeffs.get(k, 0)) for k in keys)
        if isinstance(other, (int, Fraction)) and other == 0:
            return not self.coeffs
        return NotImplemented

    __hash__ = None

    def __getitem__(self, key):
        return self.coeffs.get(key, Fraction(0))

    def sorted_items(self):
        order = self.algebra.key_order
        return sorted(self.coeffs.items(), key=lambda kv: order(kv[0]))

    def map_coefficients(self, fn) -> "Element":
        return Element(self.algebra, {k: fn(c) for k, c in self.coeffs.items()})

    def __repr__(self):
        from .formatting import format_element

        return f"<{self.algebra.name}: {format_element(self)}>"


# ---------------------------------------------------------------------------


class TableAlgebra(FiniteAlgebra):
    """Algebra on integer keys 0..n-1 with an explicit product table."""

    def __init__(self, names: list[str], parities: list[int], table: Mapping, unit: int = 0,
                 name: str = "table"):
        self.names = list(names)
        self._parities = list(parities)
        self.table = {k: _clean(v) for k, v in table.items()}
        self._unit = unit
        self.name = name
        self.index = {n: i for i, n in enumerate(self.names)}

    @property
    def dim(self) -> int:
        return len(self.names)

    @property
    def unit_key(self):
        return self._unit

    def keys(self) -> range:
        return range(len(self.names))

    def parity(self, key: int) -> int:
        return self._parities[key]

    def key_name(self, key: int) -> str:
        return self.names[key]

    def _mul(self, a: int, b: int):
        if a == self._unit:
            return {b: Fraction(1)}
        if b == self._unit:
            return {a: Fraction(1)}
        return self.table.get((a, b), {})


class ExteriorAlgebra(FiniteAlgebra):
    """Exterior algebra on ``n`` generators; basis keys are bitmasks."""

    def __init__(self, generator_names: list[str], name: str = "ext"):
        self.generator_names = list(generator_names)
        self.n = len(generator_names)
        self.name = name

    @property
    def unit_key(self):
        return 0

    @property
    def dim(self) -> int:
        return 1 << self.n

    def keys(self) -> Iterable[int]:
        return sorted(range(1 << self.n), key=self.key_order)

    def key_order(self, key: int):
        return (bin(key).count("1"), [i for i in range(self.n) if key >> i & 1])

    def parity(self, key: int) -> int:
        return bin(key).count("1") & 1

    def key_name(self, key: int) -> str:
        if key == 0:
            return "1"
        return "".join(self.generator_names[i] for i in range(self.n) if key >> i & 1)

    def _mul(self, a: int, b: int):
        if a & b:
            return {}
        return {a | b: Fraction(exterior_sign(a, b))}

    def generator(self, i: int) -> Element:
        return self.basis_element(1 << i)


@lru_cache(maxsize=None)
def exterior_sign(a: int, b: int) -> int:
    """Sign of e_a * e_b = +- e_(a|b) for disjoint bitmasks, generators in index order."""
    swaps = 0
    bb = b
    while bb:
        low = bb & -bb
        # generators of a with larger index than this generator of b must be passed
        swaps += bin(a & ~((low << 1) - 1)).count("1")
        bb ^= low
    return -1 if swaps & 1 else 1


class TensorAlgebra(FiniteAlgebra):
    """Koszul-signed tensor product: (a x b)(c x d) = (-1)^(|b||c|) ac x bd."""

    def __init__(self, left: FiniteAlgebra, right: FiniteAlgebra, name: str | None = None):
        self.left = left
        self.right = right
        self.name = name or f"({left.name})x({right.name})"

    @property
    def unit_key(self):
        return (self.left.unit_key, self.right.unit_key)

    def parity(self, key) -> int:
        return (self.left.parity(key[0]) + self.right.parity(key[1])) & 1

    def key_order(self, key):
        return (self.left.key_order(key[0]), self.right.key_order(key[1]))

    def key_name(self, key) -> str:
        return f"{self.left.key_name(key[0])}|{self.right.key_name(key[1])}"

    def _mul(self, x, y):
        a, b = x
        c, d = y
        left = self.left.mul_basis(a, c)
        if not left:
            return {}
        right = self.right.mul_basis(b, d)
        if not right:
            return {}
        sign = -1 if (self.right.parity(b) and self.left.parity(c)) else 1
        return {(k1, k2): sign * v1 * v2 for k1, v1 in left.items() for k2, v2 in right.items()}

    def pure(self, x: Element, y: Element) -> Element:
        """x (x) y for elements of the two factors."""
        out = {}
        for a, ca in x.coeffs.items():
            for b, cb in y.coeffs.items():
                out[(a, b)] = ca * cb
        return Element(self, out)

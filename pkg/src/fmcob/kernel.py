"""Kernel data: an ambient algebra modelling CH(A x A^), the pullback from A,
the pushforward to A^, and the class c1(P) of the Poincare bundle.

Pullbacks take ``{source basis index: coeff}`` and pushforwards return
``{target basis index: coeff}``, so kernel objects never hold references to
the models they serve.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from typing import Callable, Mapping

from .algebra import Element, ExteriorAlgebra, FiniteAlgebra, TableAlgebra, TensorAlgebra


class KernelData:
    ambient: FiniteAlgebra
    c1: Element

    def pull_basis(self, i: int) -> Mapping:
        raise NotImplementedError

    def pull(self, coeffs: Mapping) -> Element:
        out = self.ambient.zero()
        for i, c in coeffs.items():
            out = out + Element(self.ambient, self.pull_basis(i)).scale(c)
        return out

    def push(self, a: Element) -> dict:
        raise NotImplementedError

    def nilpotency(self) -> int:
        """Smallest k with c1^k = 0."""
        k, power = 1, self.c1
        while power:
            power = power * self.c1
            k += 1
        return k


def _add_into(out: dict, key, value) -> None:
    v = out.get(key, 0) + value
    if v:
        out[key] = v
    else:
        out.pop(key, None)


class ExteriorKernel(KernelData):
    """H*(A x A) as an exterior algebra on 4g generators.

    Generators 0..2g-1 are x1, y1, ..., xg, yg on the first factor and
    2g..4g-1 the same on the second.  With A^ identified with A through the
    principal polarization, c1(P) = mu*theta - p1*theta - p2*theta, which
    expands to sum_i (x_i y_i' - y_i x_i').  The pushforward to the second
    factor extracts the coefficient of x1 y1 ... xg yg (= theta^g/g!, degree 1).
    """

    def __init__(self, g: int, embed: list[Mapping[int, Fraction]],
                 extract: Callable[[dict], dict]):
        self.g = g
        names = []
        for prime in ("", "'"):
            for i in range(1, g + 1):
                names += [f"x{i}{prime}", f"y{i}{prime}"]
        self.ambient = ExteriorAlgebra(names, name=f"ext{4 * g}")
        self._embed = embed
        self._extract = extract
        c1 = self.ambient.zero()
        for i in range(g):
            x, y = self.ambient.generator(2 * i), self.ambient.generator(2 * i + 1)
            xp, yp = self.ambient.generator(2 * g + 2 * i), self.ambient.generator(2 * g + 2 * i + 1)
            c1 = c1 + x * yp - y * xp
        self.c1 = c1
        self._low = (1 << (2 * g)) - 1

    def pull_basis(self, i: int):
        return self._embed[i]

    def push(self, a: Element) -> dict:
        rest: dict = {}
        low, shift = self._low, 2 * self.g
        for mask, c in a.coeffs.items():
            if mask & low == low:
                # e_top * e_rest is already in canonical order; deg(e_top) = 1
                _add_into(rest, mask >> shift, c)
        return self._extract(rest)


class TableKernel(KernelData):
    """Kernel over an explicit ambient table (model files, ell-rk1, surrogates)."""

    def __init__(self, ambient: TableAlgebra, pull_map: list[Mapping], push_map: Mapping,
                 c1: Mapping):
        self.ambient = ambient
        self._pull = [dict(m) for m in pull_map]
        self._push = {k: dict(v) for k, v in push_map.items()}
        self.c1 = Element(ambient, c1)

    def pull_basis(self, i: int):
        return self._pull[i]

    def push(self, a: Element) -> dict:
        out: dict = {}
        for key, c in a.coeffs.items():
            for j, v in self._push.get(key, {}).items():
                _add_into(out, j, c * v)
        return out


class ProductKernel(KernelData):
    """Kernel of A1 x A2 from kernels of the factors: c1 = c1' + c1''.

    Pullback and pushforward factor through the Koszul tensor of the two
    ambients; no sign appears in the pushforward because the integrated
    top classes are even.
    """

    def __init__(self, left: KernelData, right: KernelData, source_pairs: list[tuple],
                 target_index: Mapping[tuple, int]):
        self.left, self.right = left, right
        self.ambient = TensorAlgebra(left.ambient, right.ambient)
        self._pairs = source_pairs
        self._target_index = target_index
        self.c1 = (self.ambient.pure(left.c1, right.ambient.one())
                   + self.ambient.pure(left.ambient.one(), right.c1))

    def pull_basis(self, i: int):
        a, b = self._pairs[i]
        x = Element(self.left.ambient, self.left.pull_basis(a))
        y = Element(self.right.ambient, self.right.pull_basis(b))
        return self.ambient.pure(x, y).coeffs

    def push(self, a: Element) -> dict:
        # group by the right ambient key to push each factor once
        by_right: dict = {}
        for (k1, k2), c in a.coeffs.items():
            by_right.setdefault(k2, {})[k1] = c
        out: dict = {}
        for k2, left_coeffs in by_right.items():
            right_push = self.right.push(Element(self.right.ambient, {k2: Fraction(1)}))
            if not right_push:
                continue
            left_push = self.left.push(Element._raw(self.left.ambient, left_coeffs))
            for j1, v1 in left_push.items():
                for j2, v2 in right_push.items():
                    _add_into(out, self._target_index[j1, j2], v1 * v2)
        return out


def tensor_ambient(left_names, left_par, left_mul, right_names, right_par, right_mul,
                   extras=(), extra_parities=(), extra_products: Mapping | None = None,
                   units: tuple = (0, 0), name: str = "ambient") -> TableAlgebra:
    """Materialize the Koszul tensor of two tables plus extra classes.

    ``left_mul``/``right_mul`` are ``mul_basis`` callables on integer keys.
    Tensor key (i, j) becomes index i*len(right)+j; extras follow.
    ``extra_products`` maps (key_a, key_b) -> {key: Fraction} and is
    symmetrized with the Koszul sign.
    """
    n1, n2 = len(left_names), len(right_names)
    names = [f"{a}|{b}" for a, b in product(left_names, right_names)] + list(extras)
    parities = [(left_par[i] + right_par[j]) & 1 for i, j in product(range(n1), range(n2))]
    parities += list(extra_parities)
    table: dict = {}
    for (a, b), (c, d) in product(product(range(n1), range(n2)), repeat=2):
        left = left_mul(a, c)
        right = right_mul(b, d)
        if not left or not right:
            continue
        sign = -1 if (right_par[b] and left_par[c]) else 1
        out: dict = {}
        for k1, v1 in left.items():
            for k2, v2 in right.items():
                _add_into(out, k1 * n2 + k2, sign * v1 * v2)
        if out:
            table[a * n2 + b, c * n2 + d] = out
    for (x, y), value in (extra_products or {}).items():
        table[x, y] = dict(value)
        if (y, x) not in (extra_products or {}):
            sign = -1 if (parities[x] and parities[y]) else 1
            table[y, x] = {k: sign * v for k, v in value.items()}
    return TableAlgebra(names, parities, table, unit=units[0] * n2 + units[1], name=name)


def log_unipotent(K: Element) -> Element:
    """log(K) for K = 1 + nilpotent."""
    one = K.algebra.one()
    n = K - one
    total, power, k = K.algebra.zero(), one, 1
    while True:
        power = power * n
        if not power:
            return total
        total = total + power.scale(Fraction((-1) ** (k + 1), k))
        k += 1

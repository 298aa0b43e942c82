"""Graded coefficient ring Q[t1, ..., tD] with deg t_i = -i, truncated below -D.

Monomials are exponent tuples ``(n1, n2, ...)`` with trailing zeros trimmed,
so ``()`` is the constant monomial and ``(0, 2)`` is ``t2^2``.  The weight of
a monomial is ``sum(i * n_i)``; its degree is minus the weight.  Every TPoly
carries its truncation order and multiplication drops monomials whose weight
exceeds it.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Sequence

DEFAULT_ORDER = 8

Monomial = tuple  # tuple[int, ...]


def _trim(exps: Iterable[int]) -> Monomial:
    exps = list(exps)
    while exps and exps[-1] == 0:
        exps.pop()
    return tuple(exps)


@lru_cache(maxsize=None)
def weight(mono: Monomial) -> int:
    """|I| = sum(i * n_i); the monomial has degree -weight(mono)."""
    return sum((i + 1) * n for i, n in enumerate(mono))


@lru_cache(maxsize=None)
def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, n in enumerate(b):
        out[i] += n
    return tuple(out)


def monomials_up_to(order: int) -> list[Monomial]:
    """All monomials of weight <= order, sorted by (weight, exponents)."""
    out: list[Monomial] = []

    def rec(i: int, remaining: int, prefix: list[int]) -> None:
        if i > order:
            out.append(_trim(prefix))
            return
        for n in range(remaining // i + 1):
            rec(i + 1, remaining - n * i, prefix + [n])

    rec(1, order, [])
    return sorted(set(out), key=mono_sort_key)


def mono_sort_key(mono: Monomial) -> tuple:
    return (weight(mono), tuple(reversed(mono)))


def format_monomial(mono: Monomial) -> str:
    parts = []
    for i, n in enumerate(mono):
        if n == 1:
            parts.append(f"t{i + 1}")
        elif n > 1:
            parts.append(f"t{i + 1}^{n}")
    return "*".join(parts)


def t_var(i: int, order: int = DEFAULT_ORDER) -> "TPoly":
    """The generator t_i as a TPoly (zero when i exceeds the truncation)."""
    if i < 1:
        raise ValueError(f"t-variables are indexed from 1, got {i}")
    mono = tuple([0] * (i - 1) + [1])
    return TPoly({mono: Fraction(1)}, order)


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


class TPoly:
    """Element of Q[t]/(monomials of weight > order)."""

    __slots__ = ("terms", "order", "_hash")

    def __init__(self, terms: Mapping[Monomial, object] | None = None, order: int = DEFAULT_ORDER):
        if order < 0:
            raise ValueError("truncation order must be non-negative")
        clean: dict[Monomial, Fraction] = {}
        for mono, c in (terms or {}).items():
            c = _as_fraction(c)
            mono = _trim(mono)
            if c and weight(mono) <= order:
                clean[mono] = clean.get(mono, Fraction(0)) + c
                if not clean[mono]:
                    del clean[mono]
        self.terms = clean
        self.order = order
        self._hash = None

    @classmethod
    def const(cls, c, order: int = DEFAULT_ORDER) -> "TPoly":
        return cls({(): c}, order)

    @classmethod
    def _raw(cls, terms: dict, order: int) -> "TPoly":
        obj = cls.__new__(cls)
        obj.terms = terms
        obj.order = order
        obj._hash = None
        return obj

    # ---- coercion -----------------------------------------------------
    def _coerce(self, other) -> "TPoly | None":
        if isinstance(other, TPoly):
            if other.order != self.order:
                raise ValueError(
                    f"mixing TPoly truncation orders {self.order} and {other.order}"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return TPoly.const(other, self.order)
        return None

    # ---- arithmetic ---------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = dict(self.terms)
        for m, c in o.terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return TPoly._raw(out, self.order)

    __radd__ = __add__

    def __neg__(self):
        return TPoly._raw({m: -c for m, c in self.terms.items()}, self.order)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return TPoly._raw({}, self.order)
            return TPoly._raw({m: c * other for m, c in self.terms.items()}, self.order)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out: dict[Monomial, Fraction] = {}
        order = self.order
        for m1, c1 in self.terms.items():
            w1 = weight(m1)
            for m2, c2 in o.terms.items():
                if w1 + weight(m2) > order:
                    continue
                m = mono_mul(m1, m2)
                v = out.get(m, 0) + c1 * c2
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return TPoly._raw(out, order)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / other)
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not defined in Q[t]")
        out = TPoly.const(1, self.order)
        for _ in range(n):
            out = out * self
        return out

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, TPoly):
            return self.order == other.order and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            if not other:
                return not self.terms
            return self.terms == {(): Fraction(other)}
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.order, frozenset(self.terms.items())))
        return self._hash

    # ---- structure ----------------------------------------------------
    def one(self) -> "TPoly":
        return TPoly.const(1, self.order)

    def constant(self) -> Fraction:
        return self.terms.get((), Fraction(0))

    def degrees(self) -> set[int]:
        return {-weight(m) for m in self.terms}

    def is_homogeneous(self, degree: int) -> bool:
        return all(-weight(m) == degree for m in self.terms)

    def homogeneous_part(self, degree: int) -> "TPoly":
        return TPoly._raw(
            {m: c for m, c in self.terms.items() if -weight(m) == degree}, self.order
        )

    def specialize(self, values: Sequence) -> Fraction:
        """Evaluate at t_i = values[i-1] (missing values are 0)."""
        total = Fraction(0)
        for mono, c in self.terms.items():
            term = c
            for i, n in enumerate(mono):
                if n:
                    v = values[i] if i < len(values) else 0
                    term *= Fraction(v) ** n
            total += term
        return total

    def items(self) -> Iterator[tuple[Monomial, Fraction]]:
        for m in sorted(self.terms, key=mono_sort_key):
            yield m, self.terms[m]

    def __repr__(self):
        return f"TPoly({format_tpoly(self)!r}, order={self.order})"

    def __str__(self):
        return format_tpoly(self)


def format_rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_tpoly(p: TPoly) -> str:
    """Sum of ``<rational>*t1^a1*t2^a2...`` terms; ``0`` for the zero element."""
    if not p.terms:
        return "0"
    pieces = []
    for mono, c in p.items():
        m = format_monomial(mono)
        if m and abs(c) == 1:
            pieces.append(m if c > 0 else f"-{m}")
        else:
            pieces.append(format_rational(c) + (f"*{m}" if m else ""))
    out = pieces[0]
    for piece in pieces[1:]:
        out += f" - {piece[1:]}" if piece.startswith("-") else f" + {piece}"
    return out


_TERM_RE = re.compile(r"\s*([+-])?\s*([^+\-\s][^+-]*)")
_FACTOR_RE = re.compile(r"^t(\d+)(?:\^(\d+))?$")
_RATIONAL_RE = re.compile(r"^\d+(?:/\d+)?$")


def parse_rational(token: str) -> Fraction:
    token = token.strip()
    sign = 1
    if token.startswith("-"):
        sign, token = -1, token[1:].strip()
    if not _RATIONAL_RE.match(token):
        raise ValueError(f"malformed rational {token!r}")
    num, _, den = token.partition("/")
    if den and int(den) == 0:
        raise ValueError(f"zero denominator in {token!r}")
    return sign * Fraction(int(num), int(den) if den else 1)


def parse_tpoly(text: str, order: int = DEFAULT_ORDER) -> TPoly:
    """Inverse of :func:`format_tpoly`."""
    text = text.strip()
    if text == "0":
        return TPoly({}, order)
    terms: dict[Monomial, Fraction] = {}
    pos = 0
    while pos < len(text):
        m = _TERM_RE.match(text, pos)
        if not m:
            raise ValueError(f"cannot parse t-polynomial at {text[pos:]!r}")
        sign = -1 if m.group(1) == "-" else 1
        coeff = Fraction(sign)
        exps: list[int] = []
        for factor in m.group(2).strip().split("*"):
            factor = factor.strip()
            fm = _FACTOR_RE.match(factor)
            if fm:
                i, n = int(fm.group(1)), int(fm.group(2) or 1)
                while len(exps) < i:
                    exps.append(0)
                exps[i - 1] += n
            else:
                coeff *= parse_rational(factor)
        mono = _trim(exps)
        terms[mono] = terms.get(mono, Fraction(0)) + coeff
        pos = m.end()
    return TPoly(terms, order)


# ---------------------------------------------------------------------------
# twisting data


@dataclass(frozen=True)
class TauVector:
    """tau = (tau_0, tau_1, ..., tau_D) with tau_0 = 1 and deg tau_i = -i."""

    entries: tuple

    def __post_init__(self):
        if not self.entries:
            raise ValueError("tau needs at least tau_0")
        first = self.entries[0]
        if not first == 1:
            raise ValueError("tau_0 must be 1")
        for i, e in enumerate(self.entries):
            if isinstance(e, TPoly) and e and not e.is_homogeneous(-i):
                raise ValueError(f"tau_{i} must have degree {-i}")
            if isinstance(e, (int, Fraction)) and i > 0 and e:
                raise ValueError(f"tau_{i} must have degree {-i}; nonzero constants are not allowed")

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]


def canonical_tau(order: int = DEFAULT_ORDER) -> TauVector:
    """(1, t1, t2, ..., tD): the twist relating cobordism to CH[t]."""
    return TauVector(tuple([TPoly.const(1, order)] + [t_var(i, order) for i in range(1, order + 1)]))


def trivial_tau(order: int = DEFAULT_ORDER) -> TauVector:
    return TauVector(tuple([TPoly.const(1, order)] + [TPoly({}, order)] * order))


def _powers(c, count: int):
    """c^0, c^1, ..., stopping early once a power vanishes."""
    power = c.one()
    for _ in range(count):
        yield power
        if not power:
            return
        power = power * c


def todd_inverse(tau: TauVector, c):
    """Sum of c^i * tau_i over i; finite because c is nilpotent.

    ``c`` is any ring element exposing ``one()``, ``*`` and ``+`` and
    accepting TPoly scalars.
    """
    total = c.one() * 0
    for i, power in enumerate(_powers(c, len(tau))):
        total = total + power * tau[i]
    return total


def twisted_c1(tau: TauVector, c):
    """Twisted first Chern class: sum of c^(i+1) * tau_i."""
    total = c.one() * 0
    for i, power in enumerate(_powers(c, len(tau) + 1)):
        if i == 0:
            continue
        total = total + power * tau[i - 1]
    return total


def twisted_pullback(tau: TauVector, pullback, target_roots: Sequence, source_roots: Sequence):
    """Twist a pullback operator by Td^-1 of the virtual normal bundle.

    ``target_roots`` are Chern roots of f^*T_X and ``source_roots`` those of
    T_Y, each given as ring elements on Y.  For maps between abelian
    varieties all roots are zero and the factor collapses to 1.
    """
    factor = None
    for r in target_roots:
        f = todd_inverse(tau, r)
        factor = f if factor is None else factor * f
    for r in source_roots:
        f = todd_inverse(tau, r)
        inv = _unipotent_inverse(f)
        factor = inv if factor is None else factor * inv

    def op(x):
        y = pullback(x)
        return y if factor is None else factor * y

    op.factor = factor
    return op


def _unipotent_inverse(f):
    # f = 1 + n with n nilpotent
    one = f.one()
    n = f - one
    total, power = one, one
    while True:
        power = power * (n * -1)
        if not power:
            return total
        total = total + power

"""Exact truncated power series in one variable u.

Coefficients may be Fractions, TPoly elements, or (for two-variable series)
TruncatedSeries themselves.  A series of order D keeps the coefficients of
u^0 .. u^D; anything beyond u^D is discarded by every operation.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

from .coeff_ring import (
    DEFAULT_ORDER,
    TPoly,
    format_rational,
    format_tpoly,
    parse_rational,
    parse_tpoly,
    t_var,
)


def _is_zero(c) -> bool:
    return not c


class TruncatedSeries:
    """c_0 + c_1 u + ... + c_D u^D, truncated at order D."""

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs: Sequence, order: int | None = None):
        coeffs = list(coeffs)
        if order is None:
            order = len(coeffs) - 1
        if order < 1:
            raise ValueError("truncation order must be at least 1")
        coeffs = coeffs[: order + 1]
        coeffs += [0] * (order + 1 - len(coeffs))
        self.coeffs = tuple(Fraction(c) if isinstance(c, int) else c for c in coeffs)
        self.order = order

    # ---- constructors ---------------------------------------------------
    @classmethod
    def variable(cls, order: int, one=1) -> "TruncatedSeries":
        return cls([0, one], order)

    @classmethod
    def constant(cls, c, order: int) -> "TruncatedSeries":
        return cls([c], order)

    def one(self) -> "TruncatedSeries":
        return TruncatedSeries.constant(_one_like(self.coeffs), self.order)

    # ---- arithmetic -----------------------------------------------------
    def _check(self, other: "TruncatedSeries") -> None:
        if other.order != self.order:
            raise ValueError(
                f"mismatched truncation orders {self.order} and {other.order}"
            )

    def __add__(self, other):
        if isinstance(other, TruncatedSeries):
            self._check(other)
            return TruncatedSeries([a + b for a, b in zip(self.coeffs, other.coeffs)], self.order)
        if other == 0:
            return self
        return TruncatedSeries([self.coeffs[0] + other, *self.coeffs[1:]], self.order)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries([-c for c in self.coeffs], self.order)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            self._check(other)
            D = self.order
            a, b = self.coeffs, other.coeffs
            nz_a = [i for i in range(D + 1) if not _is_zero(a[i])]
            nz_b = [j for j in range(D + 1) if not _is_zero(b[j])]
            out = [0] * (D + 1)
            for i in nz_a:
                for j in nz_b:
                    if i + j > D:
                        break
                    out[i + j] = out[i + j] + a[i] * b[j]
            return TruncatedSeries(out, D)
        return TruncatedSeries([c * other for c in self.coeffs], self.order)

    def __rmul__(self, other):
        return TruncatedSeries([other * c for c in self.coeffs], self.order)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            inv = Fraction(1) / other
            return TruncatedSeries([c * inv for c in self.coeffs], self.order)
        return NotImplemented

    def __pow__(self, n: int):
        out = self.one()
        for _ in range(n):
            out = out * self
        return out

    def __bool__(self):
        return any(not _is_zero(c) for c in self.coeffs)

    def __eq__(self, other):
        if isinstance(other, TruncatedSeries):
            return self.order == other.order and all(
                _is_zero(a - b) for a, b in zip(self.coeffs, other.coeffs)
            )
        if isinstance(other, (int, Fraction)):
            return _is_zero(self.coeffs[0] - other) and not any(
                not _is_zero(c) for c in self.coeffs[1:]
            )
        return NotImplemented

    __hash__ = None

    def __getitem__(self, k: int):
        return self.coeffs[k]

    def __repr__(self):
        return f"TruncatedSeries({format_series(self)!r})"

    # ---- structure ------------------------------------------------------
    def truncate(self, order: int) -> "TruncatedSeries":
        return TruncatedSeries(self.coeffs[: order + 1], order)

    def map_coefficients(self, fn) -> "TruncatedSeries":
        return TruncatedSeries([fn(c) for c in self.coeffs], self.order)


def _one_like(coeffs):
    for c in coeffs:
        if isinstance(c, TPoly):
            return c.one()
        if isinstance(c, TruncatedSeries):
            return c.one()
    return Fraction(1)


# ---------------------------------------------------------------------------
# composition, reversion, exp/log


def evaluate(f: TruncatedSeries, x):
    """Substitute a ring element x into f: sum of f_k * x^k for k <= D.

    x is typically nilpotent; powers are accumulated until one vanishes.
    """
    one = x.one()
    total = one * f.coeffs[0]
    power = one
    for k in range(1, f.order + 1):
        power = power * x
        if not power:
            break
        c = f.coeffs[k]
        if not _is_zero(c):
            total = total + power * c
    return total


def compose(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    """f(g(u)) truncated at the shared order."""
    if f.order != g.order:
        raise ValueError(f"mismatched truncation orders {f.order} and {g.order}")
    if not _is_zero(g.coeffs[0]):
        raise ValueError("inner series must have zero constant term")
    out = TruncatedSeries.constant(f.coeffs[f.order], f.order)
    for k in range(f.order - 1, -1, -1):
        out = out * g + f.coeffs[k]
    return out


def revert(f: TruncatedSeries) -> TruncatedSeries:
    """Compositional inverse g with g(f(u)) = u, solved degree by degree."""
    if not _is_zero(f.coeffs[0]):
        raise ValueError("series to revert must have zero constant term")
    if not f.coeffs[1] == 1:
        raise ValueError("series to revert must have u-coefficient 1")
    D = f.order
    one = _one_like(f.coeffs)
    g = [0, one] + [0] * (D - 1)
    for k in range(2, D + 1):
        # the u^k coefficient of g(f) is g_k plus terms from g_2..g_{k-1}
        residual = compose(TruncatedSeries(g, D), f).coeffs[k]
        g[k] = g[k] - residual
    return TruncatedSeries(g, D)


def exp_series(f: TruncatedSeries) -> TruncatedSeries:
    """exp(f) = sum f^k / k!; f must have zero constant term."""
    if not _is_zero(f.coeffs[0]):
        raise ValueError("exp_series needs a series with zero constant term")
    exp_coeffs = [Fraction(1, math.factorial(k)) for k in range(f.order + 1)]
    return compose(TruncatedSeries(exp_coeffs, f.order), f).map_coefficients(_promote(f))


def log_series(f: TruncatedSeries) -> TruncatedSeries:
    """log(1 + g) = sum (-1)^(k+1) g^k / k; f must have constant term 1."""
    if not f.coeffs[0] == 1:
        raise ValueError("log_series needs a series with constant term 1")
    g = f - f.coeffs[0]
    log_coeffs = [Fraction(0)] + [Fraction((-1) ** (k + 1), k) for k in range(1, f.order + 1)]
    return compose(TruncatedSeries(log_coeffs, f.order), g).map_coefficients(_promote(f))


def _promote(f: TruncatedSeries):
    # keep coefficient types uniform (Fraction 0 -> TPoly 0 for t-series)
    for c in f.coeffs:
        if isinstance(c, TPoly):
            zero = TPoly({}, c.order)
            return lambda x: x + zero
    return lambda x: x


# ---------------------------------------------------------------------------
# the named series


def _check_homogeneous(f: TruncatedSeries, name: str) -> None:
    # deg u = 1, deg t_i = -i: the u^k coefficient must have degree 1 - k
    for k, c in enumerate(f.coeffs):
        if isinstance(c, TPoly) and c and not c.is_homogeneous(1 - k):
            raise ValueError(f"{name}: coefficient of u^{k} is not of degree {1 - k}")
        if k == 0 and not _is_zero(c):
            raise ValueError(f"{name}: nonzero constant term")


def lambda_t(order: int = DEFAULT_ORDER, t_order: int | None = None) -> TruncatedSeries:
    """u + t1 u^2 + t2 u^3 + ...: the twisted first Chern class series."""
    t_order = order if t_order is None else t_order
    coeffs = [TPoly({}, t_order), TPoly.const(1, t_order)]
    coeffs += [t_var(i - 1, t_order) for i in range(2, order + 1)]
    f = TruncatedSeries(coeffs, order)
    _check_homogeneous(f, "lambda_t")
    return f


def log_t(order: int = DEFAULT_ORDER, t_order: int | None = None) -> TruncatedSeries:
    """The logarithm l_(t) of the twisted formal group law: l(lambda(u)) = u."""
    f = revert(lambda_t(order, t_order))
    _check_homogeneous(f, "log_t")
    return f


def kernel_series(order: int = DEFAULT_ORDER, t_order: int | None = None) -> TruncatedSeries:
    """G = exp(l_(t)(u)), the multiplicative kernel series.

    G is not homogeneous; its u^k coefficient spans degrees 1-k .. 0.
    """
    G = exp_series(log_t(order, t_order))
    for k, c in enumerate(G.coeffs):
        if isinstance(c, TPoly) and any(d > 0 or d < 1 - max(k, 1) for d in c.degrees()):
            raise ValueError(f"G: coefficient of u^{k} has degrees outside [{1 - k}, 0]")
    return G


def exp_of_u(order: int, one=Fraction(1)) -> TruncatedSeries:
    return TruncatedSeries([one * Fraction(1, math.factorial(k)) for k in range(order + 1)], order)


# ---------------------------------------------------------------------------
# two-variable series: series in v whose coefficients are series in u


def _embed_const(c, order: int) -> TruncatedSeries:
    return TruncatedSeries.constant(c, order)


def in_u(f: TruncatedSeries) -> TruncatedSeries:
    """f(u) as a two-variable series (only the v^0 coefficient is nonzero)."""
    return TruncatedSeries([f] + [_embed_const(0 * f.coeffs[1], f.order)] * f.order, f.order)


def in_v(f: TruncatedSeries) -> TruncatedSeries:
    """f(v) as a two-variable series with constant-in-u coefficients."""
    return TruncatedSeries([_embed_const(c, f.order) for c in f.coeffs], f.order)


def truncate_total(F: TruncatedSeries) -> TruncatedSeries:
    """Drop u^i v^j with i + j > D; only those terms are exact after substitution."""
    D = F.order
    outer = []
    for j, inner in enumerate(F.coeffs):
        if isinstance(inner, TruncatedSeries):
            outer.append(TruncatedSeries(
                [c if i + j <= D else 0 * c for i, c in enumerate(inner.coeffs)], D))
        else:
            outer.append(inner)
    return TruncatedSeries(outer, D)


def bivariate_coeff(F: TruncatedSeries, i: int, j: int):
    """Coefficient of u^i v^j."""
    inner = F.coeffs[j]
    return inner.coeffs[i] if isinstance(inner, TruncatedSeries) else (inner if i == 0 else 0)


def substitute_bivariate(f: TruncatedSeries, w: TruncatedSeries) -> TruncatedSeries:
    """f(w(u, v)) for a two-variable w with w(0, 0) = 0, exact up to total degree D."""
    const = w.coeffs[0]
    if isinstance(const, TruncatedSeries) and not _is_zero(const.coeffs[0]):
        raise ValueError("inner series must vanish at the origin")
    return truncate_total(evaluate(f, w))


def formal_group_law(order: int = DEFAULT_ORDER, t_order: int | None = None) -> TruncatedSeries:
    """F(u, v) = lambda_t(l_t(u) + l_t(v)), the universal law over Q."""
    lam = lambda_t(order, t_order)
    log = log_t(order, t_order)
    return substitute_bivariate(lam, in_u(log) + in_v(log))


# ---------------------------------------------------------------------------
# text format: one line per power, ``u^k : <coefficient>``


def _format_coeff(c) -> str:
    if isinstance(c, TPoly):
        return format_tpoly(c)
    if isinstance(c, Fraction):
        return format_rational(c)
    if isinstance(c, int):
        return str(c)
    raise TypeError(f"cannot serialize coefficient of type {type(c).__name__}")


def format_series(f: TruncatedSeries) -> str:
    lines = []
    for k, c in enumerate(f.coeffs):
        if k == 0 and _is_zero(c):
            continue
        lines.append(f"u^{k} : {_format_coeff(c)}")
    return "\n".join(lines)


def parse_series(text: str, t_order: int | None = None) -> TruncatedSeries:
    """Inverse of :func:`format_series`.

    Coefficients mentioning t-variables become TPoly (truncated at
    ``t_order``, default 8); if any does, all do.
    """
    entries: dict[int, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, sep, body = line.partition(":")
        head = head.strip()
        if not sep or not head.startswith("u^"):
            raise ValueError(f"line {lineno}: expected 'u^k : <coefficient>', got {raw!r}")
        try:
            k = int(head[2:])
        except ValueError:
            raise ValueError(f"line {lineno}: bad power {head!r}") from None
        if k in entries:
            raise ValueError(f"line {lineno}: duplicate power u^{k}")
        entries[k] = body.strip()
    if not entries:
        raise ValueError("empty series")
    order = max(entries)
    use_t = t_order is not None or any("t" in body for body in entries.values())
    t_order = DEFAULT_ORDER if t_order is None else t_order
    coeffs: list = []
    for k in range(order + 1):
        body = entries.get(k, "0")
        try:
            coeffs.append(parse_tpoly(body, t_order) if use_t else parse_rational(body))
        except ValueError as exc:
            raise ValueError(f"u^{k}: {exc}") from None
    return TruncatedSeries(coeffs, order)


def series_from_terms(terms: Iterable[tuple[int, object]], order: int) -> TruncatedSeries:
    coeffs = [0] * (order + 1)
    for k, c in terms:
        coeffs[k] = coeffs[k] + c
    return TruncatedSeries(coeffs, order)

"""Deterministic text rendering of elements and classes."""

from __future__ import annotations

from fractions import Fraction

from .coeff_ring import TPoly, format_monomial, format_rational, format_tpoly, mono_sort_key


def _join(pieces: list[str]) -> str:
    if not pieces:
        return "0"
    out = pieces[0]
    for piece in pieces[1:]:
        out += f" - {piece[1:]}" if piece.startswith("-") else f" + {piece}"
    return out


def _scaled(coeff, name: str) -> str:
    if isinstance(coeff, TPoly):
        text = format_tpoly(coeff)
        if len(coeff.terms) > 1:
            text = f"({text})"
        return text if name == "1" else f"{text}*{name}"
    c = Fraction(coeff)
    if name == "1":
        return format_rational(c)
    if c == 1:
        return name
    if c == -1:
        return f"-{name}"
    return f"{format_rational(c)}*{name}"


def format_element(x) -> str:
    alg = x.algebra
    return _join([_scaled(c, alg.key_name(k)) for k, c in x.sorted_items()])


def format_class(x) -> str:
    """Render an OmegaClass as ``c*t1^a*...*name`` terms in canonical order."""
    pieces = []
    alg = x.model
    for mono in sorted(x.terms, key=mono_sort_key):
        tm = format_monomial(mono)
        for k, c in x.terms[mono].sorted_items():
            name = alg.key_name(k)
            if tm:
                name = tm if name == "1" else f"{tm}*{name}"
            pieces.append(_scaled(c, name))
    return _join(pieces)

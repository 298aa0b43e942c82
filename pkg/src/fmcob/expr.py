"""Parser for element expressions such as ``2*theta - 1/3*t1*theta^2 + pi|1``.

Grammar::

    expr   := ["+"|"-"] term (("+"|"-") term)*
    term   := factor ("*" factor)*
    factor := atom ["^" integer]
    atom   := rational | t<i> | basis-name | "(" expr ")"

Basis names may contain ``|`` (tensor factors) and primes.  ``t<i>`` is a
t-variable unless the algebra has a basis element of that name.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .algebra import Element
from .coeff_ring import TPoly, t_var


class ExprError(ValueError):
    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        super().__init__(f"{message} at column {position + 1}")


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?(?![A-Za-z_'|0-9]))"
    r"|(?P<name>[A-Za-z0-9_']+(?:\|[A-Za-z0-9_']+)*)"
    r"|(?P<op>[-+*^()]))"
)
_TVAR_RE = re.compile(r"t([1-9]\d*)$")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens, pos = [], 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN_RE.match(text, pos)
        if not m:
            start = len(text) - len(text[pos:].lstrip())
            raise ExprError(f"unexpected character {text[start]!r}", start, text)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, algebra, t_order: int | None):
        self.text = text
        self.algebra = algebra
        self.t_order = t_order
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message, tok=None):
        tok = tok or self.peek()
        raise ExprError(message, tok[2], self.text)

    def parse(self):
        if self.peek()[0] == "end":
            self.error("empty expression")
        value = self.expr()
        if self.peek()[0] != "end":
            self.error(f"unexpected {self.peek()[1]!r}")
        return value

    def expr(self):
        sign = 1
        if self.peek()[1] in "+-" and self.peek()[0] == "op":
            sign = -1 if self.take()[1] == "-" else 1
        value = _mul(sign, self.term())
        while self.peek()[0] == "op" and self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            rhs = self.term()
            value = _add(value, rhs if op == "+" else _mul(-1, rhs))
        return value

    def term(self):
        value = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] == "*":
            self.take()
            value = _mul(value, self.factor())
        return value

    def factor(self):
        value = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            tok = self.take()
            if tok[0] != "num" or "/" in tok[1]:
                self.error("exponent must be a non-negative integer", tok)
            n = int(tok[1])
            result = 1
            for _ in range(n):
                result = _mul(result, value)
            value = result
        return value

    def atom(self):
        tok = self.take()
        kind, text, pos = tok
        if kind == "num":
            num, _, den = text.partition("/")
            if den and int(den) == 0:
                self.error("zero denominator", tok)
            return Fraction(int(num), int(den or 1))
        if kind == "name":
            if self.algebra is not None and text in self.algebra.index:
                return self.algebra.basis_element(self.algebra.index[text])
            m = _TVAR_RE.match(text)
            if m:
                if self.t_order is None:
                    self.error(f"t-variable {text!r} not allowed here", tok)
                return t_var(int(m.group(1)), self.t_order)
            self.error(f"unknown name {text!r}", tok)
        if kind == "op" and text == "(":
            value = self.expr()
            if self.take()[1] != ")":
                self.error("expected ')'", self.tokens[self.i - 1])
            return value
        if kind == "end":
            self.error("unexpected end of expression", tok)
        self.error(f"unexpected {text!r}", tok)


def _mul(a, b):
    if isinstance(a, Element) or isinstance(b, Element):
        if isinstance(a, Element) and isinstance(b, Element):
            return a * b
        return a.scale(b) if isinstance(a, Element) else b.scale(a)
    return a * b


def _add(a, b):
    if isinstance(a, Element) or isinstance(b, Element):
        if not isinstance(a, Element):
            a, b = b, a
        if not isinstance(b, Element):
            b = a.algebra.one().scale(b)
        return a + b
    return a + b


def parse_expression(text: str, algebra, t_order: int | None = None) -> Element:
    """Parse ``text`` into an element of ``algebra``.

    Coefficients are Fractions, or TPolys of the given order when
    t-variables are allowed.
    """
    value = _Parser(text, algebra, t_order).parse()
    if not isinstance(value, Element):
        value = algebra.one().scale(value) if value else algebra.zero()
    if t_order is not None:
        value = Element(algebra, {k: c if isinstance(c, TPoly) else TPoly.const(c, t_order)
                                  for k, c in value.coeffs.items()})
    return value


def parse_scalar(text: str) -> Fraction:
    value = _Parser(text, None, None).parse()
    return Fraction(value)

"""Operator-expression grammar.

::

    expr   := ['-'] term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := base ('^' uint)?
    base   := rational | 'x' | 'D' | '(' expr ')'

``rational`` is ``p`` or ``p/q``.  ``∂`` is accepted for ``D``.  Whitespace
is ignored and multiplication must be written out.  A leading minus is
allowed at the start of any ``expr`` so that printed operators parse back.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .algebra import EXACT, Poly
from .weyl import WeylOp, format_op, op_pow


class OpSyntaxError(SyntaxError):
    def __init__(self, msg: str, text: str, pos: int):
        super().__init__(f"{msg} at position {pos}")
        self.text = text
        self.position = pos


class NegativeExponent(OpSyntaxError):
    pass


# -- syntax tree ----------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Sym:
    name: str  # "x" or "D"


@dataclass(frozen=True)
class Neg:
    arg: object


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Pow:
    base: object
    exp: int


def evaluate(node) -> WeylOp:
    if isinstance(node, Num):
        return WeylOp.scalar(node.value, EXACT)
    if isinstance(node, Sym):
        return WeylOp.x() if node.name == "x" else WeylOp.d()
    if isinstance(node, Neg):
        return -evaluate(node.arg)
    if isinstance(node, Pow):
        return op_pow(evaluate(node.base), node.exp)
    a, b = evaluate(node.left), evaluate(node.right)
    if node.op == "+":
        return a + b
    if node.op == "-":
        return a - b
    return a * b


# -- tokenizer and parser ---------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([xD∂])|(\S))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # trailing whitespace
            break
        if m.group(1):
            out.append(("num", m.group(1), m.start(1)))
        elif m.group(2):
            out.append(("sym", "D" if m.group(2) == "∂" else m.group(2), m.start(2)))
        elif m.group(3):
            ch = m.group(3)
            if ch not in "+-*^()/":
                raise OpSyntaxError(f"unexpected character {ch!r}", text, m.start(3))
            out.append(("op", ch, m.start(3)))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, msg: str, tok=None):
        tok = tok or self.peek()
        raise OpSyntaxError(msg, self.text, tok[2])

    def expect(self, kind: str, value: str | None = None):
        t = self.peek()
        if t[0] != kind or (value is not None and t[1] != value):
            self.fail(f"expected {value or kind}")
        return self.take()

    def expr(self):
        node = None
        if self.peek()[:2] == ("op", "-"):
            self.take()
            node = Neg(self.term())
        else:
            node = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.peek()[:2] == ("op", "*"):
            self.take()
            node = BinOp("*", node, self.factor())
        return node

    def factor(self):
        node = self.base()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            t = self.peek()
            if t[:2] == ("op", "-"):
                raise NegativeExponent("negative exponent", self.text, t[2])
            if t[0] != "num":
                self.fail("expected a nonnegative integer exponent")
            node = Pow(node, int(self.take()[1]))
        return node

    def base(self):
        t = self.peek()
        if t[0] == "num":
            self.take()
            value = Fraction(int(t[1]))
            if self.peek()[:2] == ("op", "/"):
                self.take()
                den = self.expect("num")
                if int(den[1]) == 0:
                    self.fail("zero denominator", den)
                value = Fraction(int(t[1]), int(den[1]))
            return Num(value)
        if t[0] == "sym":
            self.take()
            return Sym(t[1])
        if t[:2] == ("op", "("):
            self.take()
            node = self.expr()
            self.expect("op", ")")
            return node
        if t[0] == "end":
            self.fail("unexpected end of input")
        self.fail(f"unexpected {t[1]!r}")

    def parse(self):
        node = self.expr()
        if self.peek()[0] != "end":
            self.fail(f"unexpected {self.peek()[1]!r}")
        return node


def parse_expr(text: str):
    """Syntax tree of ``text``."""
    return _Parser(text).parse()


def parse_op(text: str) -> WeylOp:
    """Normal form of the operator written in ``text``."""
    return evaluate(parse_expr(text))


def print_op(L: WeylOp) -> str:
    return format_op(L)


def parse_poly(text: str, var: str = "x") -> Poly:
    """A polynomial in the single symbol ``var`` ("x" or "D")."""
    L = parse_op(text)
    if var == "x":
        if L.order > 0:
            raise ValueError(f"{text!r} is not a polynomial in x")
        return L[0]
    if any(c.degree > 0 for c in L.coeffs):
        raise ValueError(f"{text!r} is not a polynomial in D")
    return Poly([c[0] for c in L.coeffs], EXACT)

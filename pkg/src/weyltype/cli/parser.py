"""Expression language for algebra elements.

Grammar (``^`` binds tighter than ``*`` and ``/``, which bind tighter than
``+`` and ``-``; products are left-associative and noncommutative)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' INT)?
    atom   := NUMBER | 'sqrt' '(' INT ')' | 't' '^' '(' expr (',' expr)* ')'
            | 'D' | 'D1' ... | 'C' | '[' expr ',' expr ']' | 'sigma' '(' expr ')'
            | '(' expr ')'
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

from ..gamma import GroupContext, NotInGroupError
from ..scalars import Scalar, to_scalar
from ..weyl import AlgebraElement, ExtendedElement, bracket, extended_bracket, sigma


class ParseError(ValueError):
    """Malformed expression; ``pos`` is the 0-based character offset."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


class EvalError(ValueError):
    """Well-formed expression with no meaning in the current context."""


# -- syntax tree ---------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Sqrt:
    radicand: int


@dataclass(frozen=True)
class TPow:
    coords: tuple


@dataclass(frozen=True)
class DGen:
    index: int  # 0-based


@dataclass(frozen=True)
class Central:
    pass


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Neg:
    arg: object


@dataclass(frozen=True)
class Pow:
    base: object
    exp: int


@dataclass(frozen=True)
class Bracket:
    left: object
    right: object


@dataclass(frozen=True)
class Sigma:
    arg: object


Expression = Union[Num, Sqrt, TPow, DGen, Central, BinOp, Neg, Pow, Bracket, Sigma]

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()\[\],]))")


def tokenize(text: str):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[start]!r}", start)
        kind = m.lastgroup
        out.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.k = 0

    def peek(self):
        return self.tokens[self.k]

    def take(self, value=None, kind=None):
        tok = self.tokens[self.k]
        if (value is not None and tok[1] != value) or (kind is not None and tok[0] != kind):
            want = repr(value) if value is not None else kind
            got = repr(tok[1]) if tok[0] != "end" else "end of input"
            raise ParseError(f"expected {want}, found {got}", tok[2])
        self.k += 1
        return tok

    def parse(self):
        node = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected {tok[1]!r}", tok[2])
        return node

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self):
        if self.peek()[1] == "-" and self.peek()[0] == "op":
            self.take()
            return Neg(self.unary())
        return self.power()

    def power(self):
        node = self.atom()
        if self.peek()[1] == "^":
            self.take()
            tok = self.take(kind="num")
            node = Pow(node, int(tok[1]))
        return node

    def atom(self):
        kind, value, pos = self.peek()
        if kind == "num":
            self.take()
            return Num(int(value))
        if kind == "name":
            self.take()
            if value == "sqrt":
                self.take("(")
                r = int(self.take(kind="num")[1])
                self.take(")")
                return Sqrt(r)
            if value == "t":
                self.take("^")
                self.take("(")
                coords = [self.expr()]
                while self.peek()[1] == ",":
                    self.take()
                    coords.append(self.expr())
                self.take(")")
                return TPow(tuple(coords))
            if value == "C":
                return Central()
            if value == "sigma":
                self.take("(")
                arg = self.expr()
                self.take(")")
                return Sigma(arg)
            m = re.fullmatch(r"D(\d*)", value)
            if m:
                idx = int(m.group(1)) if m.group(1) else 0
                if m.group(1) and idx < 1:
                    raise ParseError("D indices start at 1", pos)
                return DGen(idx - 1 if m.group(1) else -1)
            raise ParseError(f"unknown name {value!r}", pos)
        if value == "(":
            self.take()
            node = self.expr()
            self.take(")")
            return node
        if value == "[":
            self.take()
            left = self.expr()
            self.take(",")
            right = self.expr()
            self.take("]")
            return Bracket(left, right)
        got = repr(value) if kind != "end" else "end of input"
        raise ParseError(f"unexpected {got}", pos)


def parse(text: str) -> Expression:
    """Parse an expression; raises :class:`ParseError` with the offset."""
    return _Parser(text).parse()


# -- evaluation ----------------------------------------------------------------

Value = Union[Scalar, AlgebraElement, ExtendedElement]


class Evaluator:
    """Evaluates syntax trees in a fixed group context.

    With ``central=True`` brackets are taken in the central extension even
    when ``C`` does not occur.
    """

    def __init__(self, ctx: GroupContext, central: bool = False):
        self.ctx = ctx
        self.central = central
        if central and ctx.n != 1:
            raise EvalError("the central extension exists only for n = 1")

    def __call__(self, node) -> Value:
        value = self.eval(node)
        if self.central and isinstance(value, AlgebraElement):
            return ExtendedElement(value)
        return value

    # helpers
    def _elem(self, v):
        if isinstance(v, Scalar):
            return AlgebraElement.scalar(self.ctx, v)
        return v

    def _ext(self, v):
        v = self._elem(v)
        return v if isinstance(v, ExtendedElement) else ExtendedElement(v)

    def eval(self, node) -> Value:
        ctx = self.ctx
        if isinstance(node, Num):
            return to_scalar(node.value, ctx.field)
        if isinstance(node, Sqrt):
            if node.radicand == ctx.d:
                return ctx.field.sqrt_d()
            root = _int_sqrt(node.radicand)
            if root is None:
                raise EvalError(f"sqrt({node.radicand}) is not in Q(sqrt({ctx.d}))")
            return to_scalar(root, ctx.field)
        if isinstance(node, TPow):
            coords = [self.eval(c) for c in node.coords]
            if any(not isinstance(c, Scalar) for c in coords):
                raise EvalError("group exponents must be scalars")
            if len(coords) != ctx.n:
                raise EvalError(f"t^(...) needs {ctx.n} coordinates")
            try:
                alpha = ctx.point(coords)
            except NotInGroupError as exc:
                raise EvalError(str(exc)) from None
            return AlgebraElement.monomial(ctx, alpha, (0,) * ctx.n)
        if isinstance(node, DGen):
            if node.index == -1:
                if ctx.n != 1:
                    raise EvalError("use D1..Dn when n > 1")
                return AlgebraElement.D(ctx, 0)
            if node.index >= ctx.n:
                raise EvalError(f"D{node.index + 1} does not exist for n = {ctx.n}")
            return AlgebraElement.D(ctx, node.index)
        if isinstance(node, Central):
            if ctx.n != 1:
                raise EvalError("C exists only for n = 1")
            return ExtendedElement.C(ctx)
        if isinstance(node, Neg):
            v = self.eval(node.arg)
            return -v
        if isinstance(node, Pow):
            base = self.eval(node.base)
            if isinstance(base, ExtendedElement):
                raise EvalError("powers are not defined in the central extension")
            return base**node.exp
        if isinstance(node, Sigma):
            v = self._elem(self.eval(node.arg))
            if isinstance(v, ExtendedElement):
                raise EvalError("sigma is defined on W only")
            return sigma(v)
        if isinstance(node, Bracket):
            a, b = self.eval(node.left), self.eval(node.right)
            if self.central or isinstance(a, ExtendedElement) or isinstance(b, ExtendedElement):
                return extended_bracket(self._ext(a), self._ext(b))
            return bracket(self._elem(a), self._elem(b))
        if isinstance(node, BinOp):
            a, b = self.eval(node.left), self.eval(node.right)
            if node.op in "+-":
                if isinstance(a, Scalar) and isinstance(b, Scalar):
                    return a + b if node.op == "+" else a - b
                if isinstance(a, ExtendedElement) or isinstance(b, ExtendedElement):
                    a, b = self._ext(a), self._ext(b)
                else:
                    a, b = self._elem(a), self._elem(b)
                return a + b if node.op == "+" else a - b
            if node.op == "/":
                if not isinstance(b, Scalar):
                    raise EvalError("only division by scalars is defined")
                if b.is_zero():
                    raise EvalError("division by zero")
                return a / b if isinstance(a, Scalar) else a.scale(b.inverse())
            # product
            if isinstance(a, Scalar) and isinstance(b, Scalar):
                return a * b
            if isinstance(a, Scalar):
                return b.scale(a)
            if isinstance(b, Scalar):
                return a.scale(b)
            if isinstance(a, ExtendedElement) or isinstance(b, ExtendedElement):
                raise EvalError("products involving C are not defined; use brackets")
            return a * b
        raise EvalError(f"cannot evaluate {node!r}")


def _int_sqrt(k: int):
    r = math.isqrt(k)
    return r if r * r == k else None


def evaluate(text: str, ctx: GroupContext, central: bool = False) -> Value:
    return Evaluator(ctx, central)(parse(text))

"""Exact arithmetic in Q and in real quadratic fields Q(sqrt(d)).

A :class:`Scalar` stores ``(a_num + b_num*sqrt(d)) / den`` with integers in
lowest terms, so equality and hashing are plain tuple operations.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cache
from numbers import Rational

__all__ = [
    "QQ",
    "FieldContext",
    "FieldMismatchError",
    "Scalar",
    "binomial",
    "falling_factorial",
    "parse_scalar",
    "to_scalar",
]


class FieldMismatchError(ValueError):
    """Raised when scalars from different fields are combined."""


def _is_squarefree(d: int) -> bool:
    k = 2
    while k * k <= d:
        if d % (k * k) == 0:
            return False
        k += 1
    return True


@dataclass(frozen=True)
class FieldContext:
    """The base field: Q when ``d == 0``, otherwise Q(sqrt(d))."""

    d: int = 0

    def __post_init__(self):
        if not isinstance(self.d, int) or self.d < 0:
            raise ValueError(f"d must be a nonnegative integer, got {self.d!r}")
        if self.d == 1 or (self.d > 1 and not _is_squarefree(self.d)):
            raise ValueError(f"d must be squarefree and different from 1, got {self.d}")

    def __call__(self, a=0, b=0) -> Scalar:
        return Scalar(a, b, self)

    @property
    def zero(self) -> Scalar:
        return Scalar._raw(0, 0, 1, self.d)

    @property
    def one(self) -> Scalar:
        return Scalar._raw(1, 0, 1, self.d)

    def sqrt_d(self) -> Scalar:
        if self.d == 0:
            raise ValueError("Q has no adjoined square root")
        return Scalar._raw(0, 1, 1, self.d)

    def __str__(self):
        return "QQ" if self.d == 0 else f"QQ(sqrt({self.d}))"


QQ = FieldContext(0)


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as a rational number")


class Scalar:
    """Element ``a + b*sqrt(d)`` of Q(sqrt(d)), immutable and exact."""

    __slots__ = ("_an", "_bn", "_d", "_den", "_hash")

    def __init__(self, a=0, b=0, field: FieldContext | int = QQ):
        d = field.d if isinstance(field, FieldContext) else FieldContext(field).d
        fa, fb = _as_fraction(a), _as_fraction(b)
        if d == 0 and fb != 0:
            raise ValueError("b must be zero over Q")
        den = fa.denominator * fb.denominator // math.gcd(fa.denominator, fb.denominator)
        self._set(fa.numerator * (den // fa.denominator), fb.numerator * (den // fb.denominator), den, d)

    def _set(self, an, bn, den, d):
        g = math.gcd(math.gcd(an, bn), den)
        if g != 1:
            an //= g
            bn //= g
            den //= g
        self._an, self._bn, self._den, self._d = an, bn, den, d
        self._hash = None

    @classmethod
    def _raw(cls, an, bn, den, d) -> Scalar:
        s = object.__new__(cls)
        if den < 0:
            an, bn, den = -an, -bn, -den
        s._set(an, bn, den, d)
        return s

    # -- accessors -------------------------------------------------------

    @property
    def a(self) -> Fraction:
        return Fraction(self._an, self._den)

    @property
    def b(self) -> Fraction:
        return Fraction(self._bn, self._den)

    @property
    def d(self) -> int:
        return self._d

    @property
    def field(self) -> FieldContext:
        return FieldContext(self._d)

    def is_zero(self) -> bool:
        return self._an == 0 and self._bn == 0

    def is_rational(self) -> bool:
        return self._bn == 0

    def is_integer(self) -> bool:
        return self._bn == 0 and self._den == 1

    def to_fraction(self) -> Fraction:
        if self._bn:
            raise ValueError(f"{self} is not rational")
        return Fraction(self._an, self._den)

    def __int__(self):
        if not self.is_integer():
            raise ValueError(f"{self} is not an integer")
        return self._an

    def sort_key(self):
        return (self.a, self.b)

    # -- coercion --------------------------------------------------------

    def _coerce(self, other) -> Scalar:
        if isinstance(other, Scalar):
            if other._d != self._d:
                raise FieldMismatchError(f"cannot combine elements of QQ(sqrt({self._d})) and QQ(sqrt({other._d}))")
            return other
        if isinstance(other, int):
            return Scalar._raw(other, 0, 1, self._d)
        if isinstance(other, Fraction):
            return Scalar._raw(other.numerator, 0, other.denominator, self._d)
        return NotImplemented

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self._den == o._den:
            return Scalar._raw(self._an + o._an, self._bn + o._bn, self._den, self._d)
        return Scalar._raw(
            self._an * o._den + o._an * self._den,
            self._bn * o._den + o._bn * self._den,
            self._den * o._den,
            self._d,
        )

    __radd__ = __add__

    def __neg__(self):
        s = object.__new__(Scalar)
        s._an, s._bn, s._den, s._d, s._hash = -self._an, -self._bn, self._den, self._d, None
        return s

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self._bn == 0 and o._bn == 0:
            return Scalar._raw(self._an * o._an, 0, self._den * o._den, self._d)
        return Scalar._raw(
            self._an * o._an + self._d * self._bn * o._bn,
            self._an * o._bn + self._bn * o._an,
            self._den * o._den,
            self._d,
        )

    __rmul__ = __mul__

    def conjugate(self) -> Scalar:
        return Scalar._raw(self._an, -self._bn, self._den, self._d)

    def norm(self) -> Fraction:
        """Field norm ``a^2 - d*b^2`` (a rational number)."""
        return Fraction(self._an * self._an - self._d * self._bn * self._bn, self._den * self._den)

    def inverse(self) -> Scalar:
        if self.is_zero():
            raise ZeroDivisionError("division by zero scalar")
        # 1/(x) = conj(x)/N(x), with x = (an + bn r)/den
        n = self._an * self._an - self._d * self._bn * self._bn
        return Scalar._raw(self._an * self._den, -self._bn * self._den, n, self._d)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = Scalar._raw(1, 0, 1, self._d)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- comparison ------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return (self._an, self._bn, self._den, self._d) == (other._an, other._bn, other._den, other._d)
        if isinstance(other, (int, Fraction)):
            return self._bn == 0 and Fraction(self._an, self._den) == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if self._bn == 0:
                self._hash = hash(Fraction(self._an, self._den))
            else:
                self._hash = hash((self._an, self._bn, self._den, self._d))
        return self._hash

    def __bool__(self):
        return not self.is_zero()

    # -- text ------------------------------------------------------------

    def __str__(self):
        a, b = self.a, self.b
        if b == 0:
            return str(a)
        if abs(b) == 1:
            root = f"sqrt({self._d})"
        else:
            root = f"{abs(b)}*sqrt({self._d})"
        if a == 0:
            return root if b > 0 else "-" + root
        return f"{a}{'+' if b > 0 else '-'}{root}"

    def __repr__(self):
        return f"Scalar({self})"

    def to_sympy(self):
        import sympy

        expr = sympy.Rational(self._an, self._den)
        if self._bn:
            expr += sympy.Rational(self._bn, self._den) * sympy.sqrt(self._d)
        return expr


def to_scalar(x, field: FieldContext | int = QQ) -> Scalar:
    """Coerce an int, Fraction, str or Scalar into ``field``."""
    d = field.d if isinstance(field, FieldContext) else field
    if isinstance(x, Scalar):
        if x.d != d:
            if x.is_rational():
                return Scalar._raw(x._an, 0, x._den, d)
            raise FieldMismatchError(f"{x} does not lie in QQ(sqrt({d}))")
        return x
    if isinstance(x, str):
        return parse_scalar(x, d)
    f = _as_fraction(x)
    return Scalar._raw(f.numerator, 0, f.denominator, d)


_TOKEN = re.compile(r"\s*(?:(\d+)|(sqrt)|(.))")


def parse_scalar(text: str, field: FieldContext | int = QQ) -> Scalar:
    """Parse textual scalars such as ``3/4``, ``-1/2+3/5*sqrt(2)`` or ``sqrt(2)``.

    The grammar is a small arithmetic language (``+ - * /``, parentheses,
    integers, ``sqrt(k)``); ``sqrt(k)`` must match the field's ``d``.
    """
    d = field.d if isinstance(field, FieldContext) else field
    tokens = []
    for num, sq, other in _TOKEN.findall(text):
        if num:
            tokens.append(("int", int(num)))
        elif sq:
            tokens.append(("sqrt", None))
        elif other.strip():
            tokens.append((other, None))
    pos = 0

    def peek():
        return tokens[pos][0] if pos < len(tokens) else None

    def take(kind):
        nonlocal pos
        if peek() != kind:
            raise ValueError(f"malformed scalar {text!r}: expected {kind!r}")
        tok = tokens[pos]
        pos += 1
        return tok

    def expr():
        value = term()
        while peek() in ("+", "-"):
            op = take(peek())[0]
            rhs = term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term():
        value = unary()
        while peek() in ("*", "/"):
            op = take(peek())[0]
            rhs = unary()
            value = value * rhs if op == "*" else value / rhs
        return value

    def unary():
        if peek() == "-":
            take("-")
            return -unary()
        if peek() == "+":
            take("+")
            return unary()
        return atom()

    def atom():
        kind = peek()
        if kind == "int":
            return Scalar._raw(take("int")[1], 0, 1, d)
        if kind == "sqrt":
            take("sqrt")
            take("(")
            k = take("int")[1]
            take(")")
            if k != d:
                raise FieldMismatchError(f"sqrt({k}) is not in QQ(sqrt({d}))" if d else f"sqrt({k}) is not in QQ")
            return Scalar._raw(0, 1, 1, d)
        if kind == "(":
            take("(")
            value = expr()
            take(")")
            return value
        raise ValueError(f"malformed scalar {text!r}")

    value = expr()
    if pos != len(tokens):
        raise ValueError(f"malformed scalar {text!r}: trailing input")
    return value


@cache
def _factorial(j: int) -> int:
    return math.factorial(j)


def falling_factorial(x, j: int):
    """``x (x-1) ... (x-j+1)``; the empty product (``j == 0``) is 1."""
    if j < 0:
        raise ValueError("j must be nonnegative")
    result = 1
    for k in range(j):
        result = (x - k) * result
    return result


def binomial(x, j: int):
    """Generalized binomial coefficient ``x(x-1)...(x-j+1)/j!``.

    ``x`` may be an int, a Fraction or a :class:`Scalar`; negative ``j``
    gives 0 as in the usual convention.
    """
    if j < 0:
        return 0 * x if isinstance(x, Scalar) else 0
    if isinstance(x, int):
        if x >= 0:
            return math.comb(x, j)
        return (-1) ** j * math.comb(j - x - 1, j)
    num = falling_factorial(x, j)
    if isinstance(num, Scalar):
        return num / _factorial(j)
    return Fraction(num, _factorial(j))

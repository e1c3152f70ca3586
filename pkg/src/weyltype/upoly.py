"""Dense univariate polynomials over Q(sqrt(d)).

Used for characteristic/minimal polynomials and invariant factors. Only
factorization is delegated to sympy.
"""

from __future__ import annotations

from fractions import Fraction

from .scalars import FieldContext, Scalar, to_scalar


class UPoly:
    """Polynomial ``sum coeffs[k] * x**k`` with :class:`Scalar` coefficients."""

    __slots__ = ("coeffs", "field")

    def __init__(self, coeffs, field: FieldContext):
        cs = [to_scalar(c, field) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs = tuple(cs)
        self.field = field

    @classmethod
    def x(cls, field):
        return cls([0, 1], field)

    @classmethod
    def const(cls, c, field):
        return cls([c], field)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def lc(self) -> Scalar:
        return self.coeffs[-1]

    def monic(self) -> UPoly:
        if self.is_zero():
            return self
        inv = self.lc().inverse()
        return UPoly([c * inv for c in self.coeffs], self.field)

    def _lift(self, other):
        if isinstance(other, UPoly):
            return other
        return UPoly([other], self.field)

    def __add__(self, other):
        other = self._lift(other)
        n = max(len(self.coeffs), len(other.coeffs))
        z = self.field.zero
        return UPoly(
            [(self.coeffs[k] if k < len(self.coeffs) else z) + (other.coeffs[k] if k < len(other.coeffs) else z) for k in range(n)],
            self.field,
        )

    __radd__ = __add__

    def __neg__(self):
        return UPoly([-c for c in self.coeffs], self.field)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        if self.is_zero() or other.is_zero():
            return UPoly([], self.field)
        out = [self.field.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return UPoly(out, self.field)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = UPoly([1], self.field)
        for _ in range(k):
            result = result * self
        return result

    def __divmod__(self, other):
        other = self._lift(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        q = [self.field.zero] * max(len(rem) - other.degree, 1)
        inv = other.lc().inverse()
        while len(rem) - 1 >= other.degree and rem:
            shift = len(rem) - 1 - other.degree
            f = rem[-1] * inv
            q[shift] = f
            for k, c in enumerate(other.coeffs):
                rem[shift + k] = rem[shift + k] - f * c
            rem.pop()
            while rem and rem[-1].is_zero():
                rem.pop()
        return UPoly(q, self.field), UPoly(rem, self.field)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __eq__(self, other):
        if isinstance(other, UPoly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def derivative(self) -> UPoly:
        return UPoly([c * k for k, c in enumerate(self.coeffs)][1:], self.field)

    def __call__(self, x):
        acc = self.field.zero
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def gcd(self, other) -> UPoly:
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def squarefree_part(self) -> UPoly:
        return (self // self.gcd(self.derivative())).monic()

    def to_sympy(self, var):
        return sum((c.to_sympy() * var**k for k, c in enumerate(self.coeffs)), 0)

    def factor(self) -> list[tuple[UPoly, int]]:
        """Monic irreducible factors over the field, with multiplicities."""
        import sympy

        if self.degree < 1:
            return []
        x = sympy.Symbol("x")
        kwargs = {"extension": sympy.sqrt(self.field.d)} if self.field.d else {}
        _, factors = sympy.factor_list(self.to_sympy(x), x, **kwargs)
        out = []
        for f, mult in factors:
            coeffs = sympy.Poly(f, x).all_coeffs()[::-1]
            out.append((UPoly([_from_sympy(c, self.field) for c in coeffs], self.field).monic(), mult))
        out.sort(key=lambda fm: (fm[0].degree, [c.sort_key() for c in fm[0].coeffs]))
        return out

    def is_irreducible(self) -> bool:
        fs = self.factor()
        return len(fs) == 1 and fs[0][1] == 1

    def __repr__(self):
        terms = [f"({c})*x^{k}" for k, c in enumerate(self.coeffs) if not c.is_zero()]
        return "UPoly(" + (" + ".join(terms) or "0") + ")"


def _from_sympy(expr, field: FieldContext) -> Scalar:
    import sympy

    expr = sympy.expand(expr)
    if field.d == 0:
        r = sympy.Rational(expr)
        return Scalar(Fraction(int(r.p), int(r.q)), 0, field)
    root = sympy.sqrt(field.d)
    b = sympy.Rational(expr.coeff(root))
    a = sympy.Rational(sympy.expand(expr - b * root))
    return Scalar(Fraction(int(a.p), int(a.q)), Fraction(int(b.p), int(b.q)), field)

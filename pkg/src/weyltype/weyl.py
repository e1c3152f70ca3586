"""Generalized Weyl algebras A(Gamma, n) and their Lie algebras W(Gamma, n).

Elements are sparse maps ``(alpha, mu) -> coefficient`` standing for
``t^alpha D^mu`` where ``alpha`` is a group point (tuple of Scalars) and
``mu`` a tuple of nonnegative integers. The product is

    (t^a D^m)(t^b D^n) = sum_l binom(m, l) b^l t^(a+b) D^(m+n-l)

with multi-index binomials and powers taken coordinatewise.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Iterable, Mapping
from functools import cache

from .gamma import DerivationVector, GroupContext, inner_product, point_key
from .scalars import Scalar, binomial, to_scalar

__all__ = [
    "AlgebraElement",
    "ContextMismatchError",
    "DegeneratePairError",
    "ExtendedElement",
    "bracket",
    "cocycle",
    "embed_rank1",
    "extended_bracket",
    "from_ddt",
    "from_falling",
    "grade_decompose",
    "level",
    "mul",
    "rank1_coordinates",
    "sigma",
    "stirling1",
    "stirling2",
    "to_ddt",
    "to_falling",
]


class ContextMismatchError(ValueError):
    """Operands live over different groups."""


class DegeneratePairError(ValueError):
    """``<alpha, d> = 0``, so ``t^alpha`` and ``d`` do not span a rank-one subalgebra."""


@cache
def stirling2(m: int, k: int) -> int:
    """Stirling numbers of the second kind: ``x^m = sum_k S(m,k) [x]_k``."""
    if m == k:
        return 1
    if k == 0 or k > m:
        return 0
    return k * stirling2(m - 1, k) + stirling2(m - 1, k - 1)


@cache
def stirling1(m: int, k: int) -> int:
    """Signed Stirling numbers of the first kind: ``[x]_m = sum_k s(m,k) x^k``."""
    if m == k:
        return 1
    if k == 0 or k > m:
        return 0
    return stirling1(m - 1, k - 1) - (m - 1) * stirling1(m - 1, k)


def level(mu) -> int:
    return sum(mu)


def monomial_key(key):
    alpha, mu = key
    return (point_key(alpha), sum(mu), mu)


def _check_ctx(x, y):
    if x.ctx != y.ctx:
        raise ContextMismatchError("elements belong to different contexts")


class AlgebraElement:
    """Finite linear combination of monomials ``t^alpha D^mu``."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: GroupContext, terms: Mapping | None = None):
        self.ctx = ctx
        self.terms = {}
        if terms:
            for (alpha, mu), c in terms.items():
                alpha = tuple(to_scalar(a, ctx.field) for a in alpha)
                mu = tuple(int(m) for m in mu)
                if len(alpha) != ctx.n or len(mu) != ctx.n or min(mu) < 0:
                    raise ValueError(f"bad monomial {alpha}, {mu}")
                c = to_scalar(c, ctx.field)
                key = (alpha, mu)
                total = self.terms.get(key, ctx.field.zero) + c
                if total.is_zero():
                    self.terms.pop(key, None)
                else:
                    self.terms[key] = total

    @classmethod
    def _wrap(cls, ctx, terms):
        e = object.__new__(cls)
        e.ctx = ctx
        e.terms = terms
        return e

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls, ctx):
        return cls._wrap(ctx, {})

    @classmethod
    def one(cls, ctx):
        return cls.monomial(ctx, ctx.zero, (0,) * ctx.n)

    @classmethod
    def monomial(cls, ctx, alpha, mu, coeff=1):
        """``coeff * t^alpha D^mu``; ``alpha`` is validated against the group."""
        alpha = ctx.point(alpha)
        return cls(ctx, {(alpha, tuple(mu)): coeff})

    @classmethod
    def t(cls, ctx, alpha):
        return cls.monomial(ctx, alpha, (0,) * ctx.n)

    @classmethod
    def D(cls, ctx, i: int = 0, power: int = 1):
        mu = [0] * ctx.n
        mu[i] = power
        return cls.monomial(ctx, ctx.zero, mu)

    @classmethod
    def scalar(cls, ctx, c):
        return cls.one(ctx) * to_scalar(c, ctx.field)

    # -- basic protocol --------------------------------------------------

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, AlgebraElement):
            return self.ctx == other.ctx and self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def sorted_terms(self):
        """Terms in canonical order: lex on alpha coordinates, then graded-lex on mu."""
        return sorted(self.terms.items(), key=lambda kv: monomial_key(kv[0]))

    def support(self):
        return [k for k, _ in self.sorted_terms()]

    def coeff(self, alpha, mu) -> Scalar:
        alpha = tuple(to_scalar(a, self.ctx.field) for a in alpha)
        return self.terms.get((alpha, tuple(mu)), self.ctx.field.zero)

    def __add__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        _check_ctx(self, other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k)
            if s is None:
                out[k] = c
            else:
                s = s + c
                if s.is_zero():
                    del out[k]
                else:
                    out[k] = s
        return AlgebraElement._wrap(self.ctx, out)

    def __neg__(self):
        return AlgebraElement._wrap(self.ctx, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self + (-other)

    def scale(self, s):
        s = to_scalar(s, self.ctx.field)
        if s.is_zero():
            return AlgebraElement.zero(self.ctx)
        return AlgebraElement._wrap(self.ctx, {k: c * s for k, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return mul(self, other)
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __rmul__(self, other):
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not defined")
        result = AlgebraElement.one(self.ctx)
        for _ in range(k):
            result = mul(result, self)
        return result

    def grades(self):
        return sorted({alpha for alpha, _ in self.terms}, key=point_key)

    def is_homogeneous(self):
        return len({alpha for alpha, _ in self.terms}) <= 1

    def __repr__(self):
        return f"AlgebraElement({format_element(self)})"

    def __str__(self):
        return format_element(self)


# -- product -----------------------------------------------------------------


_POINT_SUM: dict = {}


def _point_add(a, b):
    key = (a, b)
    s = _POINT_SUM.get(key)
    if s is None:
        s = tuple(x + y for x, y in zip(a, b))
        if len(_POINT_SUM) > 200_000:
            _POINT_SUM.clear()
        _POINT_SUM[key] = s
    return s


_EXPANSION: dict = {}


def _expansion(mu, beta):
    """Nonzero ``(lambda, binom(mu, lambda) * beta^lambda)`` pairs."""
    key = (mu, beta)
    cached = _EXPANSION.get(key)
    if cached is not None:
        return cached
    per_coord = []
    for m, b in zip(mu, beta):
        opts = []
        if b.is_zero():
            opts.append((0, 1))
        else:
            power = b ** 0
            for lam in range(m + 1):
                opts.append((lam, power * math.comb(m, lam)))
                power = power * b
        per_coord.append(opts)
    out = []
    for combo in itertools.product(*per_coord):
        lam = tuple(l for l, _ in combo)
        w = None
        for _, c in combo:
            w = c if w is None else w * c
        out.append((lam, to_scalar(w, beta[0].field) if not isinstance(w, Scalar) else w))
    out = tuple(out)
    if len(_EXPANSION) > 200_000:
        _EXPANSION.clear()
    _EXPANSION[key] = out
    return out


def mul(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    """Associative product of A(Gamma, n)."""
    _check_ctx(x, y)
    out: dict = {}
    get = out.get
    for (a, m), cx in x.terms.items():
        for (b, n), cy in y.terms.items():
            s = _point_add(a, b)
            c0 = cx * cy
            for lam, w in _expansion(m, b):
                key = (s, tuple(mi + ni - li for mi, ni, li in zip(m, n, lam)))
                prev = get(key)
                term = c0 * w
                out[key] = term if prev is None else prev + term
    return AlgebraElement._wrap(x.ctx, {k: c for k, c in out.items() if not c.is_zero()})


def bracket(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    """Commutator ``xy - yx``."""
    return mul(x, y) - mul(y, x)


def sigma(x: AlgebraElement) -> AlgebraElement:
    """The involutive Lie automorphism ``t^a D^m -> (-1)^(|m|+1) D^m t^a``.

    Since ``D^m t^a = t^a (D + a)^m`` this is computed termwise without a
    full product.
    """
    out: dict = {}
    for (a, m), c in x.terms.items():
        sign = -c if (sum(m) + 1) % 2 else c
        for lam, w in _expansion(m, a):
            key = (a, tuple(mi - li for mi, li in zip(m, lam)))
            out[key] = out.get(key, x.ctx.field.zero) + sign * w
    return AlgebraElement._wrap(x.ctx, {k: c for k, c in out.items() if not c.is_zero()})


def grade_decompose(x: AlgebraElement) -> dict:
    """Split ``x`` into homogeneous components keyed by group point."""
    parts: dict = {}
    for (a, m), c in x.terms.items():
        parts.setdefault(a, {})[(a, m)] = c
    return {a: AlgebraElement._wrap(x.ctx, t) for a, t in sorted(parts.items(), key=lambda kv: point_key(kv[0]))}


# -- falling factorial basis -------------------------------------------------


def to_falling(x: AlgebraElement) -> dict:
    """Coefficients of ``x`` in the basis ``t^alpha [D]_mu``.

    ``[D]_mu`` is the coordinatewise falling factorial ``prod [D_i]_{mu_i}``.
    """
    out: dict = {}
    zero = x.ctx.field.zero
    for (a, m), c in x.terms.items():
        for ks in itertools.product(*(range(mi + 1) for mi in m)):
            w = 1
            for mi, k in zip(m, ks):
                w *= stirling2(mi, k)
            if w:
                key = (a, ks)
                out[key] = out.get(key, zero) + c * w
    return {k: v for k, v in out.items() if not v.is_zero()}


def from_falling(ctx: GroupContext, rep: Mapping) -> AlgebraElement:
    """Inverse of :func:`to_falling`."""
    out: dict = {}
    zero = ctx.field.zero
    for (a, m), c in rep.items():
        a = tuple(to_scalar(v, ctx.field) for v in a)
        c = to_scalar(c, ctx.field)
        for ks in itertools.product(*(range(mi + 1) for mi in m)):
            w = 1
            for mi, k in zip(m, ks):
                w *= stirling1(mi, k)
            if w:
                key = (a, ks)
                out[key] = out.get(key, zero) + c * w
    return AlgebraElement._wrap(ctx, {k: v for k, v in out.items() if not v.is_zero()})


def from_ddt(ctx: GroupContext, i: int, j: int) -> AlgebraElement:
    """``t^i (d/dt)^j = t^(i-j) [D]_j`` in rank one, for Gamma containing Z."""
    if ctx.n != 1:
        raise ValueError("t^i (d/dt)^j is defined for n = 1 only")
    if j < 0:
        raise ValueError("j must be nonnegative")
    alpha = ctx.point((i - j,))
    return from_falling(ctx, {(alpha, (j,)): 1})


def to_ddt(x: AlgebraElement) -> dict:
    """Coefficients of ``x`` in the basis ``t^i (d/dt)^j`` (n = 1), keyed ``(i, j)``.

    The key ``i`` is the Scalar ``alpha + j``.
    """
    if x.ctx.n != 1:
        raise ValueError("n = 1 only")
    return {(a[0] + m[0], m[0]): c for (a, m), c in to_falling(x).items()}


# -- rank-one subalgebras ----------------------------------------------------


def _derivation_power(ctx: GroupContext, d: DerivationVector, j: int) -> dict:
    """``d^j`` as a map ``mu -> coefficient`` (multinomial expansion)."""
    out: dict = {}
    zero = ctx.field.zero
    for idx in itertools.product(range(ctx.n), repeat=j):
        mu = [0] * ctx.n
        w = ctx.field.one
        for i in idx:
            mu[i] += 1
            w = w * d.coeffs[i]
        mu = tuple(mu)
        out[mu] = out.get(mu, zero) + w
    return {m: c for m, c in out.items() if not c.is_zero()}


def embed_rank1(alpha, d: DerivationVector, i: int, j: int, ctx: GroupContext | None = None) -> AlgebraElement:
    """The element ``t^(i alpha) d^j`` of the subalgebra W(alpha, d)."""
    ctx = ctx or getattr(alpha, "ctx", None)
    if ctx is None:
        raise ValueError("a group context is required")
    coords = alpha.coords if hasattr(alpha, "coords") else ctx.point(alpha)
    if len(d.coeffs) != ctx.n:
        raise ValueError("dimension mismatch")
    if inner_product(coords, d).is_zero():
        raise DegeneratePairError("<alpha, d> = 0")
    point = tuple(a * i for a in coords)
    return AlgebraElement._wrap(ctx, {(point, mu): c for mu, c in _derivation_power(ctx, d, j).items()})


def rank1_coordinates(x: AlgebraElement, alpha, d: DerivationVector):
    """Coordinates ``{(i, j): c}`` of ``x`` in the basis ``t^(i alpha) d^j``.

    Returns None when ``x`` is not in W(alpha, d).
    """
    from .linalg import Matrix

    ctx = x.ctx
    coords = alpha.coords if hasattr(alpha, "coords") else tuple(to_scalar(a, ctx.field) for a in alpha)
    pivot = next(k for k, a in enumerate(coords) if not a.is_zero())
    out = {}
    for point, part in grade_decompose(x).items():
        i_s = point[pivot] / coords[pivot]
        if not i_s.is_integer() or tuple(a * int(i_s) for a in coords) != point:
            return None
        i = int(i_s)
        top = max(sum(m) for _, m in part.terms)
        powers = [_derivation_power(ctx, d, j) for j in range(top + 1)]
        mus = sorted({m for p in powers for m in p} | {m for _, m in part.terms})
        rows = [[p.get(m, ctx.field.zero) for p in powers] for m in mus]
        rhs = [part.terms.get((point, m), ctx.field.zero) for m in mus]
        sol = Matrix(rows, ctx.field).solve(rhs)
        if sol is None:
            return None
        for j, c in enumerate(sol):
            if not c.is_zero():
                out[(i, j)] = c
    return out


# -- central extension (n = 1) ----------------------------------------------


class ExtendedElement:
    """``body + central * C`` in the universal central extension (n = 1)."""

    __slots__ = ("body", "central")

    def __init__(self, body: AlgebraElement, central=0):
        if body.ctx.n != 1:
            raise ValueError("the central extension exists only for n = 1")
        self.body = body
        self.central = to_scalar(central, body.ctx.field)

    @property
    def ctx(self):
        return self.body.ctx

    @classmethod
    def C(cls, ctx):
        return cls(AlgebraElement.zero(ctx), 1)

    def __eq__(self, other):
        if isinstance(other, ExtendedElement):
            return self.body == other.body and self.central == other.central
        return NotImplemented

    def __hash__(self):
        return hash((self.body, self.central))

    def __add__(self, other):
        if not isinstance(other, ExtendedElement):
            return NotImplemented
        return ExtendedElement(self.body + other.body, self.central + other.central)

    def __neg__(self):
        return ExtendedElement(-self.body, -self.central)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s):
        s = to_scalar(s, self.ctx.field)
        return ExtendedElement(self.body.scale(s), self.central * s)

    def __rmul__(self, s):
        return self.scale(s)

    def is_zero(self):
        return self.body.is_zero() and self.central.is_zero()

    def __str__(self):
        return format_element(self.body, self.central)

    def __repr__(self):
        return f"ExtendedElement({self})"


def _cocycle_monomial(alpha: Scalar, mu: int, beta: Scalar, nu: int) -> Scalar:
    if not (alpha + beta).is_zero():
        return alpha.field.zero
    sign = -1 if mu % 2 else 1
    return binomial(alpha + mu, mu + nu + 1) * (sign * math.factorial(mu) * math.factorial(nu))


def cocycle(x: AlgebraElement, y: AlgebraElement) -> Scalar:
    """Scalar coefficient of C in the bracket of the central extension.

    Evaluated bilinearly on the ``t^a [D]_m`` expansions of both arguments.
    """
    _check_ctx(x, y)
    if x.ctx.n != 1:
        raise ValueError("the central extension exists only for n = 1")
    fx, fy = to_falling(x), to_falling(y)
    acc = x.ctx.field.zero
    for (a, m), cx in fx.items():
        for (b, n), cy in fy.items():
            if (a[0] + b[0]).is_zero():
                acc = acc + cx * cy * _cocycle_monomial(a[0], m[0], b[0], n[0])
    return acc


def extended_bracket(x: ExtendedElement, y: ExtendedElement) -> ExtendedElement:
    return ExtendedElement(bracket(x.body, y.body), cocycle(x.body, y.body))


# -- text form -----------------------------------------------------------------


def _format_coeff(c: Scalar) -> tuple[str, str]:
    """Sign and magnitude text of a coefficient (magnitude '' means 1)."""
    neg = c.a < 0 or (c.a == 0 and c.b < 0)
    m = -c if neg else c
    if m == 1:
        body = ""
    elif m.is_rational() or m.a == 0:
        body = str(m)
    else:
        body = f"({m})"
    return ("-" if neg else "+"), body


def format_monomial(alpha, mu) -> str:
    parts = ["t^(" + ", ".join(str(a) for a in alpha) + ")"]
    n = len(mu)
    for i, m in enumerate(mu):
        if m == 0:
            continue
        name = "D" if n == 1 else f"D{i + 1}"
        parts.append(name if m == 1 else f"{name}^{m}")
    return "*".join(parts)


def format_element(x: AlgebraElement, central: Scalar | None = None) -> str:
    """Canonical text; the cli parser reads it back to the same element."""
    pieces = []
    items = [(format_monomial(a, m), c) for (a, m), c in x.sorted_terms()]
    if central is not None and not central.is_zero():
        items.append(("C", central))
    for mono, c in items:
        sign, mag = _format_coeff(c)
        text = f"{mag}*{mono}" if mag else mono
        if not pieces:
            pieces.append(text if sign == "+" else "-" + text)
        else:
            pieces.append(f" {sign} {text}")
    return "".join(pieces) if pieces else "0"


def elements_from(ctx: GroupContext, pairs: Iterable) -> AlgebraElement:
    """Sum of ``coeff * t^alpha D^mu`` over ``(alpha, mu, coeff)`` triples."""
    acc = AlgebraElement.zero(ctx)
    for alpha, mu, c in pairs:
        acc = acc + AlgebraElement.monomial(ctx, alpha, mu, c)
    return acc

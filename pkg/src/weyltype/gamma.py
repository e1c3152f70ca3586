"""Finitely generated additive subgroups of F^n.

Points are tuples of :class:`Scalar`. Membership questions are reduced to an
integer linear system by splitting each coordinate into its rational
components and clearing denominators, then solved with a Hermite normal
form that keeps its unimodular transform.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import math
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

from .linalg import Matrix
from .scalars import FieldContext, Scalar, to_scalar

__all__ = [
    "DegenerateGroupError",
    "DerivationVector",
    "GroupContext",
    "GroupElement",
    "NotInGroupError",
    "hermite_normal_form",
    "inner_product",
    "is_isomorphic_to_Z",
    "membership",
    "nondegenerate_check",
    "rank",
]


class DegenerateGroupError(ValueError):
    """The generators do not contain an F-basis of F^n."""


class NotInGroupError(ValueError):
    """A point does not lie in the subgroup."""


def _xgcd(a: int, b: int):
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def hermite_normal_form(rows: Sequence[Sequence[int]]):
    """Row Hermite normal form ``H = U A`` of an integer matrix.

    Returns ``(H, U, r)``: ``H`` has its ``r`` nonzero rows first in echelon
    form with positive pivots and reduced entries above each pivot, and ``U``
    is unimodular.
    """
    H = [list(r) for r in rows]
    m = len(H)
    ncols = len(H[0]) if H else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    r = 0
    pivots = []
    for col in range(ncols):
        if r == m:
            break
        for i in range(r + 1, m):
            if H[i][col] == 0:
                continue
            a, b = H[r][col], H[i][col]
            g, x, y = _xgcd(a, b)
            ag, bg = a // g, b // g
            H[r], H[i] = (
                [x * p + y * q for p, q in zip(H[r], H[i])],
                [-bg * p + ag * q for p, q in zip(H[r], H[i])],
            )
            U[r], U[i] = (
                [x * p + y * q for p, q in zip(U[r], U[i])],
                [-bg * p + ag * q for p, q in zip(U[r], U[i])],
            )
        if H[r][col] == 0:
            continue
        if H[r][col] < 0:
            H[r] = [-v for v in H[r]]
            U[r] = [-v for v in U[r]]
        for k in range(r):
            f = H[k][col] // H[r][col]
            if f:
                H[k] = [p - f * q for p, q in zip(H[k], H[r])]
                U[k] = [p - f * q for p, q in zip(U[k], U[r])]
        pivots.append(col)
        r += 1
    return H, U, r


@dataclass(frozen=True)
class GroupContext:
    """A subgroup of F^n given by generators (rows)."""

    n: int
    field: FieldContext
    generators: tuple

    def __init__(self, n: int, generators, field: FieldContext | int = 0, strict: bool = True):
        field = field if isinstance(field, FieldContext) else FieldContext(field)
        gens = tuple(tuple(to_scalar(x, field) for x in g) for g in generators)
        if n < 1:
            raise ValueError("n must be positive")
        if any(len(g) != n for g in gens):
            raise ValueError(f"every generator needs {n} coordinates")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "generators", gens)
        if strict and not nondegenerate_check(self):
            raise DegenerateGroupError("generators do not span F^n")

    @classmethod
    def integers(cls, n: int = 1) -> GroupContext:
        """The standard lattice Z^n in Q^n."""
        return cls(n, [[int(i == j) for j in range(n)] for i in range(n)])

    @property
    def d(self) -> int:
        return self.field.d

    @property
    def zero(self) -> tuple:
        return (self.field.zero,) * self.n

    def point(self, coords) -> tuple:
        """Validated coordinates of a group point."""
        pt = tuple(to_scalar(x, self.field) for x in coords)
        if len(pt) != self.n:
            raise ValueError(f"expected {self.n} coordinates")
        if membership(self, pt) is None:
            raise NotInGroupError(f"({', '.join(map(str, pt))}) is not in the group")
        return pt

    def element(self, coords) -> GroupElement:
        return GroupElement(coords, self)

    def combine(self, coeffs: Sequence[int]) -> tuple:
        """The point ``sum coeffs[k] * generators[k]``."""
        out = list(self.zero)
        for c, g in zip(coeffs, self.generators):
            if c:
                out = [a + b * c for a, b in zip(out, g)]
        return tuple(out)

    def window(self, radius: int) -> list[tuple]:
        """Points ``sum c_k g_k`` with all ``|c_k| <= radius``, deduplicated."""
        seen = {}
        rng = range(-radius, radius + 1)
        for cs in itertools.product(rng, repeat=len(self.generators)):
            pt = self.combine(cs)
            seen.setdefault(pt, None)
        return sorted(seen, key=point_key)

    # -- serialization ---------------------------------------------------

    def to_json(self) -> dict:
        return {"n": self.n, "d": self.d, "generators": [[str(x) for x in g] for g in self.generators]}

    @classmethod
    def from_json(cls, data: dict) -> GroupContext:
        field = FieldContext(int(data.get("d", 0)))
        gens = [[to_scalar(x, field) for x in g] for g in data["generators"]]
        return cls(int(data["n"]), gens, field)

    def ref(self) -> str:
        """Short stable fingerprint used as ``ctx_ref`` in JSON documents."""
        blob = json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))
        return "gamma:" + hashlib.sha256(blob.encode()).hexdigest()[:12]

    def __repr__(self):
        gens = "; ".join("(" + ", ".join(map(str, g)) + ")" for g in self.generators)
        return f"GroupContext(n={self.n}, {self.field}, generators=[{gens}])"


def point_key(pt):
    return tuple(x.sort_key() for x in pt)


def _rational_rows(ctx: GroupContext, vectors) -> list[list[Fraction]]:
    rows = []
    for v in vectors:
        row = []
        for x in v:
            row.append(x.a)
            if ctx.d:
                row.append(x.b)
        rows.append(row)
    return rows


def _lattice(ctx: GroupContext):
    cached = _LATTICE_CACHE.get(ctx)
    if cached is not None:
        return cached
    rows = _rational_rows(ctx, ctx.generators)
    den = 1
    for r in rows:
        for f in r:
            den = den * f.denominator // math.gcd(den, f.denominator)
    ints = [[int(f * den) for f in r] for r in rows]
    H, U, r = hermite_normal_form(ints)
    out = (den, H[:r], U[:r])
    _LATTICE_CACHE[ctx] = out
    return out


_LATTICE_CACHE: dict = {}


def membership(ctx: GroupContext, v) -> tuple[int, ...] | None:
    """Integer coefficients ``c`` with ``sum c_k g_k = v``, or None."""
    v = tuple(to_scalar(x, ctx.field) for x in v)
    if len(v) != ctx.n:
        raise ValueError(f"expected {ctx.n} coordinates")
    den, H, U = _lattice(ctx)
    target = _rational_rows(ctx, [v])[0]
    scaled = []
    for f in target:
        f = f * den
        if f.denominator != 1:
            return None
        scaled.append(int(f))
    y = []
    residual = scaled[:]
    for row in H:
        p = next(j for j, x in enumerate(row) if x)
        q, rem = divmod(residual[p], row[p])
        if rem:
            return None
        y.append(q)
        residual = [a - q * b for a, b in zip(residual, row)]
    if any(residual):
        return None
    m = len(ctx.generators)
    coeffs = [sum(yk * urow[i] for yk, urow in zip(y, U)) for i in range(m)]
    return tuple(coeffs)


def rank(ctx: GroupContext) -> int:
    """Rank of the free abelian group (Q-dimension of the rational span)."""
    return len(_lattice(ctx)[1])


def is_isomorphic_to_Z(ctx: GroupContext) -> bool:
    return rank(ctx) == 1


def nondegenerate_check(ctx: GroupContext) -> bool:
    """True iff the generators contain an F-basis of F^n."""
    if not ctx.generators:
        return False
    return Matrix(ctx.generators, ctx.field).rank() == ctx.n


class GroupElement:
    """A point of the group, identified by its coordinates."""

    __slots__ = ("coords", "ctx")

    def __init__(self, coords, ctx: GroupContext):
        self.coords = ctx.point(coords)
        self.ctx = ctx

    def __eq__(self, other):
        return isinstance(other, GroupElement) and self.coords == other.coords and self.ctx == other.ctx

    def __hash__(self):
        return hash(self.coords)

    def __add__(self, other):
        return GroupElement(tuple(a + b for a, b in zip(self.coords, other.coords)), self.ctx)

    def __neg__(self):
        return GroupElement(tuple(-a for a in self.coords), self.ctx)

    def __rmul__(self, k: int):
        return GroupElement(tuple(a * k for a in self.coords), self.ctx)

    def __repr__(self):
        return "GroupElement(" + ", ".join(map(str, self.coords)) + ")"


class DerivationVector:
    """``d = sum d_i D_i`` in the span of the degree operators."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs, field: FieldContext | int = 0):
        self.coeffs = tuple(to_scalar(x, field) for x in coeffs)

    def __len__(self):
        return len(self.coeffs)

    @classmethod
    def basis(cls, i: int, n: int, field: FieldContext | int = 0):
        return cls([int(i == j) for j in range(n)], field)

    def __repr__(self):
        return "DerivationVector(" + ", ".join(map(str, self.coeffs)) + ")"


def inner_product(alpha, d: DerivationVector) -> Scalar:
    """``<alpha, d> = sum alpha_i d_i``."""
    coords = alpha.coords if isinstance(alpha, GroupElement) else tuple(alpha)
    if len(coords) != len(d.coeffs):
        raise ValueError("dimension mismatch")
    acc = None
    for a, b in zip(coords, d.coeffs):
        acc = a * b if acc is None else acc + a * b
    return acc


def pairing_witness(ctx: GroupContext, alpha) -> int | None:
    """Index ``i`` with ``<alpha, D_i> != 0``, or None when alpha is 0."""
    coords = alpha.coords if isinstance(alpha, GroupElement) else tuple(alpha)
    for i in range(ctx.n):
        if not inner_product(coords, DerivationVector.basis(i, ctx.n, ctx.field)).is_zero():
            return i
    return None

"""Quasifinite W(Gamma, n)-modules: A_{p,G}, its twist, trivial modules and sums.

Vectors are finite maps ``(beta, i) -> coefficient`` over the basis
``y_beta^(i)``. The action follows the row-vector convention::

    (t^a D^m) Y_b = Y_{a+b} [b + G]^m                (plain)
    (t^a D^m) Y_b = (-1)^(|m|+1) Y_{a+b} [a + b + G]^m   (twisted)

so on coordinate columns the matrix multiplies from the left.
"""

from __future__ import annotations

import itertools
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from dataclasses import field as dc_field

from .gamma import GroupContext, point_key
from .linalg import Matrix, is_indecomposable_matrix
from .scalars import FieldContext, to_scalar
from .weyl import AlgebraElement, ExtendedElement

__all__ = [
    "CommutingError",
    "MatrixTuple",
    "ModuleSpec",
    "ModuleVector",
    "TrivialDims",
    "WrongKindError",
    "act",
    "act_extended",
    "d_action_matrix",
    "direct_sum",
    "find_associativity_witness",
    "generated_dims",
    "is_indecomposable_matrix",
    "is_indecomposable_spec",
    "is_irreducible",
    "weight_space_dim",
]


class CommutingError(ValueError):
    """The matrices of a tuple do not pairwise commute."""


class WrongKindError(ValueError):
    """Operation not defined for this kind of module."""


class MatrixTuple:
    """n pairwise commuting p x p matrices ``(G_1, ..., G_n)``."""

    __slots__ = ("field", "mats", "n", "p")

    def __init__(self, mats: Sequence, field: FieldContext | int = 0):
        field = field if isinstance(field, FieldContext) else FieldContext(field)
        mats = tuple(m if isinstance(m, Matrix) else Matrix(m, field) for m in mats)
        if not mats:
            raise ValueError("at least one matrix is required")
        p = mats[0].nrows
        if any(m.shape != (p, p) for m in mats):
            raise ValueError("all matrices must be p x p")
        for a, b in itertools.combinations(mats, 2):
            if a @ b != b @ a:
                raise CommutingError("G_i G_j != G_j G_i")
        self.mats, self.p, self.n, self.field = mats, p, len(mats), field

    def __getitem__(self, i):
        return self.mats[i]

    def __iter__(self):
        return iter(self.mats)

    def __eq__(self, other):
        return isinstance(other, MatrixTuple) and self.mats == other.mats

    def __hash__(self):
        return hash(self.mats)

    def __repr__(self):
        return f"MatrixTuple({list(self.mats)})"

    def conjugate(self, P: Matrix) -> MatrixTuple:
        """``(P^-1 G_i P)_i``."""
        Pinv = P.inverse()
        return MatrixTuple([Pinv @ g @ P for g in self.mats], self.field)


@dataclass(frozen=True)
class TrivialDims:
    """Dimension function of a trivial module: ``default`` except at listed points."""

    default: int = 0
    points: tuple = ()

    def __call__(self, beta) -> int:
        for pt, dim in self.points:
            if pt == beta:
                return dim
        return self.default


@dataclass(frozen=True)
class ModuleSpec:
    """A quasifinite module: ``trivial``, ``plain`` (A_{p,G}), ``twisted`` or ``direct_sum``."""

    kind: str
    ctx: GroupContext
    G: MatrixTuple | None = None
    dims: TrivialDims | None = None
    summands: tuple = dc_field(default=())

    def __post_init__(self):
        if self.kind in ("plain", "twisted"):
            if self.G is None or self.G.n != self.ctx.n:
                raise ValueError(f"{self.kind} module needs n = {self.ctx.n} matrices")
            if self.G.field != self.ctx.field:
                raise ValueError("matrix entries must lie in the group's field")
        elif self.kind == "trivial":
            if self.dims is None:
                object.__setattr__(self, "dims", TrivialDims())
        elif self.kind == "direct_sum":
            if any(s.ctx != self.ctx for s in self.summands):
                raise ValueError("summands must share the context")
        else:
            raise ValueError(f"unknown module kind {self.kind!r}")

    @classmethod
    def plain(cls, ctx, G):
        return cls("plain", ctx, G=G if isinstance(G, MatrixTuple) else MatrixTuple(G, ctx.field))

    @classmethod
    def twisted(cls, ctx, G):
        return cls("twisted", ctx, G=G if isinstance(G, MatrixTuple) else MatrixTuple(G, ctx.field))

    @classmethod
    def trivial(cls, ctx, default: int = 0, points: Mapping | None = None):
        pts = tuple(sorted(((ctx.point(b), int(k)) for b, k in (points or {}).items()), key=lambda pk: point_key(pk[0])))
        return cls("trivial", ctx, dims=TrivialDims(int(default), pts))

    @property
    def p(self) -> int:
        if self.G is None:
            raise WrongKindError(f"{self.kind} module has no p")
        return self.G.p

    def dim(self, beta) -> int:
        return weight_space_dim(self, beta)


def direct_sum(specs: Sequence[ModuleSpec]) -> ModuleSpec:
    specs = list(specs)
    if not specs:
        raise ValueError("empty direct sum")
    return ModuleSpec("direct_sum", specs[0].ctx, summands=tuple(specs))


def weight_space_dim(spec: ModuleSpec, beta) -> int:
    if spec.kind in ("plain", "twisted"):
        return spec.G.p
    if spec.kind == "trivial":
        return spec.dims(tuple(beta))
    return sum(weight_space_dim(s, beta) for s in spec.summands)


class ModuleVector:
    """Finite combination of basis vectors ``y_beta^(i)`` (``i`` 0-based)."""

    __slots__ = ("entries", "field")

    def __init__(self, entries: Mapping | None = None, field: FieldContext | int = 0):
        self.field = field if isinstance(field, FieldContext) else FieldContext(field)
        self.entries = {}
        for (beta, i), c in (entries or {}).items():
            c = to_scalar(c, self.field)
            if not c.is_zero():
                key = (tuple(to_scalar(b, self.field) for b in beta), int(i))
                total = self.entries.get(key, self.field.zero) + c
                if total.is_zero():
                    self.entries.pop(key, None)
                else:
                    self.entries[key] = total

    @classmethod
    def basis(cls, beta, i, field):
        return cls({(beta, i): 1}, field)

    @classmethod
    def _wrap(cls, entries, field):
        v = object.__new__(cls)
        v.entries = entries
        v.field = field
        return v

    def is_zero(self):
        return not self.entries

    def __eq__(self, other):
        return isinstance(other, ModuleVector) and self.entries == other.entries

    def __hash__(self):
        return hash(frozenset(self.entries.items()))

    def __add__(self, other):
        out = dict(self.entries)
        for k, c in other.entries.items():
            s = out.get(k, self.field.zero) + c
            if s.is_zero():
                out.pop(k, None)
            else:
                out[k] = s
        return ModuleVector._wrap(out, self.field)

    def __neg__(self):
        return ModuleVector._wrap({k: -c for k, c in self.entries.items()}, self.field)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s):
        s = to_scalar(s, self.field)
        if s.is_zero():
            return ModuleVector._wrap({}, self.field)
        return ModuleVector._wrap({k: c * s for k, c in self.entries.items()}, self.field)

    def support(self):
        return sorted({b for b, _ in self.entries}, key=point_key)

    def fiber(self, beta, dim: int) -> list:
        z = self.field.zero
        out = [z] * dim
        for (b, i), c in self.entries.items():
            if b == beta:
                if i >= dim:
                    raise IndexError(f"component {i} outside fiber of dimension {dim}")
                out[i] = c
        return out

    def sorted_entries(self):
        return sorted(self.entries.items(), key=lambda kv: (point_key(kv[0][0]), kv[0][1]))

    def __repr__(self):
        body = ", ".join(f"y_({', '.join(map(str, b))})^{i}: {c}" for (b, i), c in self.sorted_entries())
        return "ModuleVector({" + body + "})"


def _fibers(spec: ModuleSpec, v: ModuleVector) -> dict:
    out: dict = {}
    for (b, i), c in v.entries.items():
        out.setdefault(b, {})[i] = c
    return out


def _shifted_power(G: MatrixTuple, shift, mu, cache) -> Matrix:
    """``prod_i (shift_i * 1 + G_i)^mu_i``."""
    key = (shift, mu)
    m = cache.get(key)
    if m is None:
        eye = Matrix.identity(G.p, G.field)
        m = eye
        for s, g, k in zip(shift, G.mats, mu):
            if k:
                m = m @ ((g + eye.scale(s)) ** k)
        cache[key] = m
    return m


def _act_intermediate(spec: ModuleSpec, x: AlgebraElement, v: ModuleVector) -> ModuleVector:
    G = spec.G
    p = G.p
    field = spec.ctx.field
    zero = field.zero
    twisted = spec.kind == "twisted"
    cache: dict = {}
    out: dict = {}
    for beta, comps in _fibers(spec, v).items():
        if any(i >= p for i in comps):
            raise IndexError(f"component index outside 0..{p - 1}")
        col = [comps.get(i, zero) for i in range(p)]
        for (alpha, mu), c in x.terms.items():
            target = tuple(a + b for a, b in zip(alpha, beta))
            M = _shifted_power(G, target if twisted else beta, mu, cache)
            coeff = c
            if twisted and (sum(mu) + 1) % 2:
                coeff = -c
            img = M.apply(col)
            for i, val in enumerate(img):
                if val.is_zero():
                    continue
                key = (target, i)
                out[key] = out.get(key, zero) + coeff * val
    return ModuleVector._wrap({k: c for k, c in out.items() if not c.is_zero()}, field)


def act(spec: ModuleSpec, x: AlgebraElement, v: ModuleVector) -> ModuleVector:
    """Action of an algebra element on a module vector."""
    if x.ctx != spec.ctx:
        raise ValueError("element and module live over different groups")
    if spec.kind in ("plain", "twisted"):
        return _act_intermediate(spec, x, v)
    if spec.kind == "trivial":
        for (b, i) in v.entries:
            if i >= spec.dims(b):
                raise IndexError("component index outside the weight space")
        return ModuleVector._wrap({}, spec.ctx.field)
    # direct sum: components are stacked in summand order at each point
    out = ModuleVector._wrap({}, spec.ctx.field)
    fibers = _fibers(spec, v)
    offsets_cache: dict = {}

    def offsets(beta):
        if beta not in offsets_cache:
            offs, acc = [], 0
            for s in spec.summands:
                offs.append(acc)
                acc += weight_space_dim(s, beta)
            offsets_cache[beta] = (offs, acc)
        return offsets_cache[beta]

    for k, s in enumerate(spec.summands):
        part = {}
        for beta, comps in fibers.items():
            offs, total = offsets(beta)
            lo = offs[k]
            hi = lo + weight_space_dim(s, beta)
            if any(i >= total for i in comps):
                raise IndexError("component index outside the weight space")
            for i, c in comps.items():
                if lo <= i < hi:
                    part[(beta, i - lo)] = c
        img = act(s, x, ModuleVector._wrap(part, spec.ctx.field))
        lifted = {(b, i + offsets(b)[0][k]): c for (b, i), c in img.entries.items()}
        out = out + ModuleVector._wrap(lifted, spec.ctx.field)
    return out


def act_extended(spec: ModuleSpec, x: ExtendedElement, v: ModuleVector) -> ModuleVector:
    """Action of the central extension; C acts as zero."""
    if spec.ctx.n != 1:
        raise ValueError("the central extension exists only for n = 1")
    return act(spec, x.body, v)


def is_indecomposable_spec(spec: ModuleSpec) -> bool:
    """A_{p,G} (or its twist) is indecomposable iff some G_i is."""
    if spec.kind not in ("plain", "twisted"):
        raise WrongKindError("defined for plain and twisted modules")
    return any(is_indecomposable_matrix(g) for g in spec.G)


def is_irreducible(spec: ModuleSpec) -> bool:
    """A_{p,G} and its twist are irreducible exactly when p = 1."""
    if spec.kind == "direct_sum":
        return False
    if spec.kind not in ("plain", "twisted"):
        raise WrongKindError("defined for plain, twisted and direct-sum modules")
    return spec.G.p == 1


def d_action_matrix(spec: ModuleSpec, i: int, beta) -> Matrix:
    """Matrix of ``D_i`` on the weight space at ``beta`` (columns are images)."""
    ctx = spec.ctx
    beta = tuple(to_scalar(b, ctx.field) for b in beta)
    dim = weight_space_dim(spec, beta)
    D = AlgebraElement.D(ctx, i)
    cols = []
    for k in range(dim):
        img = act(spec, D, ModuleVector.basis(beta, k, ctx.field))
        cols.append(img.fiber(beta, dim))
    return Matrix(list(zip(*cols)) if cols else [], ctx.field)


def _small_monomials(ctx: GroupContext, max_level: int, radius: int):
    points = ctx.window(radius)
    mus = [mu for mu in itertools.product(range(max_level + 1), repeat=ctx.n) if sum(mu) <= max_level]
    mus.sort(key=lambda m: (sum(m), m))
    for mu in mus:
        for a in points:
            yield AlgebraElement._wrap(ctx, {(a, mu): ctx.field.one})


def find_associativity_witness(spec: ModuleSpec, max_level: int = 2, radius: int = 1):
    """First ``(x, y, v)`` with ``act(xy, v) != act(x, act(y, v))``, or None.

    Searches monomials of level <= ``max_level`` with group parts in a small
    window and basis vectors at 0.
    """
    ctx = spec.ctx
    monos = list(_small_monomials(ctx, max_level, radius))
    vecs = [ModuleVector.basis(ctx.zero, k, ctx.field) for k in range(weight_space_dim(spec, ctx.zero))]
    for x in monos:
        for y in monos:
            xy = x * y
            for v in vecs:
                if act(spec, xy, v) != act(spec, x, act(spec, y, v)):
                    return x, y, v
    return None


def generated_dims(spec: ModuleSpec, vectors: Sequence[ModuleVector], radius: int) -> dict:
    """Dimensions per weight of the span generated inside a bounded window.

    Repeatedly applies ``t^{+-g_k}``, ``t^{+-g_k} D_i`` and ``D_i`` and
    discards components leaving the window. This is only a finite smoke
    check of irreducibility, not a proof.
    """
    ctx = spec.ctx
    window = ctx.window(radius)
    wset = set(window)
    coords = [(b, i) for b in window for i in range(weight_space_dim(spec, b))]
    index = {c: k for k, c in enumerate(coords)}
    gens = []
    for g in ctx.generators:
        for sgn in (1, -1):
            a = tuple(x * sgn for x in g)
            gens.append(AlgebraElement._wrap(ctx, {(a, (0,) * ctx.n): ctx.field.one}))
            for i in range(ctx.n):
                mu = tuple(int(j == i) for j in range(ctx.n))
                gens.append(AlgebraElement._wrap(ctx, {(a, mu): ctx.field.one}))
    for i in range(ctx.n):
        gens.append(AlgebraElement.D(ctx, i))

    def row(v):
        r = [ctx.field.zero] * len(coords)
        for (b, i), c in v.entries.items():
            if b in wset:
                r[index[(b, i)]] = c
        return r

    basis = Matrix([row(v) for v in vectors], ctx.field).rref()[0] if vectors else None
    rows = [r for r in (basis.rows if basis else []) if any(not x.is_zero() for x in r)]
    while True:
        new_rows = list(rows)
        for r in rows:
            v = ModuleVector._wrap({coords[k]: c for k, c in enumerate(r) if not c.is_zero()}, ctx.field)
            for g in gens:
                new_rows.append(tuple(row(act(spec, g, v))))
        red = Matrix(new_rows, ctx.field).rref()[0]
        reduced = [r for r in red.rows if any(not x.is_zero() for x in r)]
        if len(reduced) == len(rows):
            break
        rows = reduced
    dims = {}
    for b in window:
        ks = [index[(b, i)] for i in range(weight_space_dim(spec, b))]
        sub = Matrix([[r[k] for k in ks] for r in rows], ctx.field) if rows and ks else None
        dims[b] = sub.rank() if sub else 0
    return dims

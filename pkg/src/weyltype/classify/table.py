"""Finite presentations of graded module data.

An :class:`ActionTable` records, over a finite window of grading points,
the matrix of each generator ``t^{+-g_k}``, ``t^{+-g_k} D_i`` and ``D_i``
from the weight space at ``beta`` to the one at ``alpha + beta``.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass

from ..gamma import GroupContext, point_key
from ..linalg import Matrix
from ..repmod import ModuleSpec, ModuleVector, act, weight_space_dim
from ..scalars import to_scalar
from ..weyl import AlgebraElement, format_monomial


class WindowError(ValueError):
    """The window is too small for the requested operation."""


def generator_keys(ctx: GroupContext) -> list[tuple]:
    """Generator keys ``(alpha, i)``: ``i is None`` for ``t^alpha``, else ``t^alpha D_i``."""
    keys = []
    seen = set()
    for g in ctx.generators:
        neg = tuple(-x for x in g)
        for a in (g, neg):
            if (a, None) not in seen:
                seen.add((a, None))
                keys.append((a, None))
        for i in range(ctx.n):
            for a in (g, neg):
                if (a, i) not in seen:
                    seen.add((a, i))
                    keys.append((a, i))
    for i in range(ctx.n):
        keys.append((ctx.zero, i))
    return keys


def generator_element(ctx: GroupContext, key) -> AlgebraElement:
    alpha, i = key
    mu = tuple(int(j == i) for j in range(ctx.n))
    return AlgebraElement._wrap(ctx, {(alpha, mu): ctx.field.one})


def generator_label(ctx: GroupContext, key) -> str:
    alpha, i = key
    return format_monomial(alpha, tuple(int(j == i) for j in range(ctx.n)))


@dataclass
class ActionTable:
    ctx: GroupContext
    window: tuple
    dims: dict
    action: dict

    def __post_init__(self):
        wset = set(self.window)
        keys = set(generator_keys(self.ctx))
        for (key, beta), m in self.action.items():
            if key not in keys:
                raise ValueError(f"unknown generator {key}")
            target = tuple(a + b for a, b in zip(key[0], beta))
            if beta not in wset or target not in wset:
                raise ValueError("table entry leaves the window")
            rows, cols = self.dims[target], self.dims[beta]
            if rows and cols and m.shape != (rows, cols):
                raise ValueError(f"matrix at {beta} has shape {m.shape}, expected {(rows, cols)}")

    def __eq__(self, other):
        if not isinstance(other, ActionTable):
            return NotImplemented
        return (
            self.ctx == other.ctx
            and set(self.window) == set(other.window)
            and self.dims == other.dims
            and self.action == other.action
        )

    def matrix(self, key, beta) -> Matrix:
        return self.action[(key, beta)]

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.action.values())

    def entries(self):
        """Entries in canonical order (generator order, then point order)."""
        order = {k: n for n, k in enumerate(generator_keys(self.ctx))}
        return sorted(self.action.items(), key=lambda kv: (order[kv[0][0]], point_key(kv[0][1])))

    # -- serialization ---------------------------------------------------

    def to_json(self) -> dict:
        fmt = lambda pt: [str(x) for x in pt]
        return {
            "ctx_ref": self.ctx.ref(),
            "window": [fmt(b) for b in sorted(self.window, key=point_key)],
            "dims": {",".join(fmt(b)): self.dims[b] for b in sorted(self.window, key=point_key)},
            "action": [
                {
                    "gen": generator_label(self.ctx, key),
                    "beta": fmt(beta),
                    "matrix": [[str(x) for x in row] for row in m.rows],
                }
                for (key, beta), m in self.entries()
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping, ctx: GroupContext) -> ActionTable:
        if data.get("ctx_ref") not in (None, ctx.ref()):
            raise ValueError("table was written for a different context")
        pt = lambda xs: tuple(to_scalar(x, ctx.field) for x in xs)
        window = tuple(pt(b) for b in data["window"])
        dims = {}
        for b in window:
            key = ",".join(str(x) for x in b)
            dims[b] = int(data["dims"][key])
        labels = {generator_label(ctx, k): k for k in generator_keys(ctx)}
        action = {}
        for entry in data["action"]:
            gen = labels.get(entry["gen"])
            if gen is None:
                raise ValueError(f"unknown generator label {entry['gen']!r}")
            beta = pt(entry["beta"])
            rows = entry["matrix"]
            m = Matrix(rows, ctx.field) if rows else Matrix.zeros(0, 0, ctx.field)
            if rows and not rows[0]:
                m = Matrix._wrap(tuple(() for _ in rows), ctx.field)
            action[(gen, beta)] = m
        return cls(ctx, window, dims, action)


def resolve_window(ctx: GroupContext, window) -> tuple:
    if isinstance(window, int):
        if window < 1:
            raise WindowError("window radius must be at least 1")
        return tuple(ctx.window(window))
    return tuple(sorted({tuple(to_scalar(x, ctx.field) for x in b) for b in window}, key=point_key))


def _fiber_matrix(spec: ModuleSpec, x: AlgebraElement, beta, target) -> Matrix:
    field = spec.ctx.field
    rows, cols = weight_space_dim(spec, target), weight_space_dim(spec, beta)
    if cols == 0:
        return Matrix._wrap(tuple(() for _ in range(rows)), field)
    images = [act(spec, x, ModuleVector.basis(beta, k, field)).fiber(target, rows) for k in range(cols)]
    return Matrix._wrap(tuple(tuple(img[r] for img in images) for r in range(rows)), field)


def table_from_spec(spec: ModuleSpec, window) -> ActionTable:
    """Exact matrices of the spec's action on the generator set over a window."""
    ctx = spec.ctx
    points = resolve_window(ctx, window)
    if ctx.zero not in points:
        raise WindowError("window must contain 0")
    wset = set(points)
    dims = {b: weight_space_dim(spec, b) for b in points}
    action = {}
    for key in generator_keys(ctx):
        x = generator_element(ctx, key)
        for beta in points:
            target = tuple(a + b for a, b in zip(key[0], beta))
            if target in wset:
                action[(key, beta)] = _fiber_matrix(spec, x, beta, target)
    return ActionTable(ctx, points, dims, action)


def rebase_table(table: ActionTable, basis: Mapping) -> ActionTable:
    """Express a table in the basis ``Z_beta = Y_beta B_beta``.

    ``basis[beta]`` holds the new basis vectors as columns; each matrix
    becomes ``B_target^-1 A B_beta``.
    """
    inv = {b: B.inverse() for b, B in basis.items()}
    action = {}
    for (key, beta), m in table.action.items():
        target = tuple(a + b for a, b in zip(key[0], beta))
        action[(key, beta)] = inv[target] @ m @ basis[beta]
    return ActionTable(table.ctx, table.window, dict(table.dims), action)


def unbase_table(table: ActionTable, basis: Mapping) -> ActionTable:
    """Inverse of :func:`rebase_table`: ``A = B_target A' B_beta^-1``."""
    action = {}
    for (key, beta), m in table.action.items():
        target = tuple(a + b for a, b in zip(key[0], beta))
        action[(key, beta)] = basis[target] @ m @ basis[beta].inverse()
    return ActionTable(table.ctx, table.window, dict(table.dims), action)

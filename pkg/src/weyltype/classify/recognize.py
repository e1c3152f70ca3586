"""Recognize action tables as trivial, A_{p,G}, its twist, or unknown."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from dataclasses import field as dc_field

from ..gamma import point_key
from ..linalg import Matrix
from ..repmod import CommutingError, MatrixTuple, ModuleSpec
from ..scalars import Scalar
from .table import ActionTable, WindowError, rebase_table, table_from_spec


@dataclass
class Recognition:
    """Result of :func:`recognize`.

    ``basis[beta]`` has the recognized basis vectors as columns, written in
    the table's coordinates, so ``unbase_table(table_from_spec(spec), basis)``
    reproduces the input table.
    """

    kind: str
    p: int = 0
    G: MatrixTuple | None = None
    basis: dict = dc_field(default_factory=dict)
    c: Scalar | None = None
    reason: str = ""
    spec: ModuleSpec | None = None

    def __str__(self):
        if self.kind in ("plain", "twisted"):
            return f"{self.kind} p={self.p}"
        if self.kind == "unknown":
            return f"unknown ({self.reason})"
        return self.kind

    def to_json(self) -> dict:
        out = {"kind": self.kind}
        if self.kind in ("plain", "twisted"):
            out["p"] = self.p
            out["c"] = str(self.c)
            out["G"] = [[[str(x) for x in row] for row in g.rows] for g in self.G]
            out["basis"] = [
                {"beta": [str(x) for x in b], "matrix": [[str(x) for x in row] for row in m.rows]}
                for b, m in sorted(self.basis.items(), key=lambda kv: point_key(kv[0]))
            ]
        if self.reason:
            out["reason"] = self.reason
        return out


def choose_direction(table: ActionTable):
    """First context generator with every coordinate nonzero.

    Falls back to the first nonzero generator when none qualifies (for
    example the standard basis of Z^2).
    """
    gens = table.ctx.generators
    for g in gens:
        if all(not x.is_zero() for x in g):
            return g
    for g in gens:
        if any(not x.is_zero() for x in g):
            return g
    raise WindowError("no nonzero generator")


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _neg(a):
    return tuple(-x for x in a)


def _read_c(table: ActionTable, gamma, i: int):
    """Scalar by which ``t^0`` acts, from ``[t^g D_i, t^-g] = -g_i``."""
    zero = table.ctx.zero
    A = table.action
    up_d = A[((gamma, i), _neg(gamma))]
    down_at_0 = A[((_neg(gamma), None), zero)]
    down_at_g = A[((_neg(gamma), None), gamma)]
    up_d_at_0 = A[((gamma, i), zero)]
    comm = up_d @ down_at_0 - down_at_g @ up_d_at_0
    return comm.scale(-gamma[i].inverse())


def _normalize(table: ActionTable, c: Scalar, p: int):
    """Basis with ``t^s`` acting as ``c * I`` along every generator step."""
    field = table.ctx.field
    wset = set(table.window)
    zero = table.ctx.zero
    steps = []
    for g in table.ctx.generators:
        if any(not x.is_zero() for x in g):
            steps += [g, _neg(g)]
    basis = {zero: Matrix.identity(p, field)}
    queue = deque([zero])
    while queue:
        beta = queue.popleft()
        for s in steps:
            target = _add(beta, s)
            if target not in wset or target in basis:
                continue
            m = table.action[((s, None), beta)]
            if not m.is_invertible():
                return None, f"t^({', '.join(map(str, s))}) is not invertible at ({', '.join(map(str, beta))})"
            basis[target] = (m @ basis[beta]).scale(c)
            queue.append(target)
    missing = wset - set(basis)
    if missing:
        raise WindowError("window is not connected under the generators")
    return basis, ""


def recognize(table: ActionTable) -> Recognition:
    """Classify graded action data on a finite window.

    Returns kind ``trivial`` when every matrix vanishes; otherwise tries
    to write the table as ``A_{p,G}`` (``c = 1``) or its twist
    (``c = -1``) in some basis and checks every entry exactly.
    """
    ctx = table.ctx
    if table.is_zero():
        return Recognition("trivial", reason="")
    gamma = choose_direction(table)
    zero = ctx.zero
    wset = set(table.window)
    needed = [zero, gamma, _neg(gamma), _add(gamma, gamma), _neg(_add(gamma, gamma))]
    if any(pt not in wset for pt in needed):
        raise WindowError("window must contain 0, +-g and +-2g for the chosen generator g")
    dims = set(table.dims.values())
    if len(dims) != 1:
        return Recognition("unknown", reason="weight spaces have different dimensions")
    p = dims.pop()
    i = next(k for k, x in enumerate(gamma) if not x.is_zero())
    cI = _read_c(table, gamma, i)
    if not cI.is_scalar() or cI.rows[0][0] not in (1, -1):
        return Recognition("unknown", reason="t^0 does not act as +1 or -1")
    c = cI.rows[0][0]
    kind = "plain" if c == 1 else "twisted"
    basis, why = _normalize(table, c, p)
    if basis is None:
        return Recognition("unknown", reason=why)
    normal = rebase_table(table, basis)
    try:
        G = MatrixTuple([normal.action[((zero, k), zero)] for k in range(ctx.n)], ctx.field)
    except CommutingError:
        return Recognition("unknown", reason="degree operators do not commute at 0")
    spec = ModuleSpec(kind, ctx, G=G)
    if table_from_spec(spec, table.window) != normal:
        return Recognition("unknown", reason=f"table disagrees with the reconstructed {kind} module")
    return Recognition(kind, p=p, G=G, basis=basis, c=c, spec=spec)

"""Small exact dense matrices over Q(sqrt(d)).

Sizes here are desk scale (p <= 8), so everything is row-major tuples and
schoolbook algorithms. Similarity questions go through invariant factors,
computed from the Smith form of ``xI - A`` over K[x].
"""

from __future__ import annotations

from .scalars import FieldContext, to_scalar
from .upoly import UPoly


class Matrix:
    """Immutable ``rows x cols`` matrix of :class:`Scalar`."""

    __slots__ = ("_hash", "field", "rows")

    def __init__(self, rows, field: FieldContext):
        self.rows = tuple(tuple(to_scalar(x, field) for x in row) for row in rows)
        self.field = field
        widths = {len(r) for r in self.rows}
        if len(widths) > 1:
            raise ValueError("ragged matrix")
        self._hash = None

    @classmethod
    def _wrap(cls, rows, field):
        m = object.__new__(cls)
        m.rows = rows
        m.field = field
        m._hash = None
        return m

    @classmethod
    def zeros(cls, r, c, field):
        z = field.zero
        return cls._wrap(tuple((z,) * c for _ in range(r)), field)

    @classmethod
    def identity(cls, n, field):
        z, o = field.zero, field.one
        return cls._wrap(tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)), field)

    @classmethod
    def diag(cls, entries, field):
        n = len(entries)
        z = field.zero
        return cls._wrap(
            tuple(tuple(to_scalar(entries[i], field) if i == j else z for j in range(n)) for i in range(n)), field
        )

    @classmethod
    def block_diag(cls, blocks, field):
        n = sum(b.nrows for b in blocks)
        out = [[field.zero] * n for _ in range(n)]
        off = 0
        for b in blocks:
            for i in range(b.nrows):
                for j in range(b.ncols):
                    out[off + i][off + j] = b.rows[i][j]
            off += b.nrows
        return cls._wrap(tuple(tuple(r) for r in out), field)

    @property
    def nrows(self):
        return len(self.rows)

    @property
    def ncols(self):
        return len(self.rows[0]) if self.rows else 0

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        if isinstance(other, Matrix):
            return self.rows == other.rows
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.rows)
        return self._hash

    def __repr__(self):
        return "Matrix([" + ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.rows) + "])"

    def tolist(self):
        return [list(r) for r in self.rows]

    def is_zero(self):
        return all(x.is_zero() for r in self.rows for x in r)

    def is_square(self):
        return self.nrows == self.ncols

    def T(self):
        return Matrix._wrap(tuple(zip(*self.rows)) if self.rows else (), self.field)

    def __add__(self, other):
        return Matrix._wrap(tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)), self.field)

    def __sub__(self, other):
        return Matrix._wrap(tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)), self.field)

    def __neg__(self):
        return Matrix._wrap(tuple(tuple(-a for a in r) for r in self.rows), self.field)

    def scale(self, s):
        return Matrix._wrap(tuple(tuple(a * s for a in r) for r in self.rows), self.field)

    def __matmul__(self, other):
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = list(zip(*other.rows)) if other.rows else []
        z = self.field.zero
        out = []
        for r in self.rows:
            row = []
            for col in cols:
                acc = z
                for a, b in zip(r, col):
                    if a._an or a._bn:
                        acc = acc + a * b
                row.append(acc)
            out.append(tuple(row))
        return Matrix._wrap(tuple(out), self.field)

    def apply(self, vec):
        """Matrix times column vector (a sequence of scalars)."""
        z = self.field.zero
        out = []
        for r in self.rows:
            acc = z
            for a, b in zip(r, vec):
                if a._an or a._bn:
                    acc = acc + a * b
            out.append(acc)
        return out

    def __pow__(self, k):
        result = Matrix.identity(self.nrows, self.field)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def trace(self):
        acc = self.field.zero
        for i in range(self.nrows):
            acc = acc + self.rows[i][i]
        return acc

    def is_scalar(self):
        """True iff the matrix is ``s * I`` for some scalar ``s``."""
        if not self.is_square():
            return False
        s = self.rows[0][0] if self.rows else None
        return all((x == s) if i == j else x.is_zero() for i, r in enumerate(self.rows) for j, x in enumerate(r))

    # -- elimination -----------------------------------------------------

    def rref(self):
        """Reduced row echelon form and pivot columns."""
        m = [list(r) for r in self.rows]
        pivots = []
        row = 0
        for col in range(self.ncols):
            piv = next((i for i in range(row, self.nrows) if not m[i][col].is_zero()), None)
            if piv is None:
                continue
            m[row], m[piv] = m[piv], m[row]
            inv = m[row][col].inverse()
            m[row] = [x * inv for x in m[row]]
            for i in range(self.nrows):
                if i != row and not m[i][col].is_zero():
                    f = m[i][col]
                    m[i] = [a - f * b for a, b in zip(m[i], m[row])]
            pivots.append(col)
            row += 1
            if row == self.nrows:
                break
        return Matrix._wrap(tuple(tuple(r) for r in m), self.field), pivots

    def rank(self):
        return len(self.rref()[1])

    def inverse(self):
        if not self.is_square():
            raise ValueError("only square matrices are invertible")
        n = self.nrows
        aug = Matrix._wrap(tuple(r + e for r, e in zip(self.rows, Matrix.identity(n, self.field).rows)), self.field)
        red, pivots = aug.rref()
        if pivots[:n] != list(range(n)):
            raise ZeroDivisionError("singular matrix")
        return Matrix._wrap(tuple(r[n:] for r in red.rows), self.field)

    def is_invertible(self):
        return self.is_square() and self.rank() == self.nrows

    def nullspace(self):
        """Basis of ``{v : A v = 0}`` as lists of scalars."""
        red, pivots = self.rref()
        free = [j for j in range(self.ncols) if j not in pivots]
        basis = []
        for f in free:
            v = [self.field.zero] * self.ncols
            v[f] = self.field.one
            for i, p in enumerate(pivots):
                v[p] = -red.rows[i][f]
            basis.append(v)
        return basis

    def solve(self, rhs):
        """One solution ``x`` of ``A x = rhs`` or None if inconsistent."""
        aug = Matrix._wrap(tuple(r + (to_scalar(b, self.field),) for r, b in zip(self.rows, rhs)), self.field)
        red, pivots = aug.rref()
        if self.ncols in pivots:
            return None
        x = [self.field.zero] * self.ncols
        for i, p in enumerate(pivots):
            x[p] = red.rows[i][self.ncols]
        return x

    # -- polynomial invariants ------------------------------------------

    def poly_eval(self, f: UPoly) -> Matrix:
        n = self.nrows
        acc = Matrix.zeros(n, n, self.field)
        eye = Matrix.identity(n, self.field)
        for c in reversed(f.coeffs):
            acc = acc @ self + eye.scale(c)
        return acc

    def invariant_factors(self) -> list[UPoly]:
        """Nonconstant monic invariant factors, each dividing the next."""
        return [f for f in _smith_diagonal(self) if f.degree > 0]

    def charpoly(self) -> UPoly:
        out = UPoly([1], self.field)
        for f in _smith_diagonal(self):
            out = out * f
        return out

    def minpoly(self) -> UPoly:
        inv = self.invariant_factors()
        return inv[-1] if inv else UPoly([1], self.field)


def _smith_diagonal(a: Matrix) -> list[UPoly]:
    """Diagonal of the Smith form of ``xI - A`` over K[x] (monic entries)."""
    if not a.is_square():
        raise ValueError("square matrix required")
    n, field = a.nrows, a.field
    x = UPoly.x(field)
    m = [[(x if i == j else UPoly([], field)) - UPoly([a.rows[i][j]], field) for j in range(n)] for i in range(n)]
    diag = []
    for t in range(n):
        while True:
            cands = [(m[i][j].degree, i, j) for i in range(t, n) for j in range(t, n) if not m[i][j].is_zero()]
            if not cands:
                break
            _, pi, pj = min(cands)
            m[t], m[pi] = m[pi], m[t]
            for row in m:
                row[t], row[pj] = row[pj], row[t]
            piv = m[t][t]
            dirty = False
            for i in range(t + 1, n):
                if m[i][t].is_zero():
                    continue
                q, r = divmod(m[i][t], piv)
                m[i] = [a_ - q * b_ for a_, b_ in zip(m[i], m[t])]
                dirty = dirty or not r.is_zero()
            for j in range(t + 1, n):
                if m[t][j].is_zero():
                    continue
                q, r = divmod(m[t][j], piv)
                for i in range(n):
                    m[i][j] = m[i][j] - q * m[i][t]
                dirty = dirty or not r.is_zero()
            if dirty:
                continue
            bad = next(
                (i for i in range(t + 1, n) for j in range(t + 1, n) if not (m[i][j] % piv).is_zero()),
                None,
            )
            if bad is None:
                break
            m[t] = [a_ + b_ for a_, b_ in zip(m[t], m[bad])]
        diag.append(m[t][t].monic() if not m[t][t].is_zero() else m[t][t])
    return diag


def companion(f: UPoly) -> Matrix:
    """Companion matrix of a monic polynomial (ones on the subdiagonal)."""
    f = f.monic()
    k = f.degree
    field = f.field
    rows = [[field.zero] * k for _ in range(k)]
    for i in range(1, k):
        rows[i][i - 1] = field.one
    for i in range(k):
        rows[i][k - 1] = -f.coeffs[i]
    return Matrix(rows, field)


def rational_canonical_form(a: Matrix) -> Matrix:
    """Block diagonal of companion matrices of the invariant factors."""
    blocks = [companion(f) for f in a.invariant_factors()]
    if not blocks:
        return Matrix.zeros(0, 0, a.field)
    return Matrix.block_diag(blocks, a.field)


def is_similar(a: Matrix, b: Matrix) -> bool:
    return a.shape == b.shape and a.invariant_factors() == b.invariant_factors()


def is_indecomposable_matrix(b: Matrix) -> bool:
    """True iff ``b`` is not similar to a block diagonal ``diag(B1, B2)``.

    Over the field of ``b`` this means a single invariant factor that is a
    power of one irreducible polynomial.
    """
    inv = b.invariant_factors()
    if len(inv) != 1:
        return False
    return inv[0].squarefree_part().is_irreducible()


def is_diagonalizable(b: Matrix) -> bool:
    """Diagonalizable over the matrix's own field."""
    mp = b.minpoly()
    if mp.degree < 1:
        return True
    return all(f.degree == 1 and mult == 1 for f, mult in mp.factor())

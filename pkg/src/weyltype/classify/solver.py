"""Constraint system for one-dimensional weight spaces over W(Z, 1).

With ``p = 1`` and the basis normalized so that ``t Y_k = Y_{k+1}``, the
operator ``t^i (d/dt)^j`` sends ``Y_n`` to ``Y_{n+i-j}`` times::

    P_{i,j}(nbar) = sum_k C(j, k) [nbar]_{j-k} U_{k,i},   U = (P, Q, R, S)

where ``nbar = n + g``. ``P_0 = c`` is the scalar of ``t^0``, and the
normalizations ``P_1 = 1``, ``Q_1 = 0`` fix the basis and ``g``. Imposing
``act([x, y]) = [act(x), act(y)]`` on bracket identities of W and matching
powers of ``nbar`` gives polynomial equations in the unknowns and ``c``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from dataclasses import field as dc_field
from fractions import Fraction

from sympy import QQ, Poly, Symbol, factor_list, gcd, groebner
from sympy.polys.fields import field as frac_field
from sympy.polys.rings import ring

from ..gamma import GroupContext
from ..scalars import QQ as QFIELD
from ..scalars import to_scalar
from ..upoly import UPoly
from ..weyl import AlgebraElement, bracket, from_ddt, sigma, to_ddt
from .table import ActionTable, generator_keys

LETTERS = "PQRS"
MAX_ORDER = 3


class SolverError(ValueError):
    """Invalid solver request."""


# -- identities ------------------------------------------------------------


@dataclass(frozen=True)
class Gen:
    """The operator ``t^i (d/dt)^j``."""

    i: int
    j: int

    def __str__(self):
        if self.j == 0:
            return f"t^{self.i}"
        d = "d/dt" if self.j == 1 else f"(d/dt)^{self.j}"
        return d if self.i == 0 else f"t^{self.i}*{d}"


@dataclass(frozen=True)
class Br:
    left: object
    right: object

    def __str__(self):
        return f"[{self.left}, {self.right}]"


@dataclass(frozen=True)
class Identity:
    """``sum coeff * word = 0`` in W(Z, 1)."""

    label: str
    terms: tuple  # of (Fraction, word)

    def max_order(self) -> int:
        return max(_word_order(w) for _, w in self.terms)


def _word_order(w) -> int:
    if isinstance(w, Gen):
        return w.j
    return _word_order(w.left) + _word_order(w.right)


def eval_word(ctx: GroupContext, w) -> AlgebraElement:
    if isinstance(w, Gen):
        return from_ddt(ctx, w.i, w.j)
    return bracket(eval_word(ctx, w.left), eval_word(ctx, w.right))


def identity_holds(ctx: GroupContext, ident: Identity) -> bool:
    acc = AlgebraElement.zero(ctx)
    for c, w in ident.terms:
        acc = acc + eval_word(ctx, w).scale(to_scalar(c, ctx.field))
    return acc.is_zero()


def _expand_bracket(ctx, x: Gen, y: Gen):
    """``[x, y]`` in the ``t^m (d/dt)^r`` basis as ``{(m, r): Fraction}``."""
    out = {}
    for (m, r), c in to_ddt(bracket(from_ddt(ctx, x.i, x.j), from_ddt(ctx, y.i, y.j))).items():
        out[(int(m), r)] = c.to_fraction()
    return out


def pair_identities(K: int, ctx: GroupContext | None = None) -> list[Identity]:
    """``[x, y] - expansion = 0`` for generator pairs staying inside the budget.

    Generators are ``t^i (d/dt)^j`` with ``|i| <= K`` and ``j <= 3``; a pair
    is kept when its bracket has order at most 3 and indices within ``K``.
    """
    ctx = ctx or GroupContext.integers(1)
    gens = [Gen(i, j) for j in range(MAX_ORDER + 1) for i in range(-K, K + 1)]
    out = []
    for a in range(len(gens)):
        for b in range(a + 1, len(gens)):
            x, y = gens[a], gens[b]
            if x.j == 0 and y.j == 0:
                continue
            exp = _expand_bracket(ctx, x, y)
            if any(r > MAX_ORDER or abs(m) > K for (m, r) in exp):
                continue
            terms = [(Fraction(1), Br(x, y))] + [(-c, Gen(m, r)) for (m, r), c in sorted(exp.items())]
            out.append(Identity(str(Br(x, y)), tuple(terms)))
    return out


def classical_identities(K: int) -> list[Identity]:
    """The hand-picked identities used in the classical derivation."""
    F = Fraction
    out = []
    for i in range(-K + 1, K + 1):
        out.append(Identity(f"[d/dt, t^{i}]", ((F(1), Br(Gen(0, 1), Gen(i, 0))), (F(-i), Gen(i - 1, 0)))))
    for i in range(-K, K + 1):
        for j in range(1, K + 1):
            if abs(i + j - 1) <= K:
                out.append(
                    Identity(f"[t^{i}*d/dt, t^{j}]", ((F(1), Br(Gen(i, 1), Gen(j, 0))), (F(-j), Gen(i + j - 1, 0))))
                )
    for i in range(-K + 2, K):
        ff2 = (i + 1) * i
        ff3 = ff2 * (i - 1)
        out.append(
            Identity(
                f"[(d/dt)^2, t^{i + 1}]",
                ((F(1), Br(Gen(0, 2), Gen(i + 1, 0))), (F(-2 * (i + 1)), Gen(i, 1)), (F(-ff2), Gen(i - 1, 0))),
            )
        )
        if i - 2 >= -K:
            out.append(
                Identity(
                    f"[(d/dt)^3, t^{i + 1}]",
                    (
                        (F(1), Br(Gen(0, 3), Gen(i + 1, 0))),
                        (F(-3 * (i + 1)), Gen(i, 2)),
                        (F(-3 * ff2), Gen(i - 1, 1)),
                        (F(-ff3), Gen(i - 2, 0)),
                    ),
                )
            )
        out.append(
            Identity(
                f"[(d/dt)^2, t^{i + 1}*d/dt]",
                ((F(1), Br(Gen(0, 2), Gen(i + 1, 1))), (F(-2 * (i + 1)), Gen(i, 2)), (F(-ff2), Gen(i - 1, 1))),
            )
        )
    for i in range(-K + 2, K + 1):
        out.append(cubic_identity(i))
    return out


def cubic_identity(i: int) -> Identity:
    """``3[t D2, [t D2, t^i]] - 2(2i-1)[t D3, t^i] + [i+1]_4 t^(i-2) = 0`` with ``Dk = (d/dt)^k``."""
    ff4 = (i + 1) * i * (i - 1) * (i - 2)
    return Identity(
        f"cubic({i})",
        (
            (Fraction(3), Br(Gen(1, 2), Br(Gen(1, 2), Gen(i, 0)))),
            (Fraction(-2 * (2 * i - 1)), Br(Gen(1, 3), Gen(i, 0))),
            (Fraction(ff4), Gen(i - 2, 0)),
        ),
    )


IDENTITY_SETS = {"pairs": pair_identities, "classical": classical_identities}


# -- the polynomial system -------------------------------------------------


@dataclass
class SolverState:
    """Unknowns ``P_i, Q_i, R_i, S_i`` for ``|i| <= K`` and the value ``c`` of ``t^0``.

    ``c is None`` keeps ``c`` as an indeterminate (coefficients in Q(c)).
    """

    K: int
    c: Fraction | None = None

    def __post_init__(self):
        if self.K < 3:
            raise SolverError("K must be at least 3")
        names = ["nbar"] + [f"{L}[{i}]" for L in LETTERS for i in range(-self.K, self.K + 1) if not _fixed(L, i)]
        if self.c is None:
            base, self.csym = frac_field("c", QQ)
        else:
            base, self.csym = QQ, QQ(self.c.numerator, self.c.denominator)
        self.ring, *gens = ring([Symbol(s) for s in names], base)
        self.domain = self.ring.domain
        self.nbar = gens[0]
        self.names = names
        self.index = {n: k for k, n in enumerate(names)}
        self._gens = gens

    def unknown(self, letter: str, i: int):
        if letter == "P" and i == 0:
            return self.ring(self.csym)
        if letter == "P" and i == 1:
            return self.ring.one
        if letter == "Q" and i == 1:
            return self.ring.zero
        return self._gens[self.index[f"{letter}[{i}]"]]

    def falling(self, base, j: int):
        out = self.ring.one
        for k in range(j):
            out = out * (base - k)
        return out

    def ddt_action(self, i: int, j: int, nb=None):
        """``P_{i,j}(nbar)``, or its value at ``nbar = nb``."""
        nb = self.nbar if nb is None else self.ring(nb)
        acc = self.ring.zero
        for k in range(j + 1):
            acc += math.comb(j, k) * self.falling(nb, j - k) * self.unknown(LETTERS[k], i)
        return acc


def _fixed(letter, i) -> bool:
    return (letter, i) in (("P", 0), ("P", 1), ("Q", 1))


def _op(state: SolverState, w):
    """``(shift, poly in nbar)`` of a word acting on ``Y_n``."""
    if isinstance(w, Gen):
        return w.i - w.j, state.ddt_action(w.i, w.j)
    sa, fa = _op(state, w.left)
    sb, fb = _op(state, w.right)
    nb = state.nbar
    ab = fa.compose(nb, nb + sb) * fb
    ba = fb.compose(nb, nb + sa) * fa
    return sa + sb, ab - ba


def _op_at(state: SolverState, w, v: int):
    """Value of the word's polynomial at the integer ``nbar = v``."""
    if isinstance(w, Gen):
        return state.ddt_action(w.i, w.j, v)
    sa = _shift(w.left)
    sb = _shift(w.right)
    return _op_at(state, w.left, v + sb) * _op_at(state, w.right, v) - _op_at(
        state, w.right, v + sa
    ) * _op_at(state, w.left, v)


def _shift(w) -> int:
    if isinstance(w, Gen):
        return w.i - w.j
    return _shift(w.left) + _shift(w.right)


def _identity_poly(state: SolverState, ident: Identity, sample: int | None):
    shifts = {_shift(w) for _, w in ident.terms}
    if len(shifts) != 1:
        raise SolverError(f"identity {ident.label} is not homogeneous")
    if sample is None:
        acc = state.ring.zero
        for c, w in ident.terms:
            acc += state.ring(QQ(c.numerator, c.denominator)) * _op(state, w)[1]
        return acc
    # Newton forward differences on nbar = sample, sample+1, ...
    deg = ident.max_order()
    values = []
    for v in range(sample, sample + deg + 1):
        acc = state.ring.zero
        for c, w in ident.terms:
            acc += state.ring(QQ(c.numerator, c.denominator)) * _op_at(state, w, v)
        values.append(acc)
    out = state.ring.zero
    basis = state.ring.one
    diffs = values
    for k in range(deg + 1):
        out += diffs[0] * basis * state.ring(QQ(1, math.factorial(k)))
        basis = basis * (state.nbar - sample - k)
        diffs = [b - a for a, b in zip(diffs, diffs[1:])]
    return out


@dataclass
class Equation:
    label: str
    poly: object  # sympy PolyElement free of nbar

    def __str__(self):
        return f"{self.poly.as_expr()} = 0   [{self.label}]"


def gen_constraints(state: SolverState, identities="pairs", sample: int | None = None) -> list[Equation]:
    """Equations from matching powers of ``nbar`` in every identity.

    ``identities`` is a set name or a list of :class:`Identity`. With
    ``sample`` set, each polynomial is rebuilt by interpolation from its
    values at ``nbar = sample, sample + 1, ...`` instead of symbolically.
    """
    if isinstance(identities, str):
        identities = IDENTITY_SETS[identities](state.K)
    out = []
    for ident in identities:
        poly = _identity_poly(state, ident, sample)
        groups: dict = {}
        for monom, coeff in poly.terms():
            groups.setdefault(monom[0], {})[(0,) + monom[1:]] = coeff
        for power in sorted(groups):
            eq = state.ring.from_dict(groups[power])
            if eq:
                out.append(Equation(f"{ident.label} @ nbar^{power}", eq))
    return out


# -- elimination -----------------------------------------------------------


def _substitute(state: SolverState, f, values: dict):
    """Replace generators (by index) with ring elements."""
    R = state.ring
    plain: dict = {}
    extra = R.zero
    for monom, coeff in f.terms():
        hit = [k for k in values if monom[k]]
        if not hit:
            plain[monom] = plain.get(monom, 0) + coeff
            continue
        rest = list(monom)
        factor = R.one
        for k in hit:
            factor = factor * values[k] ** monom[k]
            rest[k] = 0
        extra += R.from_dict({tuple(rest): coeff}) * factor
    return R.from_dict(plain) + extra if plain else extra


def _variables(f) -> set:
    out = set()
    for monom in f.monoms():
        out.update(k for k, e in enumerate(monom) if e)
    return out


def _split_linear(state: SolverState, f, k: int):
    """``(coeff, rest)`` with ``f = coeff * x_k + rest`` if ``f`` is linear in ``x_k``."""
    R = state.ring
    lin: dict = {}
    rest: dict = {}
    for monom, coeff in f.terms():
        e = monom[k]
        if e > 1:
            return None
        if e == 1:
            m = list(monom)
            m[k] = 0
            lin[tuple(m)] = coeff
        else:
            rest[monom] = coeff
    return R.from_dict(lin), R.from_dict(rest)


def _is_constant(state: SolverState, x) -> bool:
    """Ground with a rational value (no dependence on ``c``)."""
    if not x.is_ground:
        return False
    v = x.LC if x else state.domain.zero
    if state.c is not None:
        return True
    return v.numer.is_ground and v.denom.is_ground


@dataclass
class Elimination:
    solved: dict  # name -> ring element
    residual: list  # of Equation
    assumptions: list  # ring elements (ground) assumed nonzero
    log: list
    free: list  # unknown names left undetermined


def eliminate(state: SolverState, equations: list[Equation]) -> Elimination:
    """Solve unknowns stage by stage (P, then Q, R, S).

    An unknown is solved from the first equation linear in it whose
    coefficient is ground, preferring coefficients free of ``c``. First
    pass: the remainder must already be ground. Second pass: the remainder
    may involve unknowns of this or earlier stages.
    """
    values: dict = {}
    names = state.names
    assumptions = []
    lines = []
    pending = list(equations)

    def letter(k):
        return names[k][0]

    for stage, L in enumerate(LETTERS):
        allowed = set(LETTERS[: stage + 1])
        while True:
            pending = [Equation(e.label, _substitute(state, e.poly, values)) if values else e for e in pending]
            pending = [e for e in pending if e.poly]
            values_new = {}
            best: dict = {}
            second = None
            for e in pending:
                vs = _variables(e.poly)
                for k in sorted(vs):
                    if letter(k) != L or k in values_new:
                        continue
                    split = _split_linear(state, e.poly, k)
                    if split is None:
                        continue
                    coeff, rest = split
                    if not coeff.is_ground:
                        continue
                    others = _variables(rest)
                    if not others:
                        rank = 0 if _is_constant(state, coeff) else 1
                        if k not in best or rank < best[k][0]:
                            best[k] = (rank, coeff, rest, e.label)
                    elif all(letter(o) in allowed for o in others):
                        cand = (len(others), 0 if _is_constant(state, coeff) else 1, k, coeff, rest, e.label)
                        if second is None or cand[:3] < second[:3]:
                            second = cand
            if best:
                chosen = {k: v[1:] for k, v in best.items()}
            elif second is not None:
                _, _, k, coeff, rest, label = second
                chosen = {k: (coeff, rest, label)}
            else:
                break
            for k, (coeff, rest, label) in sorted(chosen.items()):
                value = _divide(state, -rest, coeff)
                values_new[k] = value
                if not _is_constant(state, coeff):
                    assumptions.append(coeff)
                lines.append(f"{names[k]} = {_fmt(value)}   [from {label}]")
            # earlier values may mention the new unknowns
            values = {k: _substitute(state, v, values_new) for k, v in values.items()}
            values.update(values_new)
    residual = [e for e in pending if e.poly]
    solved = {names[k]: v for k, v in values.items()}
    free = [n for n in names[1:] if n not in solved]
    return Elimination(solved, residual, assumptions, lines, free)


def _divide(state, num, coeff):
    inv = state.domain.one / coeff.LC
    return num * state.ring(inv)


def _fmt(x) -> str:
    return str(x.as_expr()).replace("**", "^")


# -- residual analysis -----------------------------------------------------


def _to_sympy_poly(state: SolverState, f):
    """Numerator of ``f`` as a sympy expression over Q (``c`` included)."""
    expr = f.as_expr()
    if state.c is None:
        expr = expr.together()
        expr = expr.as_numer_denom()[0]
    return expr.expand()


def _residual_basis(state: SolverState, elim: Elimination):
    csym = Symbol("c")
    free = [Symbol(n) for n in elim.free]
    gens = free + ([csym] if state.c is None else [])
    polys = []
    seen = set()
    for e in elim.residual:
        p = _to_sympy_poly(state, e.poly)
        if p == 0:
            continue
        if not gens:
            return [1], gens
        pp = Poly(p, *gens, domain="QQ").monic()
        key = pp.as_expr()
        if key not in seen:
            seen.add(key)
            polys.append(pp.as_expr())
    if not polys:
        return [], gens
    if not gens:
        return [1], gens
    gb = groebner(polys, *gens, order="lex", domain="QQ")
    return list(gb.exprs), gens


def _rational_roots(expr, var) -> list[Fraction]:
    roots = []
    _, factors = factor_list(Poly(expr, var, domain="QQ"))
    for f, _mult in factors:
        if f.degree() == 1:
            a, b = f.all_coeffs()
            r = -b / a
            roots.append(Fraction(int(r.p), int(r.q)))
    return sorted(set(roots))


@dataclass
class Family:
    """A solution of the ``p = 1`` system at a fixed ``c``."""

    c: Fraction
    K: int
    values: dict  # (letter, i) -> Fraction
    free: list = dc_field(default_factory=list)
    relations: list = dc_field(default_factory=list)

    def get(self, letter: str, i: int) -> Fraction:
        return self.values[(letter, i)]

    def P(self, i):
        return self.get("P", i)

    def Q(self, i):
        return self.get("Q", i)

    def R(self, i):
        return self.get("R", i)

    def S(self, i):
        return self.get("S", i)

    @property
    def kind(self) -> str:
        return {1: "plain", -1: "twisted"}.get(self.c, "other")

    def action_poly(self, i: int, j: int) -> UPoly:
        """``P_{i,j}`` as a polynomial in ``nbar``."""
        x = UPoly.x(QFIELD)
        acc = UPoly([], QFIELD)
        for k in range(j + 1):
            ff = UPoly([1], QFIELD)
            for s in range(j - k):
                ff = ff * (x - s)
            acc = acc + ff * UPoly([math.comb(j, k) * self.get(LETTERS[k], i)], QFIELD)
        return acc

    def to_json(self) -> dict:
        return {
            "c": str(self.c),
            "kind": self.kind,
            "K": self.K,
            **{
                L: {str(i): str(self.values[(L, i)]) for i in range(-self.K, self.K + 1) if (L, i) in self.values}
                for L in LETTERS
            },
            "free": list(self.free),
            "relations": list(self.relations),
        }


@dataclass
class SolveReport:
    K: int
    families: list
    infeasible: list  # c values shown to admit no solution
    eliminant: str
    log: list

    def to_json(self) -> dict:
        return {
            "K": self.K,
            "families": [f.to_json() for f in self.families],
            "infeasible": [str(c) for c in self.infeasible],
            "eliminant": self.eliminant,
            "log": list(self.log),
        }


def _parse_name(name: str):
    return name[0], int(name[2:-1])


def _fixed_run(K: int, c: Fraction, identities, lines: list) -> Family | None:
    state = SolverState(K, c=c)
    eqs = gen_constraints(state, identities)
    elim = eliminate(state, eqs)
    lines.append(f"-- c = {c}: {len(eqs)} equations, {len(elim.solved)} solved, {len(elim.free)} free")
    lines.extend("   " + s for s in elim.log)
    gb, _ = _residual_basis(state, elim)
    if gb == [1]:
        lines.append(f"   residual system is inconsistent: no solution at c = {c}")
        return None
    values = {("P", 0): c, ("P", 1): Fraction(1), ("Q", 1): Fraction(0)}
    for name, v in elim.solved.items():
        if v.is_ground:
            q = v.LC if v else QQ(0)
            values[_parse_name(name)] = Fraction(int(q.numerator), int(q.denominator))
    free = [n for n in elim.free] + [n for n, v in elim.solved.items() if not v.is_ground]
    relations = [str(g) for g in gb]
    for r in relations:
        lines.append(f"   relation: {r} = 0")
    return Family(c, K, values, sorted(free), relations)


def solve_p1(K: int, fixed_c=None, identities="pairs") -> SolveReport:
    """Solve the ``p = 1`` system on indices ``|i| <= K``.

    With ``fixed_c`` the system is solved at that value only. Otherwise
    ``c`` is eliminated symbolically: candidate values are the rational
    roots of the univariate eliminant in ``c`` together with the roots of
    every pivot assumed nonzero, and each candidate is solved exactly.
    """
    if K < 3:
        raise SolverError("K must be at least 3")
    if isinstance(identities, str):
        identities = IDENTITY_SETS[identities](K)
    lines = []
    if fixed_c is not None:
        c = Fraction(fixed_c)
        fam = _fixed_run(K, c, identities, lines)
        return SolveReport(K, [fam] if fam else [], [] if fam else [c], "", lines)

    state = SolverState(K)
    eqs = gen_constraints(state, identities)
    elim = eliminate(state, eqs)
    lines.append(f"-- c indeterminate: {len(eqs)} equations from {len(identities)} identities")
    lines.extend("   " + s for s in elim.log)
    gb, _ = _residual_basis(state, elim)
    csym = Symbol("c")
    candidates = set()
    if gb == [1]:
        eliminant = "1"
    else:
        uni = [g for g in gb if g.free_symbols <= {csym}]
        if not uni:
            raise SolverError("residual system does not determine c")
        e = uni[0]
        for u in uni[1:]:
            e = gcd(e, u)
        eliminant = str(Poly(e, csym).as_expr().factor())
        candidates.update(_rational_roots(e, csym))
    lines.append(f"   eliminant in c: {eliminant}")
    for a in elim.assumptions:
        num = a.LC.numer.as_expr()
        if num.free_symbols:
            roots = _rational_roots(num, csym)
            candidates.update(roots)
    lines.append("   candidates: " + ", ".join(str(r) for r in sorted(candidates)))
    families, infeasible = [], []
    for c in sorted(candidates):
        fam = _fixed_run(K, c, identities, lines)
        if fam is None:
            infeasible.append(c)
        else:
            families.append(fam)
    return SolveReport(K, families, infeasible, eliminant, lines)


# -- comparisons -----------------------------------------------------------


def family_to_table(family: Family, radius: int | None = None, g=0) -> ActionTable:
    """Action table of a family over ``Gamma = Z`` with ``nbar = n + g``."""
    ctx = GroupContext.integers(1)
    radius = family.K - 2 if radius is None else radius
    if radius < 1 or radius > family.K - 2:
        raise SolverError("radius must lie in 1..K-2")
    g = to_scalar(g, ctx.field)
    points = ctx.window(radius)
    wset = set(points)
    from ..linalg import Matrix

    action = {}
    for key in generator_keys(ctx):
        (a,), i = key
        j = 0 if i is None else 1
        poly = family.action_poly(int(a) + j, j)
        for beta in points:
            target = (beta[0] + a,)
            if target in wset:
                action[(key, beta)] = Matrix([[poly(beta[0] + g)]], ctx.field)
    return ActionTable(ctx, tuple(points), {b: 1 for b in points}, action)


def sigma_image_check(plus: Family, minus: Family) -> list[str]:
    """Mismatches between ``minus`` and the twist of ``plus`` (empty if equal).

    The twisted action of ``t^i (d/dt)^j`` is the plain action of its image
    under the involution; rescaling ``Y_n -> (-1)^n Y_n`` restores the
    normalization ``t Y_n = Y_{n+1}``. Compared coefficientwise in ``nbar``.
    """
    ctx = GroupContext.integers(1)
    K = min(plus.K, minus.K)
    bad = []
    for i in range(-K + MAX_ORDER, K + 1):
        for j in range(MAX_ORDER + 1):
            acc = UPoly([], QFIELD)
            for (m, r), coef in to_ddt(sigma(from_ddt(ctx, i, j))).items():
                acc = acc + plus.action_poly(int(m), r) * UPoly([coef], QFIELD)
            if (i - j) % 2:
                acc = -acc
            want = minus.action_poly(i, j)
            if acc != want:
                bad.append(f"t^{i}*(d/dt)^{j}: sigma image {acc} != {want}")
    return bad

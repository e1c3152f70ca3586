"""Seeded random samplers and property suites.

Every trial draws from its own ``random.Random`` seeded by
``"{seed}:{suite}:{trial}"``, so results do not depend on trial order and
rerunning a suite with the same seed reproduces it exactly.
"""

from __future__ import annotations

import random
from collections.abc import Callable
from dataclasses import dataclass
from dataclasses import field as dc_field

from .gamma import GroupContext
from .linalg import Matrix
from .repmod import (
    MatrixTuple,
    ModuleSpec,
    ModuleVector,
    act,
    direct_sum,
    find_associativity_witness,
)
from .scalars import FieldContext
from .weyl import AlgebraElement, ExtendedElement, bracket, extended_bracket, sigma

# -- fixtures ----------------------------------------------------------------

CONTEXTS = {
    "Z": lambda: GroupContext.integers(1),
    "Z2": lambda: GroupContext.integers(2),
    "Z+Zsqrt2": lambda: GroupContext(1, [[1], [FieldContext(2).sqrt_d()]], FieldContext(2)),
}

_CTX_CACHE: dict = {}


def context(name: str) -> GroupContext:
    if name not in _CTX_CACHE:
        _CTX_CACHE[name] = CONTEXTS[name]()
    return _CTX_CACHE[name]


def random_point(ctx: GroupContext, rng: random.Random, span: int = 3) -> tuple:
    return ctx.combine([rng.randint(-span, span) for _ in ctx.generators])


def random_mu(n: int, rng: random.Random, max_degree: int = 4) -> tuple:
    total = rng.randint(0, max_degree)
    mu = [0] * n
    for _ in range(total):
        mu[rng.randrange(n)] += 1
    return tuple(mu)


def random_element(ctx: GroupContext, rng: random.Random, max_terms: int = 4, max_degree: int = 4) -> AlgebraElement:
    """Sum of 1..max_terms monomials with coefficients in +-{1, 2, 3}."""
    acc = AlgebraElement.zero(ctx)
    for _ in range(rng.randint(1, max_terms)):
        c = rng.choice([1, 2, 3]) * rng.choice([1, -1])
        acc = acc + AlgebraElement.monomial(ctx, random_point(ctx, rng), random_mu(ctx.n, rng, max_degree), c)
    return acc


def random_extended(ctx: GroupContext, rng: random.Random) -> ExtendedElement:
    return ExtendedElement(random_element(ctx, rng), rng.randint(-3, 3))


def random_commuting(ctx: GroupContext, p: int, rng: random.Random) -> MatrixTuple:
    """n commuting rational p x p matrices: polynomials in one random matrix."""
    field = ctx.field
    base = Matrix([[rng.randint(-2, 2) for _ in range(p)] for _ in range(p)], field)
    mats = []
    for _ in range(ctx.n):
        acc = Matrix.zeros(p, p, field)
        power = Matrix.identity(p, field)
        for _k in range(p):
            acc = acc + power.scale(rng.randint(-2, 2))
            power = power @ base
        mats.append(acc)
    return MatrixTuple(mats, field)


def random_spec(ctx: GroupContext, rng: random.Random, kinds=("plain", "twisted"), max_p: int = 3) -> ModuleSpec:
    kind = rng.choice(kinds)
    if kind == "trivial":
        return ModuleSpec.trivial(ctx, rng.randint(0, 2))
    if kind == "direct_sum":
        parts = [random_spec(ctx, rng, ("plain", "twisted", "trivial"), max_p=2) for _ in range(rng.randint(2, 3))]
        return direct_sum(parts)
    return ModuleSpec(kind, ctx, G=random_commuting(ctx, rng.randint(1, max_p), rng))


def random_vector(spec: ModuleSpec, rng: random.Random, max_terms: int = 3) -> ModuleVector:
    ctx = spec.ctx
    entries = {}
    for _ in range(rng.randint(1, max_terms)):
        beta = random_point(ctx, rng, 2)
        dim = spec.dim(beta)
        if dim:
            entries[(beta, rng.randrange(dim))] = rng.choice([1, 2, 3]) * rng.choice([1, -1])
    return ModuleVector(entries, ctx.field)


def twisted_fixtures() -> list[ModuleSpec]:
    """A few twisted modules used to exhibit failures of associativity."""
    Z, Z2 = context("Z"), context("Z2")
    return [
        ModuleSpec.twisted(Z, [[[0]]]),
        ModuleSpec.twisted(Z, [[[1, 1], [0, 1]]]),
        ModuleSpec.twisted(Z2, [[[2]], [[-1]]]),
        ModuleSpec.twisted(context("Z+Zsqrt2"), [[[1, 0], [0, 2]]]),
    ]


# -- suites ------------------------------------------------------------------

ROTATION = ("Z", "Z2", "Z+Zsqrt2")


def _rotating(k: int, names=ROTATION) -> GroupContext:
    return context(names[k % len(names)])


def _associativity(rng, k):
    ctx = _rotating(k)
    x, y, z = (random_element(ctx, rng) for _ in range(3))
    if (x * y) * z != x * (y * z):
        return f"(xy)z != x(yz) over {ROTATION[k % 3]}: x={x}, y={y}, z={z}"


def _jacobi(rng, k):
    ctx = _rotating(k)
    x, y, z = (random_element(ctx, rng) for _ in range(3))
    total = bracket(x, bracket(y, z)) + bracket(y, bracket(z, x)) + bracket(z, bracket(x, y))
    if not total.is_zero():
        return f"Jacobi fails over {ROTATION[k % 3]}: x={x}, y={y}, z={z}"


def _central(rng, k):
    names = ("Z", "Z+Zsqrt2")
    ctx = _rotating(k, names)
    x, y, z = (random_extended(ctx, rng) for _ in range(3))
    if extended_bracket(x, y) != -extended_bracket(y, x):
        return f"antisymmetry fails: x={x}, y={y}"
    total = (
        extended_bracket(x, extended_bracket(y, z))
        + extended_bracket(y, extended_bracket(z, x))
        + extended_bracket(z, extended_bracket(x, y))
    )
    if not total.is_zero():
        return f"extended Jacobi fails: x={x}, y={y}, z={z}"


def _sigma(rng, k):
    ctx = _rotating(k)
    x, y = random_element(ctx, rng), random_element(ctx, rng)
    if sigma(sigma(x)) != x:
        return f"sigma is not an involution on {x}"
    if sigma(bracket(x, y)) != bracket(sigma(x), sigma(y)):
        return f"sigma does not preserve [{x}, {y}]"


def _intertwining(rng, k):
    ctx = _rotating(k)
    G = random_commuting(ctx, rng.randint(1, 3), rng)
    plain, twisted = ModuleSpec.plain(ctx, G), ModuleSpec.twisted(ctx, G)
    x = random_element(ctx, rng, max_degree=3)
    v = random_vector(plain, rng)
    if act(twisted, x, v) != act(plain, sigma(x), v):
        return f"twisted action differs from plain action of sigma(x) for x={x}"


def _module(rng, k):
    ctx = _rotating(k)
    kinds = ("plain", "twisted", "trivial", "direct_sum")
    spec = random_spec(ctx, rng, (kinds[k % 4],))
    x, y = random_element(ctx, rng, 3, 3), random_element(ctx, rng, 3, 3)
    v = random_vector(spec, rng)
    lhs = act(spec, bracket(x, y), v)
    rhs = act(spec, x, act(spec, y, v)) - act(spec, y, act(spec, x, v))
    if lhs != rhs:
        return f"Lie module law fails for {spec.kind}: x={x}, y={y}"


def _plain_associative(rng, k):
    ctx = _rotating(k)
    spec = random_spec(ctx, rng, ("plain",))
    x, y = random_element(ctx, rng, 3, 3), random_element(ctx, rng, 3, 3)
    v = random_vector(spec, rng)
    if act(spec, x * y, v) != act(spec, x, act(spec, y, v)):
        return f"associative law fails for plain module: x={x}, y={y}"


def _roundtrip(rng, k):
    from .classify import recognize, table_from_spec, unbase_table
    from .linalg import rational_canonical_form

    ctx = _rotating(k, ("Z", "Z2"))
    spec = random_spec(ctx, rng)
    table = table_from_spec(spec, 4)
    found = recognize(table)
    if found.kind != spec.kind:
        return f"expected {spec.kind}, recognized {found}"
    for a, b in zip(spec.G, found.G):
        if rational_canonical_form(a) != rational_canonical_form(b):
            return f"G not similar: {a} vs {b}"
    if unbase_table(table_from_spec(found.spec, 4), found.basis) != table:
        return "basis change does not regenerate the table"


SUITES: dict[str, Callable] = {
    "associativity": _associativity,
    "jacobi": _jacobi,
    "central": _central,
    "sigma": _sigma,
    "intertwining": _intertwining,
    "module": _module,
    "plain-associative": _plain_associative,
    "roundtrip": _roundtrip,
}


@dataclass
class SuiteResult:
    suite: str
    trials: int
    seed: int
    passed: int = 0
    failures: list = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.passed == self.trials

    def summary(self) -> str:
        return f"{'PASS' if self.ok else 'FAIL'} {self.passed}/{self.trials}"


def trial_rng(seed: int, suite: str, k: int) -> random.Random:
    return random.Random(f"{seed}:{suite}:{k}")


def run_suite(name: str, trials: int, seed: int = 0, stop_after: int | None = None) -> SuiteResult:
    """Run ``trials`` independent trials of a named suite."""
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    check = SUITES[name]
    result = SuiteResult(name, trials, seed)
    for k in range(trials):
        problem = check(trial_rng(seed, name, k), k)
        if problem is None:
            result.passed += 1
        else:
            result.failures.append(f"trial {k}: {problem}")
            if stop_after is not None and len(result.failures) >= stop_after:
                result.trials = k + 1
                break
    return result


def associativity_witnesses() -> list:
    """``(spec, witness)`` for every twisted fixture."""
    return [(spec, find_associativity_witness(spec)) for spec in twisted_fixtures()]

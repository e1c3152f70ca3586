"""Algebra engine checks against an operator model.

The model lets ``t^a D^m`` act on the symbolic power ``t^s``: it sends it to
``s^m t^(a+s)`` (coordinatewise for n = 2). Elements are determined by this
action, so products computed by composing the actions give an oracle that
shares no code with the engine.
"""

import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from weyltype.checks import random_element
from weyltype.gamma import DerivationVector
from weyltype.scalars import FieldContext
from weyltype.weyl import (
    AlgebraElement,
    DegeneratePairError,
    ExtendedElement,
    bracket,
    cocycle,
    embed_rank1,
    extended_bracket,
    format_element,
    from_ddt,
    from_falling,
    grade_decompose,
    rank1_coordinates,
    sigma,
    to_ddt,
    to_falling,
)

F2 = FieldContext(2)
seeds = st.integers(0, 10**6)


def model(x, s):
    """``x`` applied to ``t^s`` as ``{alpha: coefficient polynomial in s}``."""
    out = {}
    for (alpha, mu), c in x.terms.items():
        term = c.to_sympy()
        for si, mi in zip(s, mu):
            term *= si**mi
        key = tuple(a.to_sympy() for a in alpha)
        out[key] = out.get(key, 0) + term
    return out


def compose(x, y, s):
    """``x(y(t^s))`` in the same representation."""
    out = {}
    for beta, cy in model(y, s).items():
        shifted = tuple(si + b for si, b in zip(s, beta))
        for alpha, cx in model(x, shifted).items():
            key = tuple(a + b for a, b in zip(alpha, beta))
            out[key] = out.get(key, 0) + cx * cy
    return out


def same(a, b):
    keys = set(a) | set(b)
    return all(sympy.expand(a.get(k, 0) - b.get(k, 0)) == 0 for k in keys)


def symbols(n):
    return sympy.symbols(f"s1:{n + 1}")


@settings(max_examples=40, deadline=None)
@given(seeds, st.sampled_from(["Z", "Z2", "Z+Zsqrt2"]))
def test_product_matches_operator_model(seed, name):
    from weyltype.checks import context

    ctx = context(name)
    rng = random.Random(seed)
    x, y = random_element(ctx, rng, 3, 3), random_element(ctx, rng, 3, 3)
    s = symbols(ctx.n)
    assert same(model(x * y, s), compose(x, y, s))


def test_small_products(Z):
    t, D = AlgebraElement.t(Z, (1,)), AlgebraElement.D(Z)
    assert (t * D) * t == AlgebraElement.t(Z, (2,)) + AlgebraElement.t(Z, (2,)) * D
    assert bracket(D, t) == t
    tinv_D = AlgebraElement.t(Z, (-1,)) * D
    assert bracket(tinv_D, AlgebraElement.t(Z, (2,))) == 2 * AlgebraElement.t(Z, (1,))


def test_sigma_examples(Z):
    t, D = AlgebraElement.t(Z, (1,)), AlgebraElement.D(Z)
    assert sigma(t) == -t
    assert sigma(D) == D
    assert sigma(t * D) == t + t * D
    assert sigma(AlgebraElement.one(Z)) == -AlgebraElement.one(Z)


def test_sigma_is_minus_reversed_product_on_monomials(Z2):
    # t^a D^m -> (-1)^(|m|+1) D^m t^a
    t = AlgebraElement.t(Z2, (2, -1))
    Dm = AlgebraElement.D(Z2, 0, 2) * AlgebraElement.D(Z2, 1, 1)
    assert sigma(t * Dm) == Dm * t


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_falling_roundtrip(seed):
    from weyltype.checks import context

    ctx = context("Z2")
    x = random_element(ctx, random.Random(seed))
    assert from_falling(ctx, to_falling(x)) == x


def test_ddt_basis(Z):
    # t^2 (d/dt)^2 = D^2 - D
    D = AlgebraElement.D(Z)
    assert from_ddt(Z, 2, 2) == D * D - D
    assert to_ddt(from_ddt(Z, 3, 2)) == {(3, 2): 1}


def test_grade_decompose(Z):
    x = AlgebraElement.t(Z, (1,)) + AlgebraElement.t(Z, (-2,)) * AlgebraElement.D(Z)
    parts = grade_decompose(x)
    assert sorted(int(k[0]) for k in parts) == [-2, 1]
    assert sum(parts.values(), AlgebraElement.zero(Z)) == x


def test_rank_one_embedding(Z2):
    alpha = Z2.element((1, 2))
    d = DerivationVector([1, 1])
    x = embed_rank1(alpha, d, 3, 2) - embed_rank1(alpha, d, -1, 0).scale(5)
    assert rank1_coordinates(x, alpha.coords, d) == {(3, 2): 1, (-1, 0): -5}
    assert rank1_coordinates(AlgebraElement.t(Z2, (1, 0)), alpha.coords, d) is None
    with pytest.raises(DegeneratePairError):
        embed_rank1(alpha, DerivationVector([2, -1]), 1, 1)
    # brackets stay inside the rank-one subalgebra
    y = bracket(embed_rank1(alpha, d, 1, 1), embed_rank1(alpha, d, 2, 0))
    assert rank1_coordinates(y, alpha.coords, d) is not None


@pytest.mark.parametrize("a", [-3, -2, -1, 0, 1, 2, 3, "sqrt2"])
def test_cocycle_on_first_order(a, Z, Zr2):
    ctx = Zr2 if a == "sqrt2" else Z
    a_val = F2.sqrt_d() if a == "sqrt2" else a
    a_sym = sympy.sqrt(2) if a == "sqrt2" else sympy.Integer(a)
    x = AlgebraElement.monomial(ctx, (a_val,), (1,))
    y = AlgebraElement.monomial(ctx, (-a_val,), (1,))
    expected = -(a_sym + 1) * a_sym * (a_sym - 1) / 6
    assert sympy.simplify(cocycle(x, y).to_sympy() - expected) == 0


def test_cocycle_vanishes_off_diagonal(Z):
    x = AlgebraElement.monomial(Z, (2,), (1,))
    assert cocycle(x, AlgebraElement.monomial(Z, (-1,), (1,))).is_zero()


def test_extended_bracket_of_t_powers(Z):
    one = ExtendedElement(AlgebraElement.t(Z, (1,)))
    inv = ExtendedElement(AlgebraElement.t(Z, (-1,)))
    assert extended_bracket(one, inv) == ExtendedElement.C(Z)


def test_formatting(Z, Z2, Zr2):
    t = AlgebraElement.t(Z, (2,))
    assert format_element(t + t * AlgebraElement.D(Z)) == "t^(2) + t^(2)*D"
    assert format_element(-AlgebraElement.t(Z, (1,))) == "-t^(1)"
    assert format_element(AlgebraElement.zero(Z), Z.field.one * 2) == "2*C"
    r = F2.sqrt_d()
    assert format_element(AlgebraElement.D(Zr2).scale(1 + r)) == "(1+sqrt(2))*t^(0)*D"
    assert format_element(AlgebraElement.D(Z2, 1, 2)) == "t^(0, 0)*D2^2"

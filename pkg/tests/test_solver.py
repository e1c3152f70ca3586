import json
from fractions import Fraction

import pytest

from weyltype.classify import (
    SolverError,
    SolverState,
    family_to_table,
    gen_constraints,
    identity_holds,
    pair_identities,
    classical_identities,
    recognize,
    sigma_image_check,
    solve_p1,
    table_from_spec,
)
from weyltype.classify.solver import Br, Gen, Identity
from weyltype.repmod import ModuleSpec


def ff(x, j):
    out = 1
    for k in range(j):
        out *= x - k
    return out


def comb(n, k):
    from math import comb as c

    return c(n, k)


def ddt_bracket_formula(i, j, k, l):
    """Right side of the bracket of t^i (d/dt)^j with t^k (d/dt)^l."""
    out = {}
    for s in range(max(j, l) + 1):
        c = comb(j, s) * ff(k, s) - comb(l, s) * ff(i, s)
        if c:
            key = (i + k - s, j + l - s)
            out[key] = out.get(key, 0) + c
    return {key: v for key, v in out.items() if v}


def test_pair_identities_agree_with_closed_formula(Z):
    for ident in pair_identities(3):
        (_, br), *rest = ident.terms
        x, y = br.left, br.right
        expansion = {(g.i, g.j): -c for c, g in rest}
        assert expansion == ddt_bracket_formula(x.i, x.j, y.i, y.j)
        assert identity_holds(Z, ident)


def test_classical_identities_hold_in_W(Z):
    assert all(identity_holds(Z, ident) for ident in classical_identities(5))


def test_first_order_chain_equation():
    state = SolverState(4)
    eqs = {e.label: e.poly for e in gen_constraints(state, classical_identities(4))}
    c = state.ring(state.csym)
    P = state.unknown
    poly = eqs["[d/dt, t^3] @ nbar^0"]
    expected = 3 * c * P("P", 3) - 3 * P("P", 2)
    assert poly in (expected, -expected)


def test_constraints_do_not_depend_on_sampling_window():
    state = SolverState(3)
    symbolic = gen_constraints(state)
    for offset in (0, -4, 11):
        sampled = gen_constraints(state, sample=offset)
        assert [e.label for e in sampled] == [e.label for e in symbolic]
        assert all(a.poly == b.poly for a, b in zip(sampled, symbolic))


def test_range_too_small():
    with pytest.raises(SolverError):
        solve_p1(2)
    with pytest.raises(SolverError):
        SolverState(1)


def test_inhomogeneous_identity_rejected():
    bad = Identity("bad", ((Fraction(1), Gen(1, 0)), (Fraction(1), Gen(2, 0))))
    with pytest.raises(SolverError):
        gen_constraints(SolverState(3), [bad])


def test_exactly_two_families(p1_report):
    assert sorted(f.c for f in p1_report.families) == [-1, 1]
    assert Fraction(0) in p1_report.infeasible
    assert all(not f.free for f in p1_report.families)
    json.dumps(p1_report.to_json())


def family(report, c):
    return next(f for f in report.families if f.c == c)


def test_plain_family_closed_form(p1_report):
    fam = family(p1_report, 1)
    for i in range(-6, 7):
        assert fam.P(i) == 1 == Fraction(1) ** (1 - i)
        assert fam.Q(i) == fam.R(i) == fam.S(i) == 0


def test_twisted_family_closed_forms(p1_report):
    fam = family(p1_report, -1)
    c = Fraction(-1)
    R0 = fam.R(0)
    for i in range(-6, 7):
        sign = (-1) ** (i + 1)
        assert fam.P(i) == c ** (1 - i) == sign
        assert fam.Q(i) == sign * (i - 1)
        assert fam.R(i) == sign * (i - 1) * (i - 2)
        assert fam.S(i) == sign * (i - 1) * (i - 2) * (i - 3)
        if i != -1:
            assert fam.Q(i) == Fraction(1, 2) * c ** (1 - i) * (1 - c) * (i - 1)
            assert fam.R(i) == Fraction(1, 6) * c ** (1 - i) * (c - 1) * (5 - 4 * c + (c - 2) * i) * i + c ** (-i) * R0


def test_twisted_family_is_sigma_image(p1_report):
    assert sigma_image_check(family(p1_report, 1), family(p1_report, -1)) == []


def test_family_tables_are_recognized(p1_report, Z):
    for fam in p1_report.families:
        for g in (0, Fraction(2, 3), -4):
            found = recognize(family_to_table(fam, g=g))
            assert found.kind == fam.kind
            assert found.G[0].rows[0][0] == g


@pytest.mark.parametrize("g", [0, 1, Fraction(-1, 2), 7])
def test_plain_family_regenerates_module_table(p1_report, Z, g):
    fam = family(p1_report, 1)
    assert family_to_table(fam, g=g) == table_from_spec(ModuleSpec.plain(Z, [[[g]]]), 4)


def test_fixed_c_infeasible():
    report = solve_p1(4, fixed_c=2)
    assert report.families == [] and report.infeasible == [2]


def test_fixed_c_minus_one_matches_generic(p1_report):
    report = solve_p1(6, fixed_c=-1)
    assert report.families[0].values == family(p1_report, -1).values


def test_log_cites_identities(p1_report):
    assert any("[from [" in line for line in p1_report.log)


def test_nested_bracket_word_evaluates(Z):
    word = Br(Gen(1, 2), Br(Gen(1, 2), Gen(3, 0)))
    ident = Identity("nested", ((Fraction(1), word), (Fraction(-1), word)))
    assert identity_holds(Z, ident)

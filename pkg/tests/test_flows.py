from __future__ import annotations

from fractions import Fraction

import pytest
import sympy

import oracles
from weiljacobi import flows, gji4, sdiff
from weiljacobi.flows import VectorField, NilpotentPoint
from weiljacobi.rng import SplitMix64, stream
from weiljacobi.weil import WeilPoly, cube


def test_flow_of_the_identity_field():
    X = VectorField.of("x1")
    p = flows.flow_apply(X, 1, NilpotentPoint.at((1,), 1))
    D = cube(1)
    assert p.coords == (WeilPoly(D, {0: 1, 1: 1}),)


def test_zero_field_flows_trivially():
    p = NilpotentPoint.at((Fraction(2, 3), 4), 2)
    q = flows.flow_apply(VectorField.zero(2), 2, p)
    assert q == p


def test_repeated_generator_drops_the_square():
    X = VectorField.of("x1**2")
    p = NilpotentPoint.at((1,), 1)
    q = flows.flow_apply(X, 1, flows.flow_apply(X, 1, p))
    # 1 + d + d(1 + d)^2 = 1 + 2d
    assert q.coords[0] == WeilPoly(cube(1), {0: 1, 1: 2})


def test_generator_out_of_range():
    with pytest.raises(IndexError):
        flows.flow_apply(VectorField.of("x1"), 2, NilpotentPoint.at((0,), 1))


def test_degree_bound_is_enforced():
    with pytest.raises(ValueError):
        VectorField(1, (sympy.Symbol("x1") ** 3,), degree=2)


def test_star_composition_example():
    X, Y = VectorField.of("x1"), VectorField.of(1)
    g = flows.star_compose([X, Y], (0,))
    assert g.coords[0] == WeilPoly.gen(cube(2), 2)


def test_single_flow_coefficient():
    X = VectorField.of("x1*x2", "x1 - 3")
    g = flows.star_compose([X], (2, 5))
    assert [c.coeff(1) for c in g.coords] == [10, -1]


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        flows.star_compose([VectorField.of("x1"), VectorField.of("x1", "x2")], (0,))


@pytest.mark.parametrize("seed", range(10))
def test_two_flows_follow_the_taylor_formula(seed):
    rng = stream(seed, 1)
    m = 1 + seed % 3
    X, Y = flows.random_field(rng, m, 3), flows.random_field(rng, m, 3)
    x0 = flows.random_point(rng, m)
    g = flows.star_compose([X, Y], x0)
    xs = flows.coordinates(m)
    sub = {x: sympy.Rational(str(v)) for x, v in zip(xs, x0)}
    F = [p.as_expr() for p in X.F]
    G = [p.as_expr() for p in Y.F]
    for i, c in enumerate(g.coords):
        cross = sum(sympy.diff(G[i], x) * f for x, f in zip(xs, F))
        want = [x0[i], F[i].subs(sub), G[i].subs(sub), cross.subs(sub)]
        assert [c.coeff(k) for k in range(4)] == [Fraction(str(sympy.Rational(w))) for w in want]


def test_order_matters_by_the_bracket():
    rng = SplitMix64(8)
    X, Y = flows.random_field(rng, 2), flows.random_field(rng, 2)
    x0 = flows.random_point(rng, 2)
    a = flows.star_compose([X, Y], x0)
    b = flows.star_compose([Y, X], x0)
    diff = tuple(p.coeff(3) - q.coeff(3) for p, q in zip(a.coords, b.coords))
    assert diff == flows.classical_value(X, Y, x0)


# -- brackets ---------------------------------------------------------------------------------

def test_bracket_example():
    X, Y = VectorField.of("x1"), VectorField.of(1)
    for x0 in (0, 3, Fraction(-1, 2)):
        v = flows.bracket(X, Y, (x0,))
        assert v.linear == (-1,) and v.base == (x0,)
    assert flows.classical_bracket(X, Y).at((7,)) == (-1,)


def test_bracket_with_itself_and_constants():
    rng = SplitMix64(1)
    X = flows.random_field(rng, 3)
    assert flows.bracket(X, X, (1, 2, 3)).is_zero
    C1, C2 = VectorField.of(1, 2, -3), VectorField.of(0, 5, Fraction(1, 2))
    assert flows.bracket(C1, C2, (1, 1, 1)).is_zero
    assert all(not p for p in flows.classical_bracket(X, X).F)


def test_bracket_matches_the_classical_formula():
    for t in range(200):
        rng = stream(2024, t)
        m = 1 + t % 3
        X, Y = flows.random_field(rng, m, 3), flows.random_field(rng, m, 3)
        x0 = flows.random_point(rng, m)
        xs = flows.coordinates(m)
        want = oracles.jacobian_bracket([p.as_expr() for p in X.F], [p.as_expr() for p in Y.F], xs)
        sub = {x: sympy.Rational(str(v)) for x, v in zip(xs, x0)}
        assert flows.bracket(X, Y, x0).linear == tuple(Fraction(str(e.subs(sub))) for e in want), t


def test_classical_bracket_is_bilinear():
    rng = SplitMix64(12)
    X, Y, Z = (flows.random_field(rng, 2) for _ in range(3))
    a, b = 3, Fraction(-2, 5)
    comb = VectorField.of(*(a * p.as_expr() + b * q.as_expr() for p, q in zip(X.F, Y.F)))
    lhs = flows.classical_bracket(comb, Z)
    rx, ry = flows.classical_bracket(X, Z), flows.classical_bracket(Y, Z)
    for l, p, q in zip(lhs.F, rx.F, ry.F):
        assert sympy.expand(l.as_expr() - a * p.as_expr() - b * q.as_expr()) == 0


def nested(fields, x0):
    """[X1, [X2, ... Xk]] through classical brackets, evaluated at x0."""
    inner = fields[-1]
    for X in reversed(fields[:-1]):
        inner = flows.classical_bracket(X, inner)
    return inner.at(x0)


@pytest.mark.parametrize("t", range(12))
def test_triple_bracket_matches_nested_classical(t):
    rng = stream(5, t)
    m = 1 + t % 3
    fs = [flows.random_field(rng, m) for _ in range(3)]
    x0 = flows.random_point(rng, m)
    assert flows.bracket3(*fs, x0).linear == nested(fs, x0)


def test_triple_bracket_with_repeats_and_zeros():
    rng = SplitMix64(3)
    X, Y = flows.random_field(rng, 2), flows.random_field(rng, 2)
    x0 = (1, -2)
    assert flows.bracket3(X, X, Y, x0).linear == nested([X, X, Y], x0)
    Z = VectorField.zero(2)
    assert flows.bracket3(Z, Z, Z, x0).is_zero


@pytest.mark.parametrize("t", range(6))
def test_quadruple_bracket_matches_nested_classical(t):
    rng = stream(6, t)
    m = 1 + t % 3
    fs = [flows.random_field(rng, m) for _ in range(4)]
    x0 = flows.random_point(rng, m)
    assert flows.bracket4(*fs, x0).linear == nested(fs, x0)


@pytest.mark.parametrize("k", range(4))
def test_quadruple_bracket_vanishes_with_a_zero_field(k):
    rng = SplitMix64(40 + k)
    fs = [flows.random_field(rng, 2) for _ in range(4)]
    fs[k] = VectorField.zero(2)
    assert flows.bracket4(*fs, (1, 1)).is_zero


def test_word_permutation_puts_each_field_on_its_own_variable():
    # after relabelling, X_k moves along d_k whatever the word
    X1, X2 = VectorField.of(1, 0), VectorField.of(0, 1)
    g = flows.word_cube((X1, X2), "21", (0, 0))
    D = cube(2)
    assert g.coords == (WeilPoly.gen(D, 1), WeilPoly.gen(D, 2))


# -- identities -------------------------------------------------------------------------------

@pytest.mark.parametrize("identity,k", [("1.1", 2), ("1.2", 2), ("1.3", 3), ("1.4", 3), ("1.5", 4)])
def test_identities_on_random_fields(identity, k):
    for t in range(4):
        rng = stream(9, int(identity[-1]), t)
        m = 1 + t % 3
        fs = [flows.random_field(rng, m) for _ in range(k)]
        assert flows.verify_identity(identity, fs, flows.random_point(rng, m)), t


def test_identity_arity_is_checked():
    with pytest.raises(ValueError):
        flows.verify_identity("1.3", [VectorField.zero(1)] * 2, (0,))
    with pytest.raises(ValueError):
        flows.verify_identity("2.7", [VectorField.zero(1)] * 2, (0,))


def test_antisymmetry_on_random_microsquares():
    for t in range(30):
        g12, g21 = flows.microsquare_pair(stream(13, t), 1 + t % 3)
        assert flows.strong_antisymmetry_sum(g12, g21).is_zero


def test_three_dimensional_identity_on_random_families():
    for t in range(30):
        fam = flows.gji3_family(stream(14, t), 1 + t % 3)
        assert flows.gji3_hypotheses_hold(fam)
        assert flows.gji3_sum(fam).is_zero


def test_three_dimensional_identity_refuses_a_broken_family():
    fam = flows.gji3_family(SplitMix64(2), 1)
    g = fam["132"]
    c = g.coords[0]
    fam["132"] = type(g)(g.source, g.target, (c + WeilPoly.mono(c.obj, (1, 3)),))
    assert not flows.gji3_hypotheses_hold(fam)
    with pytest.raises(sdiff.AgreementError):
        flows.gji3_sum(fam)


def test_flow_family_is_a_model_of_the_four_dimensional_identity():
    rng = SplitMix64(21)
    fs = [flows.random_field(rng, 2) for _ in range(4)]
    x0 = flows.random_point(rng, 2)
    fam = gji4.ModelFamily(flows.flow_family(fs, x0, gji4.WORDS), seed=21, m=2)
    gji4.check_hypotheses(fam)
    terms = gji4.model_terms(fam)
    assert terms[0] == flows.bracket4(*fs, x0)
    assert sdiff.tangent_add(terms).is_zero
    assert tuple(flows.EVEN_WORDS) == tuple(gji4.term_words(k)[0] for k in range(12))

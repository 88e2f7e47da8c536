from __future__ import annotations

import itertools
import json

import pytest
import sympy

import oracles
from weiljacobi import colimit, gji4, serial
from weiljacobi.colimit import (
    Diagram, Edge, Leg, check_quasi_colimit, compatibility_dim, mediate, random_compatible_family,
)
from weiljacobi.rng import SplitMix64
from weiljacobi.weil import PolyMap, WeilPoly, cube, inclusion, monomial, pullback, small_object


def brute_force_dims(d: Diagram):
    """Rank of the restriction and dimension of the compatible subspace from
    sympy matrices built by substitution."""
    cols = oracles.admissible(d.apex)
    leaf_rows = [(a, S) for a, leg in enumerate(d.legs) for S in oracles.admissible(leg.leaf)]
    A = sympy.zeros(len(leaf_rows), len(cols))
    for j, S in enumerate(cols):
        theta = WeilPoly.mono(d.apex, S) if S else WeilPoly.const(d.apex, 1)
        for i, (a, T) in enumerate(leaf_rows):
            A[i, j] = sympy.Rational(str(oracles.pullback(theta, d.legs[a].f).get(frozenset(T), 0)))
    # compatibility: for each edge, pulled-back families agree on r
    C = []
    for e in d.edges:
        for T in oracles.admissible(e.r):
            row = [0] * len(leaf_rows)
            for i, (a, S) in enumerate(leaf_rows):
                for side, g in ((e.a, e.g), (e.b, e.h)):
                    if a == side:
                        mono = WeilPoly.mono(d.legs[a].leaf, S) if S else WeilPoly.const(d.legs[a].leaf, 1)
                        v = oracles.pullback(mono, g).get(frozenset(T), 0)
                        row[i] += v if side == e.a else -v
            C.append(row)
    Cm = sympy.Matrix(C) if C else sympy.zeros(0, len(leaf_rows))
    compat = len(leaf_rows) - (Cm.rank() if C else 0)
    return A.rank(), compat, len(cols)


LEMMAS = ["lemma2.1", "lemma2.2:0", "lemma2.2:1", "lemma2.2:2", "lemma2.3"] + [
    f"lemma2.4:{n},{a},{b}" for n, a, b in itertools.product(range(3), repeat=3)]


@pytest.mark.parametrize("name", LEMMAS)
def test_lemmas_are_quasi_colimits(name):
    rep = check_quasi_colimit(colimit.builtin(name))
    assert rep.exists_for_all and rep.unique, rep


@pytest.mark.parametrize("name", ["lemma2.1", "lemma2.2:1", "lemma2.3", "lemma2.4:1,1,2", "lemma2.4:1,1,1"])
def test_dimensions_match_brute_force(name):
    d = colimit.builtin(name)
    rank, compat, apex = brute_force_dims(d)
    rep = check_quasi_colimit(d)
    assert (rep.rank, rep.compat_dim, rep.apex_dim) == (rank, compat, apex)


def test_small_compat_counts():
    assert compatibility_dim(colimit.lemma2_1()) == 5
    assert compatibility_dim(colimit.lemma2_3()) == 3


@pytest.mark.parametrize("name", ["lemma2.1", "lemma2.2:2", "lemma2.3", "lemma2.4:1,1,2", "lemma2.4:2,1,1"])
def test_mediate_round_trips(name):
    d = colimit.builtin(name)
    rng = SplitMix64(11)
    for _ in range(20):
        fam = random_compatible_family(d, rng)
        theta = mediate(d, fam)
        assert colimit.restrict_family(d, theta) == fam
        coeffs = {m: rng.randint(-4, 4) for m in d.apex.basis}
        theta = WeilPoly(d.apex, coeffs)
        assert mediate(d, colimit.restrict_family(d, theta)) == theta


def test_zero_family_glues_to_zero():
    d = colimit.lemma2_1()
    zero = [WeilPoly(leg.leaf, {}) for leg in d.legs]
    assert not mediate(d, zero)


def test_incompatible_family_names_the_edge():
    d = colimit.lemma2_1()
    leaf = d.legs[0].leaf
    fam = [WeilPoly.gen(leaf, 1), WeilPoly(leaf, {})]
    with pytest.raises(colimit.IncompatibleFamily) as exc:
        mediate(d, fam)
    assert exc.value.edge.name == "bottom"


def test_unsolvable_family_is_reported():
    # two copies of D glued over nothing into D: families must agree but
    # there is no edge forcing it
    D = cube(1)
    legs = (Leg("a", D, PolyMap.identity(D)), Leg("b", D, PolyMap.identity(D)))
    d = Diagram("split", D, legs, ())
    with pytest.raises(colimit.UnsolvableFamily):
        mediate(d, [WeilPoly.gen(D, 1), WeilPoly(D, {})])
    rep = check_quasi_colimit(d)
    assert not rep.exists_for_all


def test_non_commuting_edge_is_rejected():
    D2 = cube(2)
    legs = (Leg("a", D2, PolyMap.identity(D2)), Leg("b", D2, PolyMap.identity(D2)))
    sw = PolyMap(D2, D2, (WeilPoly.gen(D2, 2), WeilPoly.gen(D2, 1)))
    d = Diagram("bad", D2, legs, (Edge("swap", D2, 0, 1, PolyMap.identity(D2), sw),))
    with pytest.raises(colimit.NonCommutingEdge):
        d.validate()


def test_quartic_slot_on_one_leg_glues_to_one_generator():
    d = gji4.theorem_3_1_diagram()
    fam = []
    for leg in d.legs:
        terms = {monomial((1, 2, 3, 4)): 1} if leg.name.endswith("1243") else {}
        fam.append(WeilPoly(leg.leaf, terms))
    theta = mediate(d, fam)
    assert theta == WeilPoly.gen(d.apex, 31)


def test_diagram_file_round_trip(tmp_path):
    d = colimit.lemma2_4(1, 1, 2)
    data = serial.diagram_to_json(d)
    back = serial.diagram_from_json(json.loads(json.dumps(data)))
    assert [l.f for l in back.legs] == [l.f for l in d.legs]
    assert check_quasi_colimit(back).quasi_colimit


def test_sample_diagram_edges_use_inclusions():
    d = colimit.lemma2_3()
    e = d.edges[0]
    assert e.g == inclusion(e.r, d.legs[0].leaf)
    assert pullback(WeilPoly.gen(d.apex, 1), d.legs[1].f) == WeilPoly.gen(d.legs[1].leaf, 1)
    assert small_object(2, zeroed=[2]) == d.legs[1].leaf

"""Independent reference computations for the tests.

Everything here goes through sympy expressions and a brute-force reduction,
sharing no code with the package beyond reading its data classes.
"""

from __future__ import annotations

import itertools
import json
from fractions import Fraction
from pathlib import Path

import sympy

from weiljacobi.weil import CoordinateSpace, PolyMap, WeilPoly, monomial

GOLDEN = Path(__file__).parent / "golden"


def dsyms(n: int):
    return sympy.symbols(f"d1:{n + 1}") if n else ()


def to_expr(p: WeilPoly):
    ds = dsyms(p.obj.n)
    out = sympy.Integer(0)
    for m, c in p.terms.items():
        term = sympy.Rational(Fraction(c).numerator, Fraction(c).denominator)
        for i in range(p.obj.n):
            if m >> i & 1:
                term *= ds[i]
        out += term
    return out


def reduce_expr(expr, obj) -> dict:
    """Expand and drop every monomial that vanishes on ``obj``; returns
    {frozenset of indices: Fraction}."""
    n = obj.n
    ds = dsyms(n)
    expr = sympy.expand(expr)
    if expr == 0:
        return {}
    poly = sympy.Poly(expr, *ds) if n else None
    if poly is None:
        return {frozenset(): Fraction(str(expr))} if expr != 0 else {}
    out = {}
    bad_pairs = {frozenset(p) for p in obj.forbidden}
    for exps, c in poly.terms():
        if any(e > 1 for e in exps):
            continue
        S = frozenset(i + 1 for i, e in enumerate(exps) if e)
        if S & set(obj.zeroed):
            continue
        if any(pair <= S for pair in bad_pairs):
            continue
        out[S] = out.get(S, 0) + Fraction(str(c))
    return {S: c for S, c in out.items() if c}


def as_dict(p: WeilPoly) -> dict:
    return {frozenset(i + 1 for i in range(p.obj.n) if m >> i & 1): Fraction(c) for m, c in p.terms.items()}


def pullback(p: WeilPoly, F: PolyMap) -> dict:
    ds = dsyms(p.obj.n)
    sub = {ds[i]: to_expr(F.coords[i]) for i in range(p.obj.n)}
    return reduce_expr(to_expr(p).xreplace(sub), F.source)


def product(p: WeilPoly, q: WeilPoly) -> dict:
    return reduce_expr(to_expr(p) * to_expr(q), p.obj)


def subsets(n):
    for r in range(n + 1):
        yield from itertools.combinations(range(1, n + 1), r)


def admissible(obj):
    bad = [set(p) for p in obj.forbidden]
    return [S for S in subsets(obj.n)
            if not set(S) & set(obj.zeroed) and not any(b <= set(S) for b in bad)]


def strong_difference(g1: PolyMap, g2: PolyMap) -> list[dict]:
    """Solve for the glued map on D^{n+3}{(n+1,n+3),(n+2,n+3)} by linear
    algebra over unknown coefficients, then restrict to (d1..dn,0,0,d)."""
    k = g1.arity
    n = k - 2
    apex = [S for S in subsets(n + 3) if not ({n + 1, n + 3} <= set(S) or {n + 2, n + 3} <= set(S))]
    ds = dsyms(n + 3)
    src = dsyms(k)
    out = []
    for c1, c2 in zip(g1.coords, g2.coords):
        unknowns = sympy.symbols(f"u0:{len(apex)}")
        N = sum(u * sympy.prod([ds[i - 1] for i in S]) for u, S in zip(unknowns, apex))
        leg1 = {ds[i]: src[i] for i in range(k)} | {ds[n + 2]: src[n] * src[n + 1]}
        leg2 = {ds[i]: src[i] for i in range(k)} | {ds[n + 2]: 0}
        eqs = []
        for leg, c in ((leg1, c1), (leg2, c2)):
            lhs = sympy.Poly(sympy.expand(N.xreplace(leg)), *src)
            want = as_dict(c)
            seen = set()
            for exps, coef in lhs.terms():
                if any(e > 1 for e in exps):
                    continue
                S = frozenset(i + 1 for i, e in enumerate(exps) if e)
                seen.add(S)
                eqs.append(coef - sympy.Rational(str(want.get(S, 0))))
            for S, v in want.items():
                if S not in seen:
                    eqs.append(-sympy.Rational(str(v)))
        sol = sympy.solve(eqs, unknowns, dict=True)
        assert len(sol) == 1, "glued map not unique"
        Nval = N.xreplace(sol[0])
        assert not Nval.free_symbols & set(unknowns), "glued map underdetermined"
        tail = {ds[i]: sympy.Symbol(f"d{i + 1}") for i in range(n)}
        tail |= {ds[n]: 0, ds[n + 1]: 0, ds[n + 2]: sympy.Symbol(f"d{n + 1}")}
        restricted = sympy.expand(Nval.xreplace(tail))
        out.append(restricted)
    return out


def expr_dict(expr, n) -> dict:
    if n == 0:
        return {frozenset(): Fraction(str(expr))} if expr != 0 else {}
    ds = dsyms(n)
    poly = sympy.Poly(sympy.expand(expr), *ds)
    return {frozenset(i + 1 for i, e in enumerate(exps) if e): Fraction(str(c))
            for exps, c in poly.terms() if c}


def jacobian_bracket(F, G, xs):
    """Classical bracket (J G) F - (J F) G with sympy matrices."""
    Fm, Gm = sympy.Matrix(F), sympy.Matrix(G)
    return list(sympy.expand(Gm.jacobian(xs) * Fm - Fm.jacobian(xs) * Gm))


# -- goldens transcribed from the printed equations -----------------------------------

def load_golden(name: str):
    return json.loads((GOLDEN / name).read_text(encoding="utf-8"))


def golden_map(tag: str, arity: int, target) -> PolyMap:
    """A displayed equation as a map from D^arity; "d" stands for d1 at arity 1."""
    from weiljacobi.weil import cube
    entry = load_golden("equations.json")[tag]
    src = cube(arity)
    coords = []
    for pos in range(1, target.n + 1):
        terms = {}
        for key, c in entry["vec"].get(str(pos), {}).items():
            idx = (1,) if key == "d" else tuple(int(x) for x in key.split(","))
            terms[monomial(idx)] = Fraction(c)
        coords.append(WeilPoly(src, terms))
    return PolyMap(src, target, tuple(coords))


def golden_vector(tag: str) -> dict:
    entry = load_golden("equations.json")[tag]
    return {int(p): Fraction(v["d"]) for p, v in entry["vec"].items() if "d" in v}


def space(m: int) -> CoordinateSpace:
    return CoordinateSpace(m)

"""Polynomial vector fields on Q^m and their brackets through strong differences.

A field with components F is the flow d -> (x -> x + d F(x)); because d^2 = 0
this is exact, so a composite of flows evaluated at a rational point is a
finite polynomial in the nilpotent parameters.  Brackets are then strong
differences of such composites, and the classical Jacobian formula serves as
an independent check.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

import sympy

from . import sdiff
from .sdiff import TangentVector
from .weil import CoordinateSpace, Permutation, PolyMap, WeilPoly, cube, permute, small_object


def _rat(c) -> int | Fraction:
    c = sympy.Rational(c)
    return int(c.p) if c.q == 1 else Fraction(int(c.p), int(c.q))


def coordinates(m: int) -> tuple:
    return sympy.symbols(f"x1:{m + 1}")


@dataclass(frozen=True)
class VectorField:
    """Components are sympy ``Poly`` objects over QQ in x1..xm."""

    m: int
    F: tuple
    degree: int = 2

    def __post_init__(self):
        xs = coordinates(self.m)
        polys = tuple(sympy.Poly(f, *xs, domain="QQ") for f in self.F)
        if len(polys) != self.m:
            raise ValueError(f"{len(polys)} components for a field on Q^{self.m}")
        top = max((p.total_degree() for p in polys), default=0)
        if top > self.degree:
            raise ValueError(f"component of degree {top} exceeds the bound {self.degree}")
        object.__setattr__(self, "F", polys)

    @classmethod
    def of(cls, *components, degree: int | None = None) -> VectorField:
        m = len(components)
        xs = coordinates(m)
        polys = [sympy.Poly(sympy.sympify(c), *xs, domain="QQ") for c in components]
        deg = max((p.total_degree() for p in polys), default=0)
        return cls(m, tuple(polys), deg if degree is None else degree)

    @classmethod
    def zero(cls, m: int) -> VectorField:
        return cls.of(*([0] * m))

    def at(self, x0: Sequence) -> tuple:
        xs = coordinates(self.m)
        sub = dict(zip(xs, (sympy.Rational(_rat_sym(v)) for v in x0)))
        return tuple(_rat(p.as_expr().subs(sub)) for p in self.F)

    def __str__(self):
        return "(" + ", ".join(str(p.as_expr()) for p in self.F) + ")"


def _rat_sym(v):
    v = Fraction(v)
    return sympy.Rational(v.numerator, v.denominator)


@dataclass(frozen=True)
class NilpotentPoint:
    """A point of Q^m displaced by nilpotent amounts: one Weil polynomial per
    coordinate over the same cube."""

    coords: tuple

    @property
    def obj(self):
        return self.coords[0].obj

    @property
    def base(self) -> tuple:
        return tuple(c.constant for c in self.coords)

    @classmethod
    def at(cls, x0: Sequence, n: int) -> NilpotentPoint:
        D = cube(n)
        return cls(tuple(WeilPoly.const(D, x) for x in x0))


def evaluate(p, point: NilpotentPoint) -> WeilPoly:
    """Substitute the coordinates of ``point`` into the polynomial ``p``."""
    obj = point.obj
    powers = [[WeilPoly.const(obj, 1)] for _ in point.coords]
    out = WeilPoly.const(obj, 0)
    for exps, c in p.terms():
        term = WeilPoly.const(obj, _rat(c))
        for i, e in enumerate(exps):
            pw = powers[i]
            while len(pw) <= e:
                pw.append(pw[-1] * point.coords[i])
            if e:
                term = term * pw[e]
        out = out + term
    return out


def flow_apply(X: VectorField, k: int, point: NilpotentPoint) -> NilpotentPoint:
    """point -> point + d_k F(point)."""
    if len(point.coords) != X.m:
        raise ValueError(f"field on Q^{X.m} applied to a point of Q^{len(point.coords)}")
    n = point.obj.n
    if not 1 <= k <= n:
        raise IndexError(f"generator d{k} outside D^{n}")
    dk = WeilPoly.gen(point.obj, k)
    return NilpotentPoint(tuple(c + dk * evaluate(f, point) for c, f in zip(point.coords, X.F)))


def star_compose(fields: Sequence[VectorField], x0: Sequence) -> PolyMap:
    """``fields = [X_1, ..., X_n]``: the microcube (d_1..d_n) -> (X_n)_{d_n} o ... o (X_1)_{d_1} (x0)."""
    if not fields:
        raise ValueError("need at least one field")
    m = fields[0].m
    if any(X.m != m for X in fields) or len(x0) != m:
        raise ValueError("fields and basepoint live in different dimensions")
    point = NilpotentPoint.at(x0, len(fields))
    for k, X in enumerate(fields, 1):
        point = flow_apply(X, k, point)
    return PolyMap(point.obj, CoordinateSpace(m), point.coords)


def word_permutation(word: str) -> Permutation:
    """The relabelling attached to a word: its inverse, so that after it the
    field X_k always moves along d_k."""
    return Permutation.word(word).inverse()


def word_cube(fields: Sequence[VectorField], word: str, x0: Sequence, cache: dict | None = None) -> PolyMap:
    """(X_{w_n} * ... * X_{w_1})^{sigma_w} for the word w = w_1..w_n.

    ``cache`` maps an ordered tuple of fields to its composite, so callers that
    reuse one dict across several brackets build each composite once.
    """
    ordered = tuple(fields[int(c) - 1] for c in word)
    key = (ordered, tuple(x0))
    if cache is not None and key in cache:
        g = cache[key]
    else:
        g = star_compose(ordered, x0)
        if cache is not None:
            cache[key] = g
    if word != "".join(sorted(word)):
        g = permute(g, word_permutation(word))
    return g


def bracket(X1: VectorField, X2: VectorField, x0: Sequence) -> TangentVector:
    """X2 * X1 minus the swapped X1 * X2, as a strong difference."""
    g = word_cube((X1, X2), "12", x0)
    h = word_cube((X1, X2), "21", x0)
    return TangentVector.of(sdiff.strong_diff(g, h, label="bracket"))


def bracket3(X1, X2, X3, x0: Sequence, cache: dict | None = None) -> TangentVector:
    fs = (X1, X2, X3)
    g = {w: word_cube(fs, w, x0, cache) for w in ("123", "132", "231", "321")}
    left = sdiff.strong_diff_sub(g["123"], g["132"], (1,), label="123/132")
    right = sdiff.strong_diff_sub(g["231"], g["321"], (1,), label="231/321")
    return TangentVector.of(sdiff.strong_diff(left, right, label="outer"))


BRACKET4_WORDS = ("1234", "1243", "1342", "1432", "2341", "2431", "3421", "4321")


def bracket4(X1, X2, X3, X4, x0: Sequence, cache: dict | None = None) -> TangentVector:
    fs = (X1, X2, X3, X4)
    g = [word_cube(fs, w, x0, cache) for w in BRACKET4_WORDS]
    inner = [sdiff.strong_diff_sub(g[k], g[k + 1], (1, 2), label=f"{BRACKET4_WORDS[k]}/{BRACKET4_WORDS[k + 1]}")
             for k in range(0, 8, 2)]
    middle = [sdiff.strong_diff_sub(inner[k], inner[k + 1], (1,), label="middle") for k in (0, 2)]
    return TangentVector.of(sdiff.strong_diff(middle[0], middle[1], label="outer"))


# -- the classical formula ------------------------------------------------------------------

def jacobian_apply(F: Sequence, G: Sequence, xs) -> list:
    """(J G) F as a list of polys."""
    return [sum((g.diff(x) * f for x, f in zip(xs, F)), sympy.Poly(0, *xs, domain="QQ")) for g in G]


def classical_bracket(X: VectorField, Y: VectorField) -> VectorField:
    """(J G) F - (J F) G for X = F, Y = G."""
    if X.m != Y.m:
        raise ValueError("fields on different spaces")
    xs = coordinates(X.m)
    a = jacobian_apply(X.F, Y.F, xs)
    b = jacobian_apply(Y.F, X.F, xs)
    comps = tuple(p - q for p, q in zip(a, b))
    deg = max((p.total_degree() for p in comps), default=0)
    return VectorField(X.m, comps, max(deg, 0))


def classical_value(X: VectorField, Y: VectorField, x0: Sequence) -> tuple:
    return classical_bracket(X, Y).at(x0)


# -- random data -------------------------------------------------------------------------------

def random_field(rng, m: int, degree: int = 2, lo: int = -5, hi: int = 5) -> VectorField:
    xs = coordinates(m)
    exps = [e for e in product(range(degree + 1), repeat=m) if sum(e) <= degree]
    comps = []
    for _ in range(m):
        expr = sympy.Integer(0)
        for e in exps:
            c = rng.randint(lo, hi)
            if c:
                expr += c * sympy.prod([x ** k for x, k in zip(xs, e)])
        comps.append(sympy.Poly(expr, *xs, domain="QQ"))
    return VectorField(m, tuple(comps), degree)


def random_point(rng, m: int) -> tuple:
    return tuple(as_fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(m))


def as_fraction(p: int, q: int) -> int | Fraction:
    f = Fraction(p, q)
    return int(f) if f.denominator == 1 else f


# -- identities --------------------------------------------------------------------------------

EVEN_WORDS = ("1234", "1342", "1423", "2143", "2314", "2431",
              "3124", "3241", "3412", "4132", "4213", "4321")
CYCLIC_WORDS = ("123", "231", "312")


def antisymmetry_sum(X1, X2, x0) -> TangentVector:
    return sdiff.tangent_add([bracket(X1, X2, x0), bracket(X2, X1, x0)])


def jacobi_sum(fields, x0) -> TangentVector:
    cache: dict = {}
    terms = []
    for w in CYCLIC_WORDS:
        a, b, c = (fields[int(ch) - 1] for ch in w)
        terms.append(bracket3(a, b, c, x0, cache))
    return sdiff.tangent_add(terms)


def jacobi4_sum(fields, x0) -> TangentVector:
    cache: dict = {}
    terms = []
    for w in EVEN_WORDS:
        a, b, c, d = (fields[int(ch) - 1] for ch in w)
        terms.append(bracket4(a, b, c, d, x0, cache))
    return sdiff.tangent_add(terms)


def microsquare_pair(rng, m: int, lo: int = -5, hi: int = 5):
    """Two random Q^m microsquares agreeing on D(2)."""
    return sdiff.constrained_family(2, 2, [(0, 1, small_object(2, [(1, 2)]))], m, rng, lo, hi)


def strong_antisymmetry_sum(g12: PolyMap, g21: PolyMap) -> TangentVector:
    a = TangentVector.of(sdiff.strong_diff(g12, g21))
    b = TangentVector.of(sdiff.strong_diff(g21, g12))
    return sdiff.tangent_add([a, b])


GJI3_WORDS = ("123", "132", "213", "231", "312", "321")
GJI3_HYPOTHESES = (
    ("123", "132", (2, 3)), ("231", "321", (2, 3)),
    ("231", "213", (1, 3)), ("312", "132", (1, 3)),
    ("312", "321", (1, 2)), ("123", "213", (1, 2)),
)
# (subscript, first pair, second pair) for the three summands
GJI3_TERMS = (
    (1, ("123", "132"), ("231", "321")),
    (2, ("231", "213"), ("312", "132")),
    (3, ("312", "321"), ("123", "213")),
)


def gji3_family(rng, m: int, lo: int = -5, hi: int = 5) -> dict:
    idx = {w: k for k, w in enumerate(GJI3_WORDS)}
    cons = [(idx[a], idx[b], small_object(3, [pair])) for a, b, pair in GJI3_HYPOTHESES]
    return dict(zip(GJI3_WORDS, sdiff.constrained_family(6, 3, cons, m, rng, lo, hi)))


def gji3_hypotheses_hold(gammas: dict) -> bool:
    return all(sdiff.agrees_on_pair(gammas[a], gammas[b], pair) for a, b, pair in GJI3_HYPOTHESES)


def gji3_sum(gammas: dict) -> TangentVector:
    for a, b, pair in GJI3_HYPOTHESES:
        sdiff.require_agreement(gammas[a], gammas[b], pair, label=f"hypothesis {a}/{b}")
    terms = []
    for s, (a, b), (c, e) in GJI3_TERMS:
        left = sdiff.strong_diff_sub(gammas[a], gammas[b], (s,))
        right = sdiff.strong_diff_sub(gammas[c], gammas[e], (s,))
        terms.append(TangentVector.of(sdiff.strong_diff(left, right)))
    return sdiff.tangent_add(terms)


IDENTITIES = ("1.1", "1.2", "1.3", "1.4", "1.5")


def verify_identity(identity: str, fields: Sequence[VectorField], x0: Sequence) -> bool:
    """Exact zero test of the tangent sum behind an identity on vector fields.

    Identities ``1.2`` and ``1.4`` concern arbitrary microcubes; here they are checked on
    the composites built from the given fields (random microcube families are
    covered by :func:`strong_antisymmetry_sum` and :func:`gji3_sum`).
    """
    need = {"1.1": 2, "1.2": 2, "1.3": 3, "1.4": 3, "1.5": 4}
    if identity not in need:
        raise ValueError(f"unknown identity {identity!r}")
    if len(fields) != need[identity]:
        raise ValueError(f"identity {identity} takes {need[identity]} fields, got {len(fields)}")
    if identity == "1.1":
        return antisymmetry_sum(*fields, x0).is_zero
    if identity == "1.2":
        return strong_antisymmetry_sum(word_cube(fields, "12", x0), word_cube(fields, "21", x0)).is_zero
    if identity == "1.3":
        return jacobi_sum(fields, x0).is_zero
    if identity == "1.4":
        return gji3_sum({w: word_cube(fields, w, x0) for w in GJI3_WORDS}).is_zero
    return jacobi4_sum(fields, x0).is_zero


def flow_family(fields: Sequence[VectorField], x0: Sequence, words: Sequence[str]) -> dict:
    """The 24 (or any listed) word composites of four fields, as a model family."""
    cache: dict = {}
    return {w: word_cube(fields, w, x0, cache) for w in words}

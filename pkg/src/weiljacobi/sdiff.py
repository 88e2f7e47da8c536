"""Strong differences of microcubes.

A microcube of arity n is a PolyMap from the full cube D^n into either a
small object (the universal route) or Q^m (the coordinate model).  Two
microcubes of arity n+2 that agree off the d_{n+1}d_{n+2} slot glue into a
single map on D^{n+3}{(n+1,n+3),(n+2,n+3)}; restricting that glued map to
(d_1..d_n, 0, 0, d) gives their strong difference, of arity n+1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from . import colimit
from .weil import (
    CoordinateSpace, Permutation, PolyMap, SmallObject, WeilPoly, as_rational, compose,
    cube, monomial, monomial_str, permute, polymap_well_defined, small_object,
)


class AgreementError(ValueError):
    """Two microcubes fail to agree where a strong difference needs them to."""

    def __init__(self, pair, coord: int, mono: int, left, right, label: str = ""):
        self.pair, self.coord, self.mono = pair, coord, mono
        where = f" ({label})" if label else ""
        super().__init__(
            f"microcubes disagree off the pair {tuple(pair)}{where}: coordinate {coord}, "
            f"slot {monomial_str(mono)}: {left} vs {right}")


class MediatorError(ValueError):
    pass


def _check_shape(g1: PolyMap, g2: PolyMap) -> None:
    if g1.source != g2.source or g1.target != g2.target:
        raise ValueError(f"shape mismatch: {g1.source}->{g1.target} vs {g2.source}->{g2.target}")
    if g1.source != cube(g1.source.n):
        raise ValueError(f"microcubes live on full cubes, got {g1.source}")


def disagreement(g1: PolyMap, g2: PolyMap, pair) -> tuple[int, int] | None:
    """First (coordinate, monomial) where the two differ off the pair product."""
    _check_shape(g1, g2)
    both = monomial(pair)
    for k, (p, q) in enumerate(zip(g1.coords, g2.coords), 1):
        if p.terms == q.terms:
            continue
        for m in sorted(set(p.terms) | set(q.terms)):
            if m & both != both and p.coeff(m) != q.coeff(m):
                return k, m
    return None


def agrees_on_pair(g1: PolyMap, g2: PolyMap, pair) -> bool:
    return disagreement(g1, g2, pair) is None


def agrees_on(g1: PolyMap, g2: PolyMap, sub: SmallObject) -> bool:
    """Equality of the restrictions to a strengthening of the cube."""
    _check_shape(g1, g2)
    return all(WeilPoly(sub, p.terms) == WeilPoly(sub, q.terms)
               for p, q in zip(g1.coords, g2.coords))


def require_agreement(g1, g2, pair, label=""):
    bad = disagreement(g1, g2, pair)
    if bad is not None:
        k, m = bad
        raise AgreementError(pair, k, m, g1.coords[k - 1].coeff(m), g2.coords[k - 1].coeff(m), label)


# -- the glued map ---------------------------------------------------------------

def mediator_object(n: int) -> SmallObject:
    return small_object(n + 3, [(n + 1, n + 3), (n + 2, n + 3)])


def mediator(g1: PolyMap, g2: PolyMap, label: str = "") -> PolyMap:
    """The unique map N on D^{n+3}{(n+1,n+3),(n+2,n+3)} with N.j1 = g1, N.j2 = g2.

    Per coordinate N = g2 + sum_T (a1 - a2)_{T+{n+1,n+2}} d^T d_{n+3}.  For a
    small-object target the glued map must itself be well defined.
    """
    _check_shape(g1, g2)
    n = g1.arity - 2
    if n < 0:
        raise ValueError("strong differences need arity at least 2")
    require_agreement(g1, g2, (n + 1, n + 2), label)
    apex = mediator_object(n)
    top = monomial((n + 1, n + 2))
    new = 1 << (n + 2)
    coords = []
    for p, q in zip(g1.coords, g2.coords):
        terms = dict(q.terms)
        for m in set(p.terms) | set(q.terms):
            if m & top == top:
                diff = p.coeff(m) - q.coeff(m)
                if diff:
                    terms[(m & ~top) | new] = diff
        coords.append(WeilPoly(apex, terms))
    N = PolyMap(apex, g1.target, tuple(coords))
    if isinstance(g1.target, SmallObject):
        chk = polymap_well_defined(N)
        if not chk:
            raise MediatorError(f"glued map is not well defined into {g1.target}: {chk.witness}")
    return N


def mediator_certificate(g1: PolyMap, g2: PolyMap, N: PolyMap) -> bool:
    """Re-substitute: N.j1 == g1 and N.j2 == g2."""
    n = g1.arity - 2
    j1, j2 = colimit.mediator_injections(n)
    return compose(N, j1) == g1 and compose(N, j2) == g2


def _tail(n: int) -> PolyMap:
    # (d_1..d_n, d) -> (d_1..d_n, 0, 0, d)
    src = cube(n + 1)
    gens = [WeilPoly.gen(src, i) for i in range(1, n + 1)]
    z = WeilPoly(src, {})
    return PolyMap(src, mediator_object(n), tuple(gens + [z, z, WeilPoly.gen(src, n + 1)]))


def restrict_mediator(N: PolyMap) -> PolyMap:
    return compose(N, _tail(N.source.n - 3))


def strong_diff(g1: PolyMap, g2: PolyMap, route: str = "closed", label: str = "") -> PolyMap:
    """g1 -. g2 on the last two variables; the new variable comes last."""
    if route == "mediator":
        return restrict_mediator(mediator(g1, g2, label))
    if route != "closed":
        raise ValueError(f"unknown route {route!r}")
    _check_shape(g1, g2)
    n = g1.arity - 2
    if n < 0:
        raise ValueError("strong differences need arity at least 2")
    require_agreement(g1, g2, (n + 1, n + 2), label)
    src = cube(n + 1)
    low = (1 << n) - 1
    top = monomial((n + 1, n + 2))
    new = 1 << n
    coords = []
    for p, q in zip(g1.coords, g2.coords):
        terms = {}
        for m in set(p.terms) | set(q.terms):
            if not m & ~low:
                terms[m] = p.coeff(m)
            elif m & top == top:
                diff = p.coeff(m) - q.coeff(m)
                if diff:
                    terms[(m & low) | new] = diff
        coords.append(WeilPoly(src, terms))
    return PolyMap(src, g1.target, tuple(coords))


def subscript_permutation(subscript: Sequence[int], arity: int) -> Permutation:
    sub = [int(x) for x in subscript]
    if len(sub) != arity - 2:
        raise ValueError(f"subscript {sub} does not fit arity {arity}")
    if len(set(sub)) != len(sub) or any(not 1 <= s <= arity for s in sub):
        raise ValueError(f"subscript {sub} must list distinct indices in 1..{arity}")
    rest = [i for i in range(1, arity + 1) if i not in sub]
    return Permutation(tuple(sub + rest))


def strong_diff_sub(g1: PolyMap, g2: PolyMap, subscript: Sequence[int],
                    route: str = "closed", label: str = "", swap_tail: bool = False) -> PolyMap:
    """g1 -._{s_1..s_n} g2 = g1^sigma -. g2^sigma, with sigma(1..n) = subscript
    and the remaining two images in ascending order (descending if
    ``swap_tail``; the result does not depend on it)."""
    sigma = subscript_permutation(subscript, g1.arity)
    if swap_tail:
        im = list(sigma.images)
        im[-2], im[-1] = im[-1], im[-2]
        sigma = Permutation(tuple(im))
    return strong_diff(permute(g1, sigma), permute(g2, sigma), route, label)


# -- tangent vectors ---------------------------------------------------------------

@dataclass(frozen=True)
class TangentVector:
    """d -> base + d * linear, one entry per target coordinate."""

    base: tuple
    linear: tuple

    def __post_init__(self):
        object.__setattr__(self, "base", tuple(as_rational(x) for x in self.base))
        object.__setattr__(self, "linear", tuple(as_rational(x) for x in self.linear))
        if len(self.base) != len(self.linear):
            raise ValueError("base and linear part have different lengths")

    @classmethod
    def of(cls, g: PolyMap) -> TangentVector:
        if g.arity != 1:
            raise ValueError(f"tangent vectors come from arity-1 microcubes, got arity {g.arity}")
        return cls(tuple(c.coeff(0) for c in g.coords), tuple(c.coeff(1) for c in g.coords))

    @property
    def is_zero(self) -> bool:
        return not any(self.linear)

    def __neg__(self) -> TangentVector:
        return TangentVector(self.base, tuple(-x for x in self.linear))

    def sparse(self) -> dict[int, object]:
        return {k: v for k, v in enumerate(self.linear, 1) if v}

    def __str__(self):
        body = ", ".join(f"{k}: {v}d" for k, v in self.sparse().items())
        return "{" + body + "}"


class BaseMismatch(ValueError):
    pass


def tangent_add(ts: Sequence[TangentVector]) -> TangentVector:
    if not ts:
        raise ValueError("nothing to add")
    base = ts[0].base
    total = list(ts[0].linear)
    for t in ts[1:]:
        if t.base != base:
            raise BaseMismatch(f"tangent vectors at different points: {base} vs {t.base}")
        total = [x + y for x, y in zip(total, t.linear)]
    return TangentVector(base, tuple(total))


def tangent_add_via_square(t1: TangentVector, t2: TangentVector) -> TangentVector:
    """Binary sum through the D(2) gluing: per coordinate glue the two
    tangents into a function on D(2), then restrict along the diagonal."""
    if t1.base != t2.base:
        raise BaseMismatch(f"tangent vectors at different points: {t1.base} vs {t2.base}")
    diagram = colimit.lemma2_3()
    apex = diagram.apex
    left, right = (leg.leaf for leg in diagram.legs)  # d1 = 0, d2 = 0
    D = cube(1)
    diag = PolyMap(D, apex, (WeilPoly.gen(D, 1), WeilPoly.gen(D, 1)))
    out = []
    for b, v1, v2 in zip(t1.base, t1.linear, t2.linear):
        fam = [WeilPoly(left, {0: b, 0b10: v2}), WeilPoly(right, {0: b, 0b01: v1})]
        glued = colimit.mediate(diagram, fam)
        out.append(compose(PolyMap(apex, CoordinateSpace(1), (glued,)), diag).coords[0].coeff(1))
    return TangentVector(t1.base, tuple(out))


# -- nested differences ---------------------------------------------------------------

@dataclass(frozen=True)
class NestResult:
    ok: bool
    witness: str | None = None
    result: PolyMap | None = None

    def __bool__(self):
        return self.ok


def _pairs_hypotheses(count: int):
    """Restriction hypotheses of the nesting statement for 4 or 8 microcubes."""
    hyp = [(0, 1, [(3, 4)]), (2, 3, [(3, 4)])]
    hyp += [(0, 2, [(2, 3), (2, 4)]), (1, 3, [(2, 3), (2, 4)])]
    if count == 8:
        hyp += [(4, 5, [(3, 4)]), (6, 7, [(3, 4)])]
        hyp += [(4, 6, [(2, 3), (2, 4)]), (5, 7, [(2, 3), (2, 4)])]
        hyp += [(k, k + 4, [(1, 2), (1, 3), (1, 4)]) for k in range(4)]
    return hyp


def hypothesis_objects(count: int):
    return [(a, b, small_object(4, pairs)) for a, b, pairs in _pairs_hypotheses(count)]


def nestable_check(gs: Sequence[PolyMap]) -> NestResult:
    """Check the hypotheses for four (or eight) arity-4 microcubes, then form
    every nested difference, reporting any derived agreement that fails."""
    if len(gs) not in (4, 8) or any(g.arity != 4 for g in gs):
        raise ValueError("expected 4 or 8 microcubes of arity 4")
    for g in gs[1:]:
        _check_shape(gs[0], g)
    for a, b, sub in hypothesis_objects(len(gs)):
        if not agrees_on(gs[a], gs[b], sub):
            return NestResult(False, f"hypothesis: microcubes {a + 1},{b + 1} differ on {sub}")
    try:
        inner = [strong_diff_sub(gs[k], gs[k + 1], (1, 2)) for k in range(0, len(gs), 2)]
        middle = [strong_diff_sub(inner[k], inner[k + 1], (1,)) for k in range(0, len(inner), 2)]
        if len(middle) == 1:
            return NestResult(True, None, middle[0])
        return NestResult(True, None, strong_diff(middle[0], middle[1]))
    except AgreementError as exc:
        return NestResult(False, f"derived agreement failed: {exc}")


def constrained_family(count: int, arity: int, constraints, m: int, rng,
                       lo: int = -5, hi: int = 5, base=None) -> list[PolyMap]:
    """Random Q^m-valued microcubes satisfying restriction equalities.

    ``constraints`` lists (a, b, sub): microcubes a and b agree on ``sub``.
    Free coefficients are drawn first; every constrained slot then takes the
    value of its class representative (classes come from a union-find over
    (microcube, monomial) slots), which is the projection onto the subspace.
    If ``base`` is given, all constant terms are pinned to it.
    """
    src = cube(arity)
    parent: dict = {}

    def find(x):
        while x in parent:
            x = parent[x]
        return x

    for a, b, sub in constraints:
        for mono in sub.basis:
            ra, rb = find((a, mono)), find((b, mono))
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    draws = {}
    out = []
    for k in range(count):
        coords = []
        for c in range(m):
            terms = {}
            for mono in src.basis:
                key = (find((k, mono)), c)
                if key not in draws:
                    if mono == 0 and base is not None:
                        draws[key] = as_rational(base[c])
                    else:
                        draws[key] = rng.randint(lo, hi)
                terms[mono] = draws[key]
            coords.append(WeilPoly(src, terms))
        out.append(PolyMap(src, CoordinateSpace(m), tuple(coords)))
    return out


def is_zero_vector(v: TangentVector) -> bool:
    return all(x == 0 for x in v.linear)


__all__ = [
    "AgreementError", "MediatorError", "BaseMismatch", "TangentVector", "NestResult",
    "agrees_on_pair", "agrees_on", "disagreement", "require_agreement", "mediator", "mediator_certificate",
    "mediator_object", "restrict_mediator", "strong_diff", "strong_diff_sub",
    "subscript_permutation", "tangent_add", "tangent_add_via_square", "nestable_check",
    "hypothesis_objects", "constrained_family",
]

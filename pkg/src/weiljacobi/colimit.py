"""Quasi-colimit checking for finite cones of small objects.

A diagram has an apex, legs ``f_a: leaf_a -> apex`` and edges saying that
``f_a . g`` and ``f_b . h`` agree on some smaller object ``r``.  Dually, a
function on the apex restricts to a compatible family of functions on the
leaves.  The diagram is a quasi-colimit when this restriction is a bijection
onto the compatible families; both halves are decided here by exact
elimination on stacked coefficient vectors.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from . import linalg
from .weil import (
    PolyMap, SmallObject, WeilPoly, compose, inclusion, indices, monomial,
    monomial_str, polymap_well_defined, pullback, small_object,
)


class DiagramError(ValueError):
    pass


class NonCommutingEdge(DiagramError):
    def __init__(self, edge: Edge, coord: int, lhs: WeilPoly, rhs: WeilPoly):
        self.edge, self.coord = edge, coord
        super().__init__(f"edge {edge.name}: coordinate {coord} differs ({lhs} vs {rhs})")


class IncompatibleFamily(DiagramError):
    def __init__(self, edge: Edge, lhs: WeilPoly, rhs: WeilPoly):
        self.edge = edge
        super().__init__(f"family violates edge {edge.name}: {lhs} != {rhs}")


class UnsolvableFamily(DiagramError):
    def __init__(self, leg: str, mono: int):
        self.leg, self.mono = leg, mono
        super().__init__(f"no apex function restricts to this family (leg {leg}, slot {monomial_str(mono)})")


@dataclass(frozen=True)
class Leg:
    name: str
    leaf: SmallObject
    f: PolyMap


@dataclass(frozen=True)
class Edge:
    name: str
    r: SmallObject
    a: int
    b: int
    g: PolyMap
    h: PolyMap


@dataclass(frozen=True, eq=False)
class Diagram:
    name: str
    apex: SmallObject
    legs: tuple[Leg, ...]
    edges: tuple[Edge, ...] = ()

    def validate(self) -> None:
        """Check every map is well defined and every edge commutes."""
        for leg in self.legs:
            if leg.f.source != leg.leaf or leg.f.target != self.apex:
                raise DiagramError(f"leg {leg.name} has the wrong shape")
            chk = polymap_well_defined(leg.f)
            if not chk:
                raise DiagramError(f"leg {leg.name} is not well defined: {chk.witness}")
        for e in self.edges:
            for lab, mp, k in (("g", e.g, e.a), ("h", e.h, e.b)):
                if mp.source != e.r or mp.target != self.legs[k].leaf:
                    raise DiagramError(f"edge {e.name}: map {lab} has the wrong shape")
                chk = polymap_well_defined(mp)
                if not chk:
                    raise DiagramError(f"edge {e.name}: map {lab} is not well defined: {chk.witness}")
            left = compose(self.legs[e.a].f, e.g)
            right = compose(self.legs[e.b].f, e.h)
            for k, (p, q) in enumerate(zip(left.coords, right.coords), 1):
                if p != q:
                    raise NonCommutingEdge(e, k, p, q)

    # stacked coordinates: one slot per (leg, leaf basis monomial)
    @cached_property
    def offsets(self) -> tuple[int, ...]:
        out, k = [], 0
        for leg in self.legs:
            out.append(k)
            k += leg.leaf.dim
        return tuple(out + [k])

    @property
    def family_dim(self) -> int:
        return self.offsets[-1]

    def slot(self, row: int) -> tuple[int, int]:
        """(leg index, leaf monomial) of a stacked row."""
        for a in range(len(self.legs)):
            if row < self.offsets[a + 1]:
                return a, self.legs[a].leaf.basis[row - self.offsets[a]]
        raise IndexError(row)

    def stack(self, family: Sequence[WeilPoly]) -> list:
        if len(family) != len(self.legs):
            raise DiagramError(f"{len(family)} functions for {len(self.legs)} legs")
        vec = []
        for leg, p in zip(self.legs, family):
            if p.obj != leg.leaf:
                raise DiagramError(f"leg {leg.name}: function lives on {p.obj}, expected {leg.leaf}")
            vec.extend(p.coeff(m) for m in leg.leaf.basis)
        return vec

    def unstack(self, vec: Sequence) -> list[WeilPoly]:
        out = []
        for a, leg in enumerate(self.legs):
            o = self.offsets[a]
            out.append(WeilPoly(leg.leaf, {m: vec[o + k] for k, m in enumerate(leg.leaf.basis)}))
        return out

    @cached_property
    def pullback_rows(self) -> list[dict]:
        """Rows of the pullback operator: stacked slot <- apex basis column."""
        rows: list[dict] = [dict() for _ in range(self.family_dim)]
        for j, m in enumerate(self.apex.basis):
            probe = WeilPoly(self.apex, {m: 1})
            for a, leg in enumerate(self.legs):
                img = pullback(probe, leg.f)
                for mm, c in img.terms.items():
                    rows[self.offsets[a] + leg.leaf.basis_index[mm]][j] = c
        return rows

    @cached_property
    def compat_rows(self) -> list[dict]:
        """Linear conditions cutting out compatible families."""
        rows = []
        for e in self.edges:
            cond: dict[int, dict] = {}
            for k, mp, sign in ((e.a, e.g, 1), (e.b, e.h, -1)):
                leaf = self.legs[k].leaf
                for s, m in enumerate(leaf.basis):
                    img = pullback(WeilPoly(leaf, {m: 1}), mp)
                    for mm, c in img.terms.items():
                        r = cond.setdefault(mm, {})
                        col = self.offsets[k] + s
                        v = r.get(col, 0) + sign * c
                        if v:
                            r[col] = v
                        else:
                            r.pop(col, None)
            rows.extend(r for _, r in sorted(cond.items()) if r)
        return rows

    @cached_property
    def pullback_elimination(self) -> linalg.Elimination:
        return linalg.eliminate(self.pullback_rows, self.apex.dim)

    @cached_property
    def compat_elimination(self) -> linalg.Elimination:
        return linalg.eliminate(self.compat_rows, self.family_dim)


def pullback_operator(d: Diagram) -> list[dict]:
    """Sparse matrix, column j = stacked pullbacks of apex basis monomial j."""
    return d.pullback_rows


def compatibility_dim(d: Diagram) -> int:
    return d.family_dim - d.compat_elimination.rank


def compatibility_basis(d: Diagram) -> list[dict]:
    return d.compat_elimination.nullspace()


def restrict_family(d: Diagram, theta: WeilPoly) -> list[WeilPoly]:
    return [pullback(theta, leg.f) for leg in d.legs]


def family_violation(d: Diagram, family: Sequence[WeilPoly]) -> IncompatibleFamily | None:
    for e in d.edges:
        lhs = pullback(family[e.a], e.g)
        rhs = pullback(family[e.b], e.h)
        if lhs != rhs:
            return IncompatibleFamily(e, lhs, rhs)
    return None


@dataclass
class ColimitReport:
    diagram: str
    apex_dim: int
    family_dim: int
    compat_dim: int
    rank: int
    kernel_dim: int
    exists_for_all: bool
    unique: bool
    kernel_basis: list = field(default_factory=list)

    @property
    def quasi_colimit(self) -> bool:
        return self.exists_for_all and self.unique


def check_quasi_colimit(d: Diagram, validate: bool = True) -> ColimitReport:
    if validate:
        d.validate()
    pe = d.pullback_elimination
    compat = compatibility_dim(d)
    # the image always lies in the compatible subspace once edges commute,
    # so equal dimensions means equal subspaces
    kernel = [WeilPoly(d.apex, {d.apex.basis[c]: v for c, v in vec.items()})
              for vec in pe.nullspace()]
    return ColimitReport(
        diagram=d.name,
        apex_dim=d.apex.dim,
        family_dim=d.family_dim,
        compat_dim=compat,
        rank=pe.rank,
        kernel_dim=len(kernel),
        exists_for_all=pe.rank == compat,
        unique=not kernel,
        kernel_basis=kernel,
    )


def mediate(d: Diagram, family: Sequence[WeilPoly]) -> WeilPoly:
    """An apex function restricting to ``family`` along every leg.

    When several exist, the canonical one is returned: pivot columns in
    graded-lex order of the apex basis, free coefficients zero.
    """
    bad = family_violation(d, family)
    if bad is not None:
        raise bad
    b = d.stack(family)
    pe = d.pullback_elimination
    row = pe.inconsistency(b)
    if row is not None:
        a, m = d.slot(row)
        raise UnsolvableFamily(d.legs[a].name, m)
    x = pe.solve(b)
    return WeilPoly(d.apex, {d.apex.basis[c]: v for c, v in x.items()})


def random_compatible_family(d: Diagram, rng, lo: int = -5, hi: int = 5) -> list[WeilPoly]:
    """Random integer combination of the compatible-family basis."""
    vec = [0] * d.family_dim
    for basis_vec in compatibility_basis(d):
        t = rng.randint(lo, hi)
        if t:
            for k, v in basis_vec.items():
                vec[k] += t * v
    return d.unstack(vec)


# -- the diagrams of the small-object lemmas ---------------------------------------

def _ident_into(src: SmallObject, dst: SmallObject) -> PolyMap:
    return PolyMap(src, dst, tuple(WeilPoly.gen(src, i) for i in range(1, dst.n + 1)))


def two_leg(name: str, apex: SmallObject, leaves, maps, bottom: SmallObject) -> Diagram:
    legs = tuple(Leg(f"leg{k + 1}", leaf, f) for k, (leaf, f) in enumerate(zip(leaves, maps)))
    edge = Edge("bottom", bottom, 0, 1,
                inclusion(bottom, leaves[0]), inclusion(bottom, leaves[1]))
    return Diagram(name, apex, legs, (edge,))


def strong_difference_diagram(n: int) -> Diagram:
    """Two copies of D^{n+2} glued over D^{n+2}{(n+1,n+2)} into the apex
    D^{n+3}{(n+1,n+3),(n+2,n+3)} via j1 (last coordinate d_{n+1}d_{n+2}) and
    j2 (last coordinate 0)."""
    k = n + 2
    apex = small_object(n + 3, [(n + 1, n + 3), (n + 2, n + 3)])
    leaf = small_object(k)
    j1, j2 = mediator_injections(n)
    bottom = small_object(k, [(n + 1, n + 2)])
    return two_leg(f"lemma2.2:{n}" if n else "lemma2.1", apex, (leaf, leaf), (j1, j2), bottom)


def mediator_injections(n: int) -> tuple[PolyMap, PolyMap]:
    k = n + 2
    apex = small_object(n + 3, [(n + 1, n + 3), (n + 2, n + 3)])
    leaf = small_object(k)
    gens = [WeilPoly.gen(leaf, i) for i in range(1, k + 1)]
    j1 = PolyMap(leaf, apex, tuple(gens + [WeilPoly.mono(leaf, (n + 1, n + 2))]))
    j2 = PolyMap(leaf, apex, tuple(gens + [WeilPoly(leaf, {})]))
    return j1, j2


def lemma2_1() -> Diagram:
    return strong_difference_diagram(0)


def lemma2_2(n: int) -> Diagram:
    d = strong_difference_diagram(n)
    return Diagram(f"lemma2.2:{n}", d.apex, d.legs, d.edges)


def lemma2_3() -> Diagram:
    apex = small_object(2, [(1, 2)])
    left, right = small_object(2, zeroed=[1]), small_object(2, zeroed=[2])
    bottom = small_object(2, zeroed=[1, 2])
    return two_leg("lemma2.3", apex, (left, right),
                   (_ident_into(left, apex), _ident_into(right, apex)), bottom)


def lemma2_4(n: int, m1: int, m2: int) -> Diagram:
    N = n + m1 + m2
    first = range(n + 1, n + m1 + 1)
    second = range(n + m1 + 1, N + 1)
    apex = small_object(N, [(i, j) for i in first for j in second])
    left = small_object(N, zeroed=first)
    right = small_object(N, zeroed=second)
    bottom = small_object(N, zeroed=[*first, *second])
    return two_leg(f"lemma2.4:{n},{m1},{m2}", apex, (left, right),
                   (_ident_into(left, apex), _ident_into(right, apex)), bottom)


def builtin(name: str) -> Diagram:
    """Resolve names like ``lemma2.1``, ``lemma2.2:1``, ``lemma2.4:1,1,2``."""
    base, _, arg = name.partition(":")
    try:
        if base == "lemma2.1":
            return lemma2_1()
        if base == "lemma2.2":
            return lemma2_2(int(arg or 0))
        if base == "lemma2.3":
            return lemma2_3()
        if base == "lemma2.4":
            n, m1, m2 = (int(x) for x in arg.split(","))
            return lemma2_4(n, m1, m2)
    except ValueError as exc:
        raise DiagramError(f"bad builtin argument in {name!r}: {exc}") from None
    if base == "theorem3.1":
        from .gji4 import theorem_3_1_diagram
        return theorem_3_1_diagram()
    raise DiagramError(f"unknown builtin diagram {name!r}")


__all__ = [
    "Diagram", "Leg", "Edge", "ColimitReport", "DiagramError", "NonCommutingEdge",
    "IncompatibleFamily", "UnsolvableFamily", "pullback_operator", "compatibility_dim",
    "compatibility_basis", "check_quasi_colimit", "mediate", "restrict_family",
    "random_compatible_family", "lemma2_1", "lemma2_2", "lemma2_3", "lemma2_4",
    "builtin", "mediator_injections",
]

"""Weil algebras of small infinitesimal objects and polynomial maps between them.

A small object is D^n with some products d_i d_j and some generators d_k set
to zero (squares d_i^2 vanish everywhere).  Its function algebra has a basis of
square-free monomials avoiding the zeroed generators and the forbidden pairs.

Monomials are plain ints used as bitsets: bit ``i - 1`` stands for ``d_i``.
Coefficients are exact rationals (``int`` or ``Fraction``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from numbers import Rational
from typing import Iterable, Iterator, Mapping, Sequence


class WeilError(ValueError):
    """Raised on malformed objects or mismatched operands."""


# -- monomials ---------------------------------------------------------------

def monomial(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        if i < 1:
            raise WeilError(f"generator index {i} out of range")
        m |= 1 << (i - 1)
    return m


def indices(m: int) -> tuple[int, ...]:
    out = []
    i = 1
    while m:
        if m & 1:
            out.append(i)
        m >>= 1
        i += 1
    return tuple(out)


def degree(m: int) -> int:
    return bin(m).count("1")


def grlex_key(m: int) -> tuple[int, tuple[int, ...]]:
    return degree(m), indices(m)


def monomial_str(m: int, var: str = "d") -> str:
    if not m:
        return "1"
    return "".join(f"{var}{i}" for i in indices(m))


def as_rational(c) -> int | Fraction:
    """Coerce to an exact rational; floats are refused."""
    if isinstance(c, bool):
        return int(c)
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, Rational):
        return as_rational(Fraction(c.numerator, c.denominator))
    if isinstance(c, str):
        return as_rational(Fraction(c))
    raise TypeError(f"exact rational expected, got {type(c).__name__}")


# -- small objects -------------------------------------------------------------

@dataclass(frozen=True)
class SmallObject:
    """D^n{forbidden pairs, zeroed generators}.

    Pairs touching a zeroed generator are redundant and are dropped on
    construction, so equal objects compare equal.
    """

    n: int
    forbidden: frozenset = frozenset()
    zeroed: frozenset = frozenset()

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 0:
            raise WeilError(f"generator count must be a natural number, got {self.n!r}")
        zs = frozenset(int(k) for k in self.zeroed)
        for k in zs:
            if not 1 <= k <= self.n:
                raise WeilError(f"zeroed index {k} outside 1..{self.n}")
        pairs = set()
        for p in self.forbidden:
            i, j = (int(x) for x in p)
            if i == j:
                raise WeilError(f"degenerate pair ({i},{i})")
            for k in (i, j):
                if not 1 <= k <= self.n:
                    raise WeilError(f"pair index {k} outside 1..{self.n}")
            if i not in zs and j not in zs:
                pairs.add((min(i, j), max(i, j)))
        object.__setattr__(self, "forbidden", frozenset(pairs))
        object.__setattr__(self, "zeroed", zs)

    @cached_property
    def zero_mask(self) -> int:
        return monomial(self.zeroed)

    @cached_property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    @cached_property
    def partners(self) -> tuple[int, ...]:
        # partners[i-1] = bitset of generators forbidden together with d_i
        out = [0] * self.n
        for i, j in self.forbidden:
            out[i - 1] |= 1 << (j - 1)
            out[j - 1] |= 1 << (i - 1)
        return tuple(out)

    def clash(self, m: int) -> int:
        """Bitset of generators that may not be multiplied onto ``m``."""
        c = self.zero_mask
        i = 0
        while m:
            if m & 1:
                c |= self.partners[i]
            m >>= 1
            i += 1
        return c

    def admissible(self, m: int) -> bool:
        if m & ~self.full_mask:
            return False
        return not (m & self.clash(m)) and not (m & self.zero_mask)

    @cached_property
    def basis(self) -> tuple[int, ...]:
        found = []

        def grow(start: int, m: int, blocked: int) -> None:
            found.append(m)
            for i in range(start, self.n):
                bit = 1 << i
                if not bit & blocked:
                    grow(i + 1, m | bit, blocked | self.partners[i])

        grow(0, 0, self.zero_mask)
        return tuple(sorted(found, key=grlex_key))

    @cached_property
    def basis_index(self) -> dict[int, int]:
        return {m: k for k, m in enumerate(self.basis)}

    @property
    def dim(self) -> int:
        return len(self.basis)

    def is_strengthening(self, sub: SmallObject) -> bool:
        """True if ``sub`` is this object with extra relations imposed."""
        if sub.n != self.n or not self.zeroed <= sub.zeroed:
            return False
        return all(i in sub.zeroed or j in sub.zeroed or (i, j) in sub.forbidden
                   for i, j in self.forbidden)

    def __str__(self):
        rel = [f"({i},{j})" for i, j in sorted(self.forbidden)]
        rel += [str(k) for k in sorted(self.zeroed)]
        return f"D^{self.n}" + ("{" + ",".join(rel) + "}" if rel else "")


def small_object(n: int, forbidden: Iterable = (), zeroed: Iterable = ()) -> SmallObject:
    return SmallObject(n, frozenset(tuple(p) for p in forbidden), frozenset(zeroed))


def cube(n: int) -> SmallObject:
    return SmallObject(n)


def monomial_basis(obj: SmallObject) -> list[int]:
    return list(obj.basis)


@dataclass(frozen=True)
class CoordinateSpace:
    """The rational space Q^m used as a target; no relations to respect."""

    m: int

    @property
    def n(self) -> int:
        return self.m

    def __str__(self):
        return f"Q^{self.m}"


Target = SmallObject | CoordinateSpace


# -- polynomials ------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class WeilPoly:
    """An element of the function algebra of ``obj`` in canonical form."""

    obj: SmallObject
    terms: Mapping[int, int | Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for m, c in self.terms.items():
            c = as_rational(c)
            if c and self.obj.admissible(m):
                clean[m] = c
        object.__setattr__(self, "terms", clean)

    @classmethod
    def _raw(cls, obj: SmallObject, terms: dict) -> WeilPoly:
        # trusted constructor: terms already reduced
        p = object.__new__(cls)
        object.__setattr__(p, "obj", obj)
        object.__setattr__(p, "terms", terms)
        return p

    @classmethod
    def const(cls, obj: SmallObject, c) -> WeilPoly:
        return cls(obj, {0: c})

    @classmethod
    def gen(cls, obj: SmallObject, i: int) -> WeilPoly:
        return cls(obj, {monomial([i]): 1})

    @classmethod
    def mono(cls, obj: SmallObject, idx: Iterable[int], c=1) -> WeilPoly:
        return cls(obj, {monomial(idx): c})

    def __eq__(self, other):
        if not isinstance(other, WeilPoly):
            return NotImplemented
        return self.obj == other.obj and self.terms == other.terms

    def __hash__(self):
        return hash((self.obj, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def coeff(self, m: int):
        return self.terms.get(m, 0)

    @property
    def constant(self):
        return self.terms.get(0, 0)

    def sorted_terms(self) -> list[tuple[int, int | Fraction]]:
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]))

    def _check(self, other: WeilPoly) -> None:
        if self.obj != other.obj:
            raise WeilError(f"object mismatch: {self.obj} vs {other.obj}")

    def __add__(self, other: WeilPoly) -> WeilPoly:
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return WeilPoly._raw(self.obj, out)

    def __neg__(self) -> WeilPoly:
        return WeilPoly._raw(self.obj, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: WeilPoly) -> WeilPoly:
        return self + (-other)

    def scale(self, c) -> WeilPoly:
        c = as_rational(c)
        if not c:
            return WeilPoly._raw(self.obj, {})
        return WeilPoly._raw(self.obj, {m: as_rational(c * v) for m, v in self.terms.items()})

    def __mul__(self, other: WeilPoly) -> WeilPoly:
        self._check(other)
        obj = self.obj
        out: dict[int, int | Fraction] = {}
        for a, ca in self.terms.items():
            blocked = obj.clash(a) | a
            for b, cb in other.terms.items():
                if b & blocked:
                    continue
                m = a | b
                v = out.get(m, 0) + ca * cb
                if v:
                    out[m] = v
                else:
                    del out[m]
        return WeilPoly._raw(obj, {m: as_rational(v) for m, v in out.items()})

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            s = monomial_str(m)
            if m == 0:
                parts.append(str(c))
            elif c == 1:
                parts.append(s)
            elif c == -1:
                parts.append("-" + s)
            else:
                parts.append(f"{c}*{s}")
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__


def poly_add(p: WeilPoly, q: WeilPoly) -> WeilPoly:
    return p + q


def poly_scale(p: WeilPoly, c) -> WeilPoly:
    return p.scale(c)


def poly_mul(p: WeilPoly, q: WeilPoly) -> WeilPoly:
    return p * q


def zero(obj: SmallObject) -> WeilPoly:
    return WeilPoly._raw(obj, {})


# -- maps -------------------------------------------------------------------------

@dataclass(frozen=True)
class PolyMap:
    """A map source -> target, one WeilPoly on the source per target generator."""

    source: SmallObject
    target: Target
    coords: tuple[WeilPoly, ...]

    def __post_init__(self):
        coords = tuple(self.coords)
        object.__setattr__(self, "coords", coords)
        if len(coords) != self.target.n:
            raise WeilError(f"{len(coords)} coordinates for a target with {self.target.n} generators")
        for c in coords:
            if c.obj != self.source:
                raise WeilError(f"coordinate lives on {c.obj}, expected {self.source}")

    @classmethod
    def from_terms(cls, source: SmallObject, target: Target,
                   table: Mapping[int, Mapping[Iterable[int] | int, object]]) -> PolyMap:
        """Build from ``{position: {monomial: coefficient}}`` (1-based positions).

        Monomials may be bitsets or index tuples; absent positions are zero.
        """
        coords = []
        for k in range(1, target.n + 1):
            spec = table.get(k, {})
            terms = {}
            for m, c in spec.items():
                key = m if isinstance(m, int) else monomial(m)
                terms[key] = terms.get(key, 0) + as_rational(c)
            coords.append(WeilPoly(source, terms))
        return cls(source, target, tuple(coords))

    @classmethod
    def identity(cls, obj: SmallObject) -> PolyMap:
        return cls(obj, obj, tuple(WeilPoly.gen(obj, i) for i in range(1, obj.n + 1)))

    @property
    def arity(self) -> int:
        return self.source.n

    def __getitem__(self, k: int) -> WeilPoly:
        """1-based coordinate access."""
        return self.coords[k - 1]

    def sparse(self) -> dict[int, WeilPoly]:
        return {k: c for k, c in enumerate(self.coords, 1) if c}

    def __str__(self):
        body = ", ".join(f"{k}: {c}" for k, c in self.sparse().items())
        return f"<{self.source} -> {self.target} | {body}>"


def pullback(p: WeilPoly, F: PolyMap) -> WeilPoly:
    """Substitute the coordinates of ``F`` into ``p``."""
    if not isinstance(F.target, SmallObject) or p.obj != F.target:
        raise WeilError(f"cannot pull {p.obj} back along a map into {F.target}")
    src = F.source
    cache: dict[int, WeilPoly] = {0: WeilPoly._raw(src, {0: 1})}

    def prod(m: int) -> WeilPoly:
        if m in cache:
            return cache[m]
        low = m & -m
        r = prod(m ^ low) * F.coords[low.bit_length() - 1]
        cache[m] = r
        return r

    out: dict[int, int | Fraction] = {}
    for m, c in p.terms.items():
        for mm, v in prod(m).terms.items():
            s = out.get(mm, 0) + c * v
            if s:
                out[mm] = s
            else:
                del out[mm]
    return WeilPoly._raw(src, {m: as_rational(v) for m, v in out.items()})


@dataclass(frozen=True)
class Witness:
    """The relation a map fails to respect."""

    kind: str  # "pair", "square" or "zeroed"
    where: tuple[int, ...]
    value: WeilPoly

    def __str__(self):
        if self.kind == "pair":
            return f"coords {self.where[0]}*{self.where[1]} = {self.value} != 0"
        if self.kind == "square":
            return f"coord {self.where[0]} squared = {self.value} != 0"
        return f"coord {self.where[0]} = {self.value} should vanish"


@dataclass(frozen=True)
class Check:
    ok: bool
    witness: object = None

    def __bool__(self):
        return self.ok


def polymap_well_defined(F: PolyMap) -> Check:
    """Check that F respects every relation of its target.

    Besides the listed pairs and zeroed generators this includes the implicit
    relations d_i^2 = 0: a coordinate with nilpotent square is required.
    """
    T = F.target
    if isinstance(T, CoordinateSpace):
        return Check(True)
    for k in sorted(T.zeroed):
        if F.coords[k - 1]:
            return Check(False, Witness("zeroed", (k,), F.coords[k - 1]))
    for k in range(1, T.n + 1):
        c = F.coords[k - 1]
        if c and k not in T.zeroed:
            sq = c * c
            if sq:
                return Check(False, Witness("square", (k,), sq))
    for i, j in sorted(T.forbidden):
        pr = F.coords[i - 1] * F.coords[j - 1]
        if pr:
            return Check(False, Witness("pair", (i, j), pr))
    return Check(True)


def compose(F: PolyMap, G: PolyMap) -> PolyMap:
    """F after G."""
    if G.target != F.source:
        raise WeilError(f"cannot compose: {G.target} is not {F.source}")
    return PolyMap(G.source, F.target, tuple(pullback(c, G) for c in F.coords))


def inclusion(sub: SmallObject, obj: SmallObject) -> PolyMap:
    """Canonical injection of a strengthened object into ``obj``."""
    if not obj.is_strengthening(sub):
        raise WeilError(f"{sub} is not a strengthening of {obj}")
    return PolyMap(sub, obj, tuple(WeilPoly.gen(sub, i) for i in range(1, obj.n + 1)))


def restrict(F, sub: SmallObject):
    """Restrict a WeilPoly or PolyMap to a strengthening of its source."""
    if isinstance(F, WeilPoly):
        if not F.obj.is_strengthening(sub):
            raise WeilError(f"{sub} is not a strengthening of {F.obj}")
        return WeilPoly(sub, F.terms)
    if not F.source.is_strengthening(sub):
        raise WeilError(f"{sub} is not a strengthening of {F.source}")
    return PolyMap(sub, F.target, tuple(WeilPoly(sub, c.terms) for c in F.coords))


# -- permutations -----------------------------------------------------------------

@dataclass(frozen=True)
class Permutation:
    """A bijection of 1..n given by its images (images[j-1] = sigma(j))."""

    images: tuple[int, ...]

    def __post_init__(self):
        im = tuple(int(x) for x in self.images)
        if sorted(im) != list(range(1, len(im) + 1)):
            raise WeilError(f"not a permutation: {im}")
        object.__setattr__(self, "images", im)

    @classmethod
    def word(cls, w: str) -> Permutation:
        return cls(tuple(int(ch) for ch in w))

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(tuple(range(1, n + 1)))

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, j: int) -> int:
        return self.images[j - 1]

    def inverse(self) -> Permutation:
        inv = [0] * self.n
        for j, s in enumerate(self.images, 1):
            inv[s - 1] = j
        return Permutation(tuple(inv))

    def __mul__(self, other: Permutation) -> Permutation:
        # (self * other)(j) = self(other(j))
        if self.n != other.n:
            raise WeilError("permutation sizes differ")
        return Permutation(tuple(self(other(j)) for j in range(1, self.n + 1)))

    def __str__(self):
        return "".join(map(str, self.images)) if self.n < 10 else str(self.images)


def _relabel(m: int, table: Sequence[int]) -> int:
    # table[i] = new bit for old generator i+1
    out = 0
    i = 0
    while m:
        if m & 1:
            out |= table[i]
        m >>= 1
        i += 1
    return out


def permute_object(obj: SmallObject, sigma: Permutation) -> SmallObject:
    inv = sigma.inverse()
    return SmallObject(obj.n,
                       frozenset((inv(i), inv(j)) for i, j in obj.forbidden),
                       frozenset(inv(k) for k in obj.zeroed))


def permute(g, sigma: Permutation):
    """g^sigma(d_1..d_n) = g(d_{sigma^-1(1)}, ..., d_{sigma^-1(n)}).

    Works on a PolyMap (permuting its source variables) or a WeilPoly.
    """
    obj = g.obj if isinstance(g, WeilPoly) else g.source
    if sigma.n != obj.n:
        raise WeilError(f"permutation of {sigma.n} letters applied to arity {obj.n}")
    inv = sigma.inverse()
    table = [1 << (inv(i) - 1) for i in range(1, obj.n + 1)]
    new = permute_object(obj, sigma)

    def move(p: WeilPoly) -> WeilPoly:
        return WeilPoly._raw(new, {_relabel(m, table): c for m, c in p.terms.items()})

    if isinstance(g, WeilPoly):
        return move(g)
    return PolyMap(new, g.target, tuple(move(c) for c in g.coords))


def iter_subsets(mask: int) -> Iterator[int]:
    """All submasks of ``mask``, including 0 and ``mask``."""
    s = mask
    while True:
        yield s
        if s == 0:
            return
        s = (s - 1) & mask

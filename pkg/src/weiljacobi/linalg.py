"""Exact sparse Gauss-Jordan elimination over the rationals.

Rows are dicts ``{column: value}``.  Pivots are chosen by column order (the
leading nonzero of each row), so the reduced row echelon form, the rank, the
pivot columns and the canonical solution do not depend on the order in which
rows are supplied.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Row = dict  # column -> rational


def _norm(v):
    if isinstance(v, Fraction) and v.denominator == 1:
        return v.numerator
    return v


def _axpy(y: dict, a, x: Mapping) -> None:
    # y += a * x, dropping zeros
    for k, v in x.items():
        s = y.get(k, 0) + a * v
        if s:
            y[k] = _norm(s)
        else:
            y.pop(k, None)


@dataclass
class Elimination:
    """Reduced row echelon form of a sparse matrix, with row provenance.

    ``pivot_rows[c]`` is the reduced row whose leading column is ``c``;
    ``pivot_tags[c]`` expresses it as a combination of the input rows.
    ``null_tags`` lists input-row combinations that vanish identically: a
    right-hand side ``b`` is consistent iff every one of them kills ``b``.
    """

    ncols: int
    pivot_rows: dict = field(default_factory=dict)
    pivot_tags: dict = field(default_factory=dict)
    null_tags: list = field(default_factory=list)
    nrows: int = 0

    @property
    def pivots(self) -> list[int]:
        return sorted(self.pivot_rows)

    @property
    def rank(self) -> int:
        return len(self.pivot_rows)

    def add_row(self, row: Mapping, tag: Mapping | None = None) -> None:
        r = {k: v for k, v in row.items() if v}
        t = dict(tag) if tag is not None else {self.nrows: 1}
        self.nrows += 1
        for c in sorted(r):
            if c in r and c in self.pivot_rows:
                a = -r[c]
                _axpy(r, a, self.pivot_rows[c])
                _axpy(t, a, self.pivot_tags[c])
        if not r:
            if t:
                self.null_tags.append(t)
            return
        lead = min(r)
        inv = Fraction(1) / r[lead]
        r = {k: _norm(v * inv) for k, v in r.items()}
        t = {k: _norm(v * inv) for k, v in t.items()}
        # keep the form fully reduced: clear the new pivot column elsewhere
        for c, pr in self.pivot_rows.items():
            if lead in pr:
                a = -pr[lead]
                _axpy(pr, a, r)
                _axpy(self.pivot_tags[c], a, t)
        self.pivot_rows[lead] = r
        self.pivot_tags[lead] = t

    def free_columns(self) -> list[int]:
        return [c for c in range(self.ncols) if c not in self.pivot_rows]

    def nullspace(self) -> list[dict]:
        """Basis of {x : A x = 0}, one vector per free column (x_free = 1)."""
        basis = []
        for f in self.free_columns():
            v = {f: 1}
            for c, r in self.pivot_rows.items():
                if f in r:
                    v[c] = _norm(-r[f])
            basis.append(v)
        return basis

    def inconsistency(self, b: Sequence) -> int | None:
        """Index of an input row witnessing that A x = b has no solution."""
        for t in self.null_tags:
            if sum(v * b[i] for i, v in t.items()):
                return min(t)
        return None

    def solve(self, b: Sequence) -> dict | None:
        """Canonical solution (free variables zero) of A x = b, or None."""
        if self.inconsistency(b) is not None:
            return None
        x = {}
        for c, t in self.pivot_tags.items():
            s = sum(v * b[i] for i, v in t.items())
            if s:
                x[c] = _norm(Fraction(s))
        return x


def eliminate(rows: Iterable[Mapping], ncols: int) -> Elimination:
    e = Elimination(ncols)
    for r in rows:
        e.add_row(r)
    return e


def rank(rows: Iterable[Mapping], ncols: int) -> int:
    return eliminate(rows, ncols).rank


def nullspace(rows: Iterable[Mapping], ncols: int) -> list[dict]:
    return eliminate(rows, ncols).nullspace()


def rref(rows: Iterable[Mapping], ncols: int) -> list[dict]:
    e = eliminate(rows, ncols)
    return [e.pivot_rows[c] for c in e.pivots]


def apply(rows: Sequence[Mapping], x: Mapping) -> list:
    """Matrix-vector product for sparse rows."""
    return [_norm(sum(v * x.get(c, 0) for c, v in r.items())) for r in rows]

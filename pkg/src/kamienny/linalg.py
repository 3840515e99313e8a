"""Exact integer and F_m linear algebra used by the presentation and the
independence tests.

Rows are sparse ``dict[int, int]`` maps (column -> nonzero entry).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from sympy import Matrix
from sympy.matrices.normalforms import invariant_factors

SparseRow = dict[int, int]


@dataclass(frozen=True)
class EchelonForm:
    """Reduced Hermite form: ``rows[i]`` has leading column ``pivots[i]``."""

    ncols: int
    pivots: tuple[int, ...]
    rows: tuple[SparseRow, ...]

    @property
    def rank(self) -> int:
        return len(self.pivots)

    @property
    def pivot_entries(self) -> tuple[int, ...]:
        return tuple(r[c] for r, c in zip(self.rows, self.pivots))

    def non_pivots(self) -> list[int]:
        ps = set(self.pivots)
        return [c for c in range(self.ncols) if c not in ps]


def _axpy(target: SparseRow, coef: int, src: SparseRow) -> tuple[set[int], set[int]]:
    """target -= coef * src in place; returns (added columns, removed columns)."""
    added, removed = set(), set()
    for c, e in src.items():
        old = target.get(c, 0)
        new = old - coef * e
        if new:
            if not old:
                added.add(c)
            target[c] = new
        elif old:
            del target[c]
            removed.add(c)
    return added, removed


def hermite_form(rows: Sequence[SparseRow], ncols: int) -> EchelonForm:
    """Row-style Hermite normal form over Z, pivoting in column order.

    Within a column the remaining rows are combined by repeated division
    with remainder (smallest absolute entry first, ties by row order) until
    one row is left; that row becomes the pivot with positive leading entry.
    Entries above each pivot are reduced into ``[0, pivot)``.
    """
    work = [dict(r) for r in rows if r]
    active: set[int] = set(range(len(work)))
    col_index: dict[int, set[int]] = {}
    for i, r in enumerate(work):
        for c in r:
            col_index.setdefault(c, set()).add(i)

    def apply(i: int, coef: int, src: SparseRow) -> None:
        added, removed = _axpy(work[i], coef, src)
        for c in added:
            col_index.setdefault(c, set()).add(i)
        for c in removed:
            col_index[c].discard(i)

    pivots: list[int] = []
    prows: list[int] = []
    for j in range(ncols):
        cand = sorted(col_index.get(j, ()))
        while len(cand) > 1:
            piv = min(cand, key=lambda i: (abs(work[i][j]), i))
            for i in cand:
                if i != piv:
                    apply(i, work[i][j] // work[piv][j], work[piv])
            cand = sorted(i for i in cand if j in work[i])
        if not cand:
            continue
        i = cand[0]
        if work[i][j] < 0:
            work[i] = {c: -e for c, e in work[i].items()}
        active.discard(i)
        for c in work[i]:
            col_index[c].discard(i)
        pivots.append(j)
        prows.append(i)

    # back-substitution, ascending pivot columns
    for k, (j, i) in enumerate(zip(pivots, prows)):
        pe = work[i][j]
        for i2 in prows[:k]:
            e = work[i2].get(j, 0)
            if e:
                f = e // pe
                if f:
                    _axpy(work[i2], f, work[i])
    return EchelonForm(ncols, tuple(pivots), tuple(work[i] for i in prows))


def elementary_divisors(matrix: Sequence[Sequence[int]]) -> list[int]:
    """Diagonal of the Smith form, length min(rows, cols); zeros for rank loss."""
    nr = len(matrix)
    nc = len(matrix[0]) if nr else 0
    k = min(nr, nc)
    if k == 0:
        return []
    inv = [abs(int(x)) for x in invariant_factors(Matrix(matrix))]
    inv = [x for x in inv if x]
    return sorted(inv) + [0] * (k - len(inv))


def rank_mod_prime(vectors: Sequence[Sequence[int]], m: int) -> tuple[int, list[int] | None]:
    """Rank over F_m of the given vectors and the first kernel vector.

    Vectors are processed in order; the first one that reduces to zero
    against its predecessors yields the witness: integer coefficients in
    ``[0, m)``, one per input vector, not all zero, whose combination is
    zero mod m.
    """
    d = len(vectors)
    basis: list[tuple[int, list[int], list[int]]] = []  # (pivot col, row, combo)
    rank = 0
    witness = None
    for i, v in enumerate(vectors):
        row = [int(x) % m for x in v]
        combo = [0] * d
        combo[i] = 1
        for pc, brow, bcombo in basis:
            f = row[pc]
            if f:
                row = [(a - f * b) % m for a, b in zip(row, brow)]
                combo = [(a - f * b) % m for a, b in zip(combo, bcombo)]
        pc = next((c for c, x in enumerate(row) if x), None)
        if pc is None:
            if witness is None:
                witness = combo
            continue
        inv = pow(row[pc], -1, m)
        row = [x * inv % m for x in row]
        combo = [x * inv % m for x in combo]
        basis.append((pc, row, combo))
        rank += 1
    return rank, witness

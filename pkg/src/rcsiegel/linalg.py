"""Exact Gaussian elimination over the rationals."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, List, Sequence


class RowEchelon:
    """Incrementally maintained reduced row echelon form.

    Rows are fed one at a time; the basis stays fully reduced so that
    ``add_row`` can stop early once the rank reaches the column count.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.rows: List[List[Fraction]] = []
        self.pivots: List[int] = []

    @property
    def rank(self) -> int:
        return len(self.rows)

    def full(self) -> bool:
        return self.rank == self.ncols

    def add_row(self, row: Sequence) -> bool:
        r = [Fraction(x) for x in row]
        for prow, pc in zip(self.rows, self.pivots):
            f = r[pc]
            if f:
                r = [x - f * y for x, y in zip(r, prow)]
        pc = next((c for c, x in enumerate(r) if x), None)
        if pc is None:
            return False
        inv = 1 / r[pc]
        r = [x * inv for x in r]
        for k, prow in enumerate(self.rows):
            f = prow[pc]
            if f:
                self.rows[k] = [x - f * y for x, y in zip(prow, r)]
        self.rows.append(r)
        self.pivots.append(pc)
        return True

    def nullspace(self) -> List[List[Fraction]]:
        free = [c for c in range(self.ncols) if c not in self.pivots]
        basis = []
        for fc in free:
            vec = [Fraction(0)] * self.ncols
            vec[fc] = Fraction(1)
            for prow, pc in zip(self.rows, self.pivots):
                vec[pc] = -prow[fc]
            basis.append(vec)
        return basis


def rank(rows: Iterable[Sequence]) -> int:
    rows = list(rows)
    if not rows:
        return 0
    ech = RowEchelon(len(rows[0]))
    for r in rows:
        ech.add_row(r)
    return ech.rank


def nullspace(rows: Iterable[Sequence], ncols: int) -> List[List[Fraction]]:
    ech = RowEchelon(ncols)
    for r in rows:
        if ech.full():
            break
        ech.add_row(r)
    return ech.nullspace()


def det(matrix: Sequence[Sequence]) -> Fraction:
    m = [[Fraction(x) for x in row] for row in matrix]
    n = len(m)
    sign = 1
    result = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c]), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            sign = -sign
        piv = m[c][c]
        result *= piv
        for r in range(c + 1, n):
            f = m[r][c] / piv
            if f:
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return result * sign

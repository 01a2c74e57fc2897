"""Determinant pencils ``det(R + lam R') = sum_a P_a lam^a`` and their minors."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Sequence, Tuple

from .exactpoly import SLOT_R, SLOT_RP, Monomial, Poly, matvar, mono_mul, poly_sum


@dataclass(frozen=True)
class PencilFamily:
    genus: int
    coeffs: Tuple[Poly, ...]

    def __getitem__(self, alpha: int) -> Poly:
        # P_alpha vanishes outside 0..n
        if 0 <= alpha < len(self.coeffs):
            return self.coeffs[alpha]
        return Poly()


@dataclass(frozen=True)
class MinorFamily:
    genus: int
    deleted_rows: Tuple[int, ...]
    deleted_cols: Tuple[int, ...]
    coeffs: Tuple[Poly, ...]

    def __getitem__(self, alpha: int) -> Poly:
        if 0 <= alpha < len(self.coeffs):
            return self.coeffs[alpha]
        return Poly()


def _perm_sign(perm: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(perm)
    for start in range(len(perm)):
        if seen[start]:
            continue
        j, length = start, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


@lru_cache(maxsize=None)
def _pencil_coeffs(rows: Tuple[int, ...], cols: Tuple[int, ...]) -> Tuple[Poly, ...]:
    # Leibniz expansion; each choice of R or R' per row contributes to the
    # power of lam equal to the number of R' factors.
    k = len(rows)
    acc: List[Dict[Monomial, int]] = [dict() for _ in range(k + 1)]
    for perm in itertools.permutations(range(k)):
        sign = _perm_sign(perm)
        pairs = [(rows[r], cols[perm[r]]) for r in range(k)]
        for choice in itertools.product((SLOT_R, SLOT_RP), repeat=k):
            mono: Monomial = ()
            for (i, j), slot in zip(pairs, choice):
                mono = mono_mul(mono, ((matvar(slot, i, j), 1),))
            bucket = acc[sum(1 for s in choice if s == SLOT_RP)]
            bucket[mono] = bucket.get(mono, 0) + sign
    return tuple(Poly(b) for b in acc)


def p_alpha_family(n: int) -> PencilFamily:
    if n < 1:
        raise ValueError("genus must be >= 1")
    idx = tuple(range(1, n + 1))
    return PencilFamily(n, _pencil_coeffs(idx, idx))


def minor_family(n: int, rows: Sequence[int], cols: Sequence[int]) -> MinorFamily:
    """Pencil coefficients of ``det(R + lam R')`` with ``rows``/``cols`` deleted.

    The remaining submatrix is generally not symmetric; its entries keep the
    symmetric identification of the full matrix and the determinant is taken
    literally, without cofactor sign.
    """
    rows, cols = tuple(rows), tuple(cols)
    if len(rows) != len(cols):
        raise ValueError(f"deleted rows {rows} and cols {cols} differ in length")
    if len(rows) > n:
        raise ValueError("cannot delete more rows than the genus")
    for seq in (rows, cols):
        if any(b <= a for a, b in zip(seq, seq[1:])):
            raise ValueError(f"deleted indices must be strictly increasing: {seq}")
        if any(not 1 <= x <= n for x in seq):
            raise ValueError(f"deleted index out of range 1..{n}: {seq}")
    keep_r = tuple(i for i in range(1, n + 1) if i not in rows)
    keep_c = tuple(j for j in range(1, n + 1) if j not in cols)
    return MinorFamily(n, rows, cols, _pencil_coeffs(keep_r, keep_c))


def pencil_determinant(n: int, lam) -> Poly:
    """``det(R + lam R')`` for a numeric ``lam``, expanded directly (oracle path)."""
    idx = tuple(range(1, n + 1))
    total = Poly()
    for perm in itertools.permutations(range(n)):
        term = Poly.const(_perm_sign(perm))
        for r in range(n):
            i, j = idx[r], idx[perm[r]]
            term = term * (Poly.var(matvar(SLOT_R, i, j)) + Poly.var(matvar(SLOT_RP, i, j)) * lam)
        total = total + term
    return total


def expand_pbasis(expr, fam: PencilFamily) -> Poly:
    """Expand ``sum C(a) prod P_alpha^{a_alpha}`` into a polynomial in R, R'."""
    if expr.n != fam.genus:
        raise ValueError(f"expression genus {expr.n} does not match family genus {fam.genus}")
    powers: Dict[Tuple[int, int], Poly] = {}

    def power(alpha, e):
        if (alpha, e) not in powers:
            powers[(alpha, e)] = fam[alpha] ** e
        return powers[(alpha, e)]

    terms = []
    for a, c in expr.coeffs.items():
        term = Poly.const(c)
        for alpha, e in enumerate(a):
            if e:
                term = term * power(alpha, e)
        terms.append(term)
    return poly_sum(terms)

"""Laplace-type operators on polynomials in two symmetric matrices.

``apply_L``/``apply_Lprime`` realise the Laplacians ``Delta_ij(X)`` and
``Delta_ij(X')`` on associated polynomials ``Q(XX^t, X'X'^t)`` where ``X`` has
``d1`` columns and ``X'`` has ``d2``.  ``harmonicity_defect`` is the trace of
both; it vanishes exactly on the pluri-harmonic elements.

Besides the direct route through expanded polynomials, ``structural_defect``
computes the same Laplacian of a P-basis expression purely from index
arithmetic (the action on the pencil coefficients and their pairings).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Tuple

from .exactpoly import SLOT_R, SLOT_RP, Poly, matvar, poly_sum
from .pencil import minor_family, p_alpha_family


class TrivialSpaceError(ValueError):
    """Raised for odd weights, where the invariant space is zero."""


@dataclass(frozen=True)
class OperatorParams:
    n: int
    v: int
    d1: int
    d2: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"genus must be >= 1, got {self.n}")
        if self.v < 0:
            raise ValueError(f"weight must be >= 0, got {self.v}")
        if self.d1 < 1 or self.d2 < 1:
            raise ValueError(f"d1, d2 must be positive, got {self.d1}, {self.d2}")

    @property
    def half(self) -> int:
        """Degree in the pencil coefficients (the weight is twice this)."""
        self.require_even()
        return self.v // 2

    def require_even(self) -> None:
        if self.v % 2:
            raise TrivialSpaceError("trivial space: v must be even")


class _Derivs:
    """Memoised first and second partials of one polynomial in one slot."""

    def __init__(self, q: Poly, slot: int):
        self.q = q
        self.slot = slot
        self._first: Dict[Tuple[int, int], Poly] = {}
        self._second: Dict[Tuple[Tuple[int, int], Tuple[int, int]], Poly] = {}

    @staticmethod
    def _key(a, b):
        return (a, b) if a <= b else (b, a)

    def d(self, a: int, b: int) -> Poly:
        k = self._key(a, b)
        if k not in self._first:
            self._first[k] = self.q.partial(matvar(self.slot, *k))
        return self._first[k]

    def dd(self, a: int, b: int, c: int, e: int) -> Poly:
        k1, k2 = sorted((self._key(a, b), self._key(c, e)))
        if (k1, k2) not in self._second:
            self._second[(k1, k2)] = self.d(*k1).partial(matvar(self.slot, *k2))
        return self._second[(k1, k2)]


def _laplacian(slot: int, d: int, n: int, i: int, j: int, q: Poly, derivs: _Derivs | None = None) -> Poly:
    if not (1 <= i <= n and 1 <= j <= n):
        raise ValueError(f"index ({i}, {j}) out of range 1..{n}")
    D = derivs or _Derivs(q, slot)

    def X(a, b):
        return Poly.var(matvar(slot, a, b))

    parts = [D.d(i, j) * (d * (2 if i == j else 1))]
    parts.append(X(i, j) * D.dd(i, i, j, j) * 4)
    for mp in range(1, n + 1):
        if mp == j:
            continue
        for m in range(1, n + 1):
            if m == i:
                continue
            parts.append(X(mp, m) * D.dd(mp, j, m, i))
    for mp in range(1, n + 1):
        if mp != j:
            parts.append(X(mp, i) * D.dd(mp, j, i, i) * 2)
    for m in range(1, n + 1):
        if m != i:
            parts.append(X(m, j) * D.dd(j, j, m, i) * 2)
    return poly_sum(parts)


def apply_L(params: OperatorParams, i: int, j: int, q: Poly) -> Poly:
    return _laplacian(SLOT_R, params.d1, params.n, i, j, q)


def apply_Lprime(params: OperatorParams, i: int, j: int, q: Poly) -> Poly:
    return _laplacian(SLOT_RP, params.d2, params.n, i, j, q)


def harmonicity_defect(params: OperatorParams, q: Poly) -> Poly:
    """``sum_i (L_ii + L'_ii) q``; zero iff ``q`` is pluri-harmonic for (d1, d2)."""
    dR, dRp = _Derivs(q, SLOT_R), _Derivs(q, SLOT_RP)
    parts = []
    for i in range(1, params.n + 1):
        parts.append(_laplacian(SLOT_R, params.d1, params.n, i, i, q, dR))
        parts.append(_laplacian(SLOT_RP, params.d2, params.n, i, i, q, dRp))
    return poly_sum(parts)


def offdiagonal_defects(params: OperatorParams, q: Poly) -> Dict[Tuple[int, int], Poly]:
    """``(L_ij + L'_ij) q`` for i < j; an optional pluri-harmonicity double check."""
    out = {}
    for i in range(1, params.n + 1):
        for j in range(i + 1, params.n + 1):
            out[(i, j)] = apply_L(params, i, j, q) + apply_Lprime(params, i, j, q)
    return out


def pairing(q: Poly, q2: Poly, i: int, which: str, n: int) -> Poly:
    """The bilinear cross term ``(Q, Q')_{i,R}`` (``which="R"``) or ``_{i,R'}``.

    Satisfies ``L_ii(QQ') = (L_ii Q)Q' + Q(L_ii Q') + 8 (Q, Q')_{i,R}``.
    """
    slot = {"R": SLOT_R, "Rprime": SLOT_RP, "Rp": SLOT_RP}[which]
    if not 1 <= i <= n:
        raise ValueError(f"index {i} out of range 1..{n}")
    A, B = _Derivs(q, slot), _Derivs(q2, slot)

    def X(a, b):
        return Poly.var(matvar(slot, a, b))

    parts = [X(i, i) * A.d(i, i) * B.d(i, i)]
    for l in range(1, n + 1):
        parts.append(X(l, i) * A.d(l, i) * B.d(i, i))
    for m in range(1, n + 1):
        parts.append(X(m, i) * A.d(i, i) * B.d(m, i))
    for l in range(1, n + 1):
        Al = A.d(l, i)
        if not Al:
            continue
        for m in range(1, n + 1):
            parts.append(X(l, m) * Al * B.d(m, i))
    return poly_sum(parts).scale(Fraction(1, 4))


# Pencil-coefficient identities ----------------------------------------------

def verify_lemma_deltagrad(n: int, d1: int, d2: int) -> List[dict]:
    """Check the action of L, L' on pencil coefficients and the pairing recursions.

    Returns one record per identity instance:
    ``{"identity", "i", "alpha", "beta", "pass"}``.
    """
    if n > 4:
        raise ValueError("verify_lemma_deltagrad is limited to n <= 4")
    params = OperatorParams(n, 2, d1, d2)
    fam = p_alpha_family(n)
    report: List[dict] = []

    def record(name, i, alpha, beta, ok):
        report.append({"identity": name, "i": i, "alpha": alpha, "beta": beta, "pass": bool(ok)})

    for i in range(1, n + 1):
        minor = minor_family(n, [i], [i])
        for alpha in range(n):
            lhs = apply_L(params, i, i, fam[alpha])
            record("L_P_alpha", i, alpha, None, lhs == minor[alpha] * (2 * (d1 + 1 - n + alpha)))
        for alpha in range(1, n + 1):
            lhs = apply_Lprime(params, i, i, fam[alpha])
            record("Lprime_P_alpha", i, alpha, None, lhs == minor[alpha - 1] * (2 * (d2 + 1 - alpha)))
        ok = apply_L(params, i, i, fam[n]).is_zero() and apply_Lprime(params, i, i, fam[0]).is_zero()
        record("boundary_vanishing", i, None, None, ok)
        for alpha in range(n + 1):
            for beta in range(alpha, n + 1):
                lhs = pairing(fam[alpha], fam[beta], i, "R", n)
                rhs = (fam[alpha] * minor[beta] - fam[beta + 1] * minor[alpha - 1]
                       + _pairing_or_zero(fam, alpha - 1, beta + 1, i, "R", n))
                record("pairing_R", i, alpha, beta, lhs == rhs)
                lhs = pairing(fam[alpha], fam[beta], i, "Rprime", n)
                rhs = (fam[beta] * minor[alpha - 1] - fam[alpha - 1] * minor[beta]
                       + _pairing_or_zero(fam, alpha - 1, beta + 1, i, "Rprime", n))
                record("pairing_Rprime", i, alpha, beta, lhs == rhs)
    return report


def _pairing_or_zero(fam, alpha, beta, i, which, n):
    if not (0 <= alpha <= n and 0 <= beta <= n):
        return Poly()
    return pairing(fam[alpha], fam[beta], i, which, n)


def trace_minor(n: int, alpha: int) -> Poly:
    """``sum_i (P_{i;i})_alpha``."""
    return poly_sum(minor_family(n, [i], [i])[alpha] for i in range(1, n + 1))


def trace_minor_rank(n: int) -> int:
    """Rank over Q of the coefficient vectors of the trace minors, alpha < n."""
    from .linalg import rank

    polys = [trace_minor(n, a) for a in range(n)]
    monos = sorted({m for p in polys for m, _ in p.items()})
    rows = [[Fraction(p.terms.get(m, 0)) for m in monos] for p in polys]
    return rank(rows)


# Structural route ------------------------------------------------------------

StructKey = Tuple[int, Tuple[int, ...]]


def _shift(a: Tuple[int, ...], *changes: Tuple[int, int]):
    out = list(a)
    for idx, delta in changes:
        out[idx] += delta
    return tuple(out)


def _pair_terms(alpha: int, beta: int, n: int):
    """Unrolled ``(P_alpha, P_beta)_R + (P_alpha, P_beta)_R'`` for alpha <= beta.

    Yields ``(sign, x, gamma)`` meaning ``sign * P_x * sum_i (P_{i;i})_gamma``.
    """
    t = 0
    while alpha - t >= 0 and beta + t <= n:
        A, B = alpha - t, beta + t
        yield 1, A, B          # P_A S_B        (R part)
        yield -1, B + 1, A - 1  # -P_{B+1} S_{A-1}
        yield 1, B, A - 1      # P_B S_{A-1}     (R' part)
        yield -1, A - 1, B     # -P_{A-1} S_B
        t += 1


def structural_defect(expr, d1: int, d2: int) -> Dict[StructKey, Fraction]:
    """Laplacian of a P-basis expression as ``{(gamma, b): coeff}``.

    The result stands for ``sum coeff * S_gamma * prod P^b`` with
    ``S_gamma = sum_i (P_{i;i})_gamma``; it is computed without expanding any
    polynomial.
    """
    n = expr.n
    out: Dict[StructKey, Fraction] = {}

    def put(gamma, b, c):
        if not (0 <= gamma <= n - 1) or any(x < 0 for x in b) or not c:
            return
        key = (gamma, b)
        s = out.get(key, 0) + c
        if s:
            out[key] = s
        else:
            out.pop(key, None)

    for a, C in expr.coeffs.items():
        for alpha in range(n + 1):
            aa = a[alpha]
            if not aa:
                continue
            b = _shift(a, (alpha, -1))
            put(alpha, b, C * aa * 2 * (d1 + 1 - n + alpha))
            if alpha >= 1:
                put(alpha - 1, b, C * aa * 2 * (d2 + 1 - alpha))
            for beta in range(alpha, n + 1):
                if beta == alpha:
                    mult = aa * (aa - 1) // 2
                else:
                    mult = aa * a[beta]
                if not mult:
                    continue
                b0 = _shift(a, (alpha, -1), (beta, -1))
                for sign, x, gamma in _pair_terms(alpha, beta, n):
                    if 0 <= x <= n:
                        put(gamma, _shift(b0, (x, 1)), 8 * mult * C * sign)
    return {k: Fraction(v) for k, v in out.items()}


def structural_to_poly(struct: Dict[StructKey, Fraction], n: int) -> Poly:
    fam = p_alpha_family(n)
    traces = [trace_minor(n, g) for g in range(n)]
    parts = []
    for (gamma, b), c in struct.items():
        term = traces[gamma].scale(c)
        for alpha, e in enumerate(b):
            if e:
                term = term * fam[alpha] ** e
        parts.append(term)
    return poly_sum(parts)

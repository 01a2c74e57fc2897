"""Invariant pluri-harmonic polynomials in the pencil basis.

An element of the weight-``v`` invariant space is written as
``sum_a C(a) prod_alpha P_alpha^{a_alpha}`` over multi-indices ``a`` of length
``n+1`` with ``sum(a) == v // 2``.  ``solve_recursion`` determines ``C``
from the anchor ``C((0,...,0,v//2)) = 1``; the closed-form generators cover
the special cases with known formulas and serve as independent checks.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Dict, List, Optional, Tuple

from .exactpoly import poly_sum
from .laplace import OperatorParams, TrivialSpaceError, harmonicity_defect, structural_defect
from .linalg import RowEchelon
from .pencil import expand_pbasis, p_alpha_family

MultiIndex = Tuple[int, ...]


class RecursionSingularError(ArithmeticError):
    """A recursion step has a vanishing leading factor but nonzero right side."""


class NotHarmonicError(ArithmeticError):
    pass


class CostCapError(ValueError):
    pass


@dataclass
class PBasisExpr:
    n: int
    v: int
    coeffs: Dict[MultiIndex, Fraction]
    d1: Optional[int] = None
    d2: Optional[int] = None
    normalization: str = "C_last=1"

    def __post_init__(self):
        half = self.v // 2
        clean = {}
        for a, c in self.coeffs.items():
            a = tuple(a)
            if len(a) != self.n + 1 or sum(a) != half or min(a) < 0:
                raise ValueError(f"multi-index {a} not in I(n={self.n}, sum={half})")
            if c:
                clean[a] = Fraction(c)
        self.coeffs = clean

    def __getitem__(self, a) -> Fraction:
        return self.coeffs.get(tuple(a), Fraction(0))

    def is_zero(self) -> bool:
        return not self.coeffs

    def scaled(self, c) -> "PBasisExpr":
        return PBasisExpr(self.n, self.v, {a: x * c for a, x in self.coeffs.items()},
                          self.d1, self.d2, self.normalization)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "v": self.v,
            "d1": self.d1,
            "d2": self.d2,
            "normalization": self.normalization,
            "coefficients": [
                {"a": list(a), "num": str(c.numerator), "den": str(c.denominator)}
                for a, c in sorted(self.coeffs.items())
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "PBasisExpr":
        coeffs = {tuple(e["a"]): Fraction(int(e["num"]), int(e["den"])) for e in data["coefficients"]}
        return cls(data["n"], data["v"], coeffs, data.get("d1"), data.get("d2"),
                   data.get("normalization", "C_last=1"))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def index_set(n: int, half: int) -> List[MultiIndex]:
    """All ``a`` in N^{n+1} with ``sum(a) == half``, in increasing lexicographic order."""
    if n < 1 or half < 0:
        raise ValueError("need n >= 1 and half >= 0")

    def rec(length, total):
        if length == 1:
            yield (total,)
            return
        for first in range(total + 1):
            for rest in rec(length - 1, total - first):
                yield (first,) + rest

    return list(rec(n + 1, half))


def _e(n: int, j: int) -> List[int]:
    v = [0] * (n + 1)
    v[j] = 1
    return v


def _combine(a, *terms):
    out = list(a)
    for sign, j in terms:
        out[j] += sign
    return tuple(out)


def solve_recursion(params: OperatorParams, check: bool = True, variant: str = "derived") -> PBasisExpr:
    """Solve the coefficient recursion with ``C((0,...,0,v/2)) = 1``.

    For ``a`` with first nonzero position ``i < n`` the vanishing of the
    coefficient of ``S_i * P^(a - e_i)`` in the Laplacian reads::

        a_i (d1+1-n+i+2(a_i-1)) C(a) = -(d2-i)(a_{i+1}+1) C(a-e_i+e_{i+1})
            + 4 sum_{i<l<=l', l+l'-i<=n}   w(t) C(t),   t = a-e_i+e_l+e_l'-e_{l+l'-i}
            - 4 sum_{i<l<=l', l+l'-i-1<=n} w(h) C(h),   h = a-e_i+e_l+e_l'-e_{l+l'-i-1}

    with ``w(b) = b_l (b_l' - [l=l']) / (1 + [l=l'])``.  Every index on the
    right is lexicographically smaller than ``a``.

    ``variant="alternate"`` uses opposite pair-sum signs and flat weights instead
    (``-2 sum w'(t) C(t) + 2 sum w'(h) C(h)`` with ``w'(b) = b_l (b_l' - [l=l'])``);
    this agrees with the derived form only when no pair sums occur (weight 2)
    and fails the harmonicity check otherwise.

    With ``check`` the result is verified against every Laplacian equation,
    not just the ones used; a failure raises ``NotHarmonicError``.
    """
    params.require_even()
    if variant not in ("derived", "alternate"):
        raise ValueError(f"unknown variant {variant!r}")
    n, d1, d2 = params.n, params.d1, params.d2
    half = params.v // 2
    if variant == "derived":
        pair_sign, halve_diag, weight = 1, True, 4
    else:
        pair_sign, halve_diag, weight = -1, False, 2
    C: Dict[MultiIndex, Fraction] = {}

    def get(b):
        if min(b) < 0:
            return 0
        return C.get(b, 0)

    def w(b, l, lp):
        x = Fraction(b[l] * (b[lp] - (l == lp)))
        return x / 2 if (halve_diag and l == lp) else x

    for a in index_set(n, half):
        i = next((j for j, x in enumerate(a) if x), n)
        if i == n:
            C[a] = Fraction(1)
            continue
        ai = a[i]
        lead = (d1 + 1 - n + i + 2 * (ai - 1)) * ai
        rhs = Fraction(0)
        rhs -= (d2 - i) * (a[i + 1] + 1) * get(_combine(a, (-1, i), (1, i + 1)))
        for l in range(i + 1, n + 1):
            for lp in range(l, n + 1):
                if lp + l - i <= n:
                    t = _combine(a, (-1, i), (1, l), (1, lp), (-1, l + lp - i))
                    if min(t) >= 0:
                        rhs += pair_sign * weight * w(t, l, lp) * get(t)
                if lp + l - i - 1 <= n:
                    h = _combine(a, (-1, i), (1, l), (1, lp), (-1, l + lp - i - 1))
                    if min(h) >= 0:
                        rhs -= pair_sign * weight * w(h, l, lp) * get(h)
        if lead == 0:
            if rhs:
                raise RecursionSingularError(f"recursion singular at a={a}: zero leading factor")
            C[a] = Fraction(0)
        else:
            C[a] = rhs / lead
    expr = PBasisExpr(n, params.v, C, d1, d2, "C_last=1")
    if check and structural_defect(expr, d1, d2):
        raise NotHarmonicError(f"recursion output for {params} is not harmonic")
    return expr


def is_harmonic(expr: PBasisExpr, d1: int, d2: int) -> bool:
    """Direct route: expand and apply the trace Laplacian."""
    q = expand_pbasis(expr, p_alpha_family(expr.n))
    return harmonicity_defect(OperatorParams(expr.n, expr.v, d1, d2), q).is_zero()


# Closed forms ----------------------------------------------------------------

def falling(x, k: int) -> Fraction:
    """Falling factorial ``x (x-1) ... (x-k+1)``."""
    out = Fraction(1)
    x = Fraction(x)
    for i in range(k):
        out *= x - i
    return out


def gbinom(top, k: int) -> Fraction:
    """Binomial coefficient with arbitrary rational top."""
    if k < 0:
        return Fraction(0)
    return falling(top, k) / factorial(k)


def closed_v2(n: int, d1: int, d2: int) -> PBasisExpr:
    coeffs = {}
    for alpha in range(n + 1):
        beta = n - alpha
        c = (-1) ** alpha * factorial(alpha) * factorial(beta) * gbinom(d2 - alpha, beta) * gbinom(d1 - beta, alpha)
        coeffs[tuple(_e(n, alpha))] = c
    return PBasisExpr(n, 2, coeffs, d1, d2, "closed_v2")


def zagier_p(e: int, x, y) -> Fraction:
    x, y = Fraction(x), Fraction(y)
    e2 = e * e
    return (x * x * y * y + (e2 - 1) * x * y * (x + y + Fraction(e2 - 6, 6))
            + Fraction(e2 * (e2 - 4), 12) * (x * x + y * y - Fraction(1, 4)))


def zagier_table(n: int, d1: int, d2: int) -> Dict[Tuple[int, int], Fraction]:
    """Symmetric table ``C_{r,s}`` of the weight-4 solution, 0 <= r, s <= n."""

    def k1(r):
        return d1 + 2 - (n - r)

    def k2(r):
        return d2 + 2 - r

    table = {}
    for r in range(n + 1):
        for s in range(n + 1):
            mid = Fraction(r + s, 2)
            table[(r, s)] = ((-1) ** (r - s) * falling(n - 1 - d1, r) * falling(n - 1 - d1, s)
                             * falling(n - 1 - d2, n - r) * falling(n - 1 - d2, n - s)
                             * zagier_p(r - s, k1(mid), k2(mid)))
    return table


def closed_v4(n: int, d1: int, d2: int) -> PBasisExpr:
    # sum_{i,j} C_ij P_i P_j over ordered pairs: off-diagonal entries count twice
    table = zagier_table(n, d1, d2)
    coeffs: Dict[MultiIndex, Fraction] = {}
    for (r, s), c in table.items():
        a = [0] * (n + 1)
        a[r] += 1
        a[s] += 1
        a = tuple(a)
        coeffs[a] = coeffs.get(a, 0) + c
    return PBasisExpr(n, 4, coeffs, d1, d2, "closed_v4")


def zagier_recurrence_failures(table, n: int, d1: int, d2: int) -> List[Tuple[int, int]]:
    """(r, s) where the four-term recurrence fails.

    Only the interior ``1 <= r <= n-1, 0 <= s <= n-1`` is checked, where all
    four table entries exist; at the edges the relation would need values
    outside the table.
    """

    def k1(x):
        return d1 + 2 - (n - Fraction(x))

    def k2(x):
        return d2 + 2 - Fraction(x)

    def C(r, s):
        return table.get((r, s), 0)

    bad = []
    for r in range(1, n):
        for s in range(n):
            lhs = k1(r + 3) * C(r, s) + k2(r + 2) * C(r + 1, s)
            rhs = k1(r - 2) * C(r - 1, s + 1) + k2(r - 3) * C(r, s + 1)
            if lhs != rhs:
                bad.append((r, s))
    return bad


def cohen_n1(v: int, d1: int, d2: int) -> PBasisExpr:
    """Genus-one solution of degree ``v`` in (P_0, P_1), i.e. weight ``2v``."""
    if d1 % 2 or d2 % 2:
        raise ValueError("cohen_n1 needs even d1, d2; use solve_recursion for odd values")
    coeffs = {}
    for r in range(v + 1):
        s = v - r
        coeffs[(r, s)] = (-1) ** r * comb(v + d2 // 2 - 1, r) * comb(v + d1 // 2 - 1, s)
    return PBasisExpr(1, 2 * v, coeffs, d1, d2, "cohen")


def genus2_product_table(v: int, d1: int, d2: int) -> Dict[Tuple[int, int, int], Fraction]:
    """Raw ``C_{r,s,p}`` on ``(P*_0)^r (P*_2)^s (P*_1)^p`` with r + s + p = v."""
    a1 = Fraction(d1, 2) - Fraction(3, 2) + v
    a2 = Fraction(d2, 2) - Fraction(3, 2) + v
    a3 = -(Fraction(d1 + d2, 2) - Fraction(3, 2) + v)
    table = {}
    for r in range(v + 1):
        for s in range(v + 1 - r):
            p = v - r - s
            table[(r, s, p)] = (falling(a1, v - r) * falling(a2, v - s) * falling(a3, v - p)
                                / (factorial(r) * factorial(s) * factorial(p)))
    return table


def neighbour_relation_failures(table, d1: int, d2: int, p_factor: str = "p+1") -> List[Tuple[str, Tuple[int, int, int]]]:
    """Positions where the first-order relations between neighbours fail.

    For r + s + p = v - 1 and ``X = (d1+d2-3)/2 + f(p)``::

        (r+1)((d1-3)/2 + r+1) C[r+1,s,p] + (p+1) X C[r,s,p+1] = 0
        (s+1)((d2-3)/2 + s+1) C[r,s+1,p] + (p+1) X C[r,s,p+1] = 0

    ``p_factor="p+1"`` takes ``f(p) = p + 1``; the product-formula table only
    satisfies that for v = 1.  ``p_factor="2v-p-1"`` is the ratio the table
    actually has (it comes from the falling factorial in the third argument).
    """
    if p_factor not in ("p+1", "2v-p-1"):
        raise ValueError(f"unknown p_factor {p_factor!r}")
    v = sum(next(iter(table)))
    bad = []

    def C(r, s, p):
        return table.get((r, s, p), 0)

    for r in range(v):
        for s in range(v - r):
            p = v - 1 - r - s
            f = p + 1 if p_factor == "p+1" else 2 * v - p - 1
            tail = (p + 1) * (Fraction(d1 + d2 - 3, 2) + f) * C(r, s, p + 1)
            if (r + 1) * (Fraction(d1 - 3, 2) + r + 1) * C(r + 1, s, p) + tail:
                bad.append(("first", (r, s, p)))
            if (s + 1) * (Fraction(d2 - 3, 2) + s + 1) * C(r, s + 1, p) + tail:
                bad.append(("second", (r, s, p)))
    return bad


def choie_eholzer_n2(v: int, d1: int, d2: int) -> PBasisExpr:
    """Genus-two solution of weight ``2v``, converted from P* to the P basis."""
    table = genus2_product_table(v, d1, d2)
    coeffs: Dict[MultiIndex, Fraction] = {}
    # (P*_1)^p = (P_0 + P_1 + P_2)^p by the multinomial theorem
    for (r, s, p), c in table.items():
        for i in range(p + 1):
            for j in range(p + 1 - i):
                k = p - i - j
                mult = factorial(p) // (factorial(i) * factorial(j) * factorial(k))
                a = (r + i, j, s + k)
                coeffs[a] = coeffs.get(a, 0) + c * mult
    return PBasisExpr(2, 2 * v, coeffs, d1, d2, "genus2_product")


def proportional_equal(x: PBasisExpr, y: PBasisExpr) -> Optional[Fraction]:
    """The scalar ``c`` with ``x == c * y``, or None."""
    if (x.n, x.v) != (y.n, y.v):
        raise ValueError("expressions live in different spaces")
    if x.is_zero() and y.is_zero():
        return Fraction(1)
    if x.is_zero() or y.is_zero():
        return None
    top = max(y.coeffs)
    if top not in x.coeffs:
        return None
    c = x.coeffs[top] / y.coeffs[top]
    if set(x.coeffs) != set(y.coeffs):
        return None
    if all(x.coeffs[a] == c * y.coeffs[a] for a in y.coeffs):
        return c
    return None


# Kernel computation ----------------------------------------------------------

@dataclass
class KernelResult:
    dimension: int
    basis: List[PBasisExpr] = field(default_factory=list)
    unknowns: List[MultiIndex] = field(default_factory=list)


def kernel_dimension(params: OperatorParams, cost_cap: int = 400) -> KernelResult:
    """Dimension of the harmonic subspace, by exact elimination on expanded polynomials.

    Independent of the recursion: every monomial ``prod P^a`` is expanded,
    the trace Laplacian applied, and the null space of the resulting
    coefficient matrix computed.
    """
    params.require_even()
    half = params.v // 2
    unknowns = index_set(params.n, half)
    if len(unknowns) > cost_cap:
        raise CostCapError(f"{len(unknowns)} unknowns exceed the cost cap {cost_cap}; try smaller n or v")
    fam = p_alpha_family(params.n)
    images = []
    for a in unknowns:
        mono = PBasisExpr(params.n, params.v, {a: 1})
        images.append(harmonicity_defect(params, expand_pbasis(mono, fam)))
    all_monos = set()
    for img in images:
        all_monos.update(m for m, _ in img.items())
    ech = RowEchelon(len(unknowns))
    cols = [img.terms for img in images]
    for m in sorted(all_monos):
        if ech.full():
            break
        ech.add_row([col.get(m, 0) for col in cols])
    basis = []
    for vec in ech.nullspace():
        basis.append(PBasisExpr(params.n, params.v, dict(zip(unknowns, vec)),
                                params.d1, params.d2, "kernel"))
    return KernelResult(len(basis), basis, unknowns)

"""Applying the operators: genus-one brackets and the singular-pair cusp test.

Genus-one forms are truncated q-expansions.  The bracket uses
``theta = q d/dq`` in place of ``(2 pi i)^-1 d/dz``, which changes the
result only by a nonzero overall constant and keeps everything rational.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from sympy import bernoulli, divisor_sigma

from .exactpoly import SLOT_R, SLOT_RP, matvar
from .laplace import OperatorParams
from .linalg import det
from .pencil import expand_pbasis, p_alpha_family
from .rcsolve import PBasisExpr, cohen_n1, solve_recursion

DEFAULT_TRUNCATION = 50


@dataclass(frozen=True)
class QExpansion:
    """``sum_{m < truncation} c_m q^m + O(q^truncation)`` with a weight tag."""

    weight: int
    coefficients: Tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(Fraction(c) for c in self.coefficients))

    @property
    def truncation(self) -> int:
        return len(self.coefficients)

    def __getitem__(self, m: int) -> Fraction:
        return self.coefficients[m]

    def _pair(self, other: "QExpansion"):
        n = min(self.truncation, other.truncation)
        return self.coefficients[:n], other.coefficients[:n]

    def __add__(self, other: "QExpansion") -> "QExpansion":
        if self.weight != other.weight:
            raise ValueError("adding expansions of different weights")
        a, b = self._pair(other)
        return QExpansion(self.weight, tuple(x + y for x, y in zip(a, b)))

    def scale(self, c) -> "QExpansion":
        return QExpansion(self.weight, tuple(x * c for x in self.coefficients))

    def __mul__(self, other: "QExpansion") -> "QExpansion":
        a, b = self._pair(other)
        n = len(a)
        out = [Fraction(0)] * n
        for i, x in enumerate(a):
            if x:
                for j in range(n - i):
                    out[i + j] += x * b[j]
        return QExpansion(self.weight + other.weight, tuple(out))

    def theta(self, times: int = 1) -> "QExpansion":
        """``(q d/dq)^times``; the weight tag is left alone."""
        return QExpansion(self.weight, tuple(c * m ** times for m, c in enumerate(self.coefficients)))

    def to_json(self) -> dict:
        return {
            "weight": self.weight,
            "truncation": self.truncation,
            "coefficients": [f"{c.numerator}/{c.denominator}" for c in self.coefficients],
        }

    @classmethod
    def from_json(cls, data: dict) -> "QExpansion":
        coeffs = [Fraction(c) for c in data["coefficients"]]
        if "truncation" in data and data["truncation"] != len(coeffs):
            raise ValueError(f"truncation {data['truncation']} but {len(coeffs)} coefficients")
        return cls(int(data["weight"]), tuple(coeffs))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def eisenstein(k: int, N: int = DEFAULT_TRUNCATION) -> QExpansion:
    """Normalised ``E_k = 1 - (2k / B_k) sum sigma_{k-1}(m) q^m``."""
    if k < 4 or k % 2:
        raise ValueError("Eisenstein series need even k >= 4")
    bk = bernoulli(k)
    factor = -Fraction(2 * k) / Fraction(int(bk.p), int(bk.q))
    coeffs = [Fraction(1)] + [factor * int(divisor_sigma(m, k - 1)) for m in range(1, N)]
    return QExpansion(k, tuple(coeffs[:N]))


def delta(N: int = DEFAULT_TRUNCATION) -> QExpansion:
    """``q prod_{m>=1} (1 - q^m)^24``."""
    series = [0] * N
    if N > 1:
        series[1] = 1
    for m in range(1, N):
        for _ in range(24):
            # multiply in place by (1 - q^m), highest degree first
            for i in range(N - 1, m - 1, -1):
                series[i] -= series[i - m]
    return QExpansion(12, tuple(Fraction(c) for c in series))


def rc_bracket_genus1(f: QExpansion, g: QExpansion, t: int,
                      expr: Optional[PBasisExpr] = None) -> QExpansion:
    """Order-``t`` bracket ``sum_{r+s=t} C_{r,s} theta^r f theta^s g``.

    The coefficients come from the genus-one invariant of weight ``2t`` for
    ``(d1, d2) = (2k, 2l)``; ``P_0`` acts on ``f`` and ``P_1`` on ``g``.
    """
    k, l = f.weight, g.weight
    if k <= 0 or l <= 0 or k % 2 or l % 2:
        raise ValueError(f"weights must be even and positive, got {k}, {l}")
    if t < 0:
        raise ValueError("bracket order must be >= 0")
    if expr is None:
        expr = cohen_n1(t, 2 * k, 2 * l)
    n = min(f.truncation, g.truncation)
    total = [Fraction(0)] * n
    for (r, s), c in expr.coeffs.items():
        prod = f.theta(r) * g.theta(s)
        for m in range(n):
            total[m] += c * prod.coefficients[m]
    return QExpansion(k + l + 2 * t, tuple(total))


def proportionality(x: QExpansion, y: QExpansion) -> Optional[Fraction]:
    """The scalar ``c`` with ``x == c * y`` on the common truncation, or None."""
    a, b = x._pair(y)
    c = None
    for xa, yb in zip(a, b):
        if yb == 0:
            if xa != 0:
                return None
            continue
        ratio = xa / yb
        if c is None:
            c = ratio
        elif ratio != c:
            return None
    return c if c is not None else (Fraction(1) if not any(a) else None)


# Cusp test for arbitrary genus ------------------------------------------------

@dataclass(frozen=True)
class HalfIntegralMatrix:
    """Half-integral symmetric matrix stored as ``2T`` (integral, even diagonal)."""

    doubled: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        m = self.doubled
        n = len(m)
        if any(len(row) != n for row in m):
            raise ValueError("matrix must be square")
        if any(m[i][j] != m[j][i] for i in range(n) for j in range(n)):
            raise ValueError("matrix must be symmetric")
        if any(m[i][i] % 2 for i in range(n)):
            raise ValueError("2T must have even diagonal")

    @property
    def genus(self) -> int:
        return len(self.doubled)

    def entry(self, i: int, j: int) -> Fraction:
        return Fraction(self.doubled[i][j], 2)

    def matrix(self) -> List[List[Fraction]]:
        n = self.genus
        return [[self.entry(i, j) for j in range(n)] for i in range(n)]

    def is_psd(self) -> bool:
        return is_psd(self.matrix())

    def __add__(self, other: "HalfIntegralMatrix") -> "HalfIntegralMatrix":
        n = self.genus
        return HalfIntegralMatrix(tuple(tuple(self.doubled[i][j] + other.doubled[i][j] for j in range(n))
                                        for i in range(n)))


def is_psd(m: Sequence[Sequence[Fraction]]) -> bool:
    """Exact test: every principal minor is non-negative."""
    n = len(m)
    from itertools import combinations

    for k in range(1, n + 1):
        for idx in combinations(range(n), k):
            if det([[m[i][j] for j in idx] for i in idx]) < 0:
                return False
    return True


def _matmul(A, B):
    return [[sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(len(B[0]))] for i in range(len(A))]


def _transpose(A):
    return [list(r) for r in zip(*A)]


def _random_unimodular(rng: random.Random, n: int):
    A = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(2 * n):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if i == j:
            break
        c = rng.choice([-1, 1])
        # row operation keeps det = 1
        A[i] = [a + c * b for a, b in zip(A[i], A[j])]
    return A


def random_singular_pair(rng: random.Random, n: int) -> Tuple[HalfIntegralMatrix, HalfIntegralMatrix]:
    """PSD half-integral ``T1, T2`` with ``det(T1 + T2) = 0``.

    Both are Gram matrices ``M^t M`` supported on the first ``n-1``
    coordinates, then moved by a common random unimodular change of basis.
    """
    U = _random_unimodular(rng, n)
    out = []
    for _ in range(2):
        rows = rng.randint(1, n)
        M = [[rng.randint(-2, 2) for _ in range(n - 1)] + [0] for _ in range(rows)]
        T = _matmul(_transpose(M), M)
        T = _matmul(_matmul(_transpose(U), T), U)
        # 2T with T integral has even diagonal
        out.append(HalfIntegralMatrix(tuple(tuple(2 * x for x in row) for row in T)))
    return out[0], out[1]


def evaluation_point(T1: HalfIntegralMatrix, T2: HalfIntegralMatrix) -> dict:
    n = T1.genus
    point = {}
    for i in range(n):
        for j in range(i, n):
            point[matvar(SLOT_R, i + 1, j + 1)] = T1.entry(i, j)
            point[matvar(SLOT_RP, i + 1, j + 1)] = T2.entry(i, j)
    return point


def _scalar(n: int, c: int) -> HalfIntegralMatrix:
    return HalfIntegralMatrix(tuple(tuple(2 * c * int(i == j) for j in range(n)) for i in range(n)))


def nonsingular_witness(q, n: int, degree: int):
    """First ``c = 1, 2, ...`` with ``Q(1, c*1) != 0``.

    ``Q(1, c*1)`` is a polynomial in ``c`` of degree at most ``n * degree``, so
    a nonzero ``Q`` is caught within ``n * degree + 1`` steps.  (At ``c = 1``
    it can vanish, e.g. genus 3, weight 2, d1 = d2 = 6.)
    """
    value = Fraction(0)
    for c in range(1, n * degree + 2):
        value = q.evaluate(evaluation_point(_scalar(n, 1), _scalar(n, c)))
        if value:
            return [1, c], value
    return [1, n * degree + 1], value


def cusp_vanishing_check(params: OperatorParams, trials: int = 100, seed: int = 0,
                         expr: Optional[PBasisExpr] = None) -> dict:
    """Evaluate the expanded invariant on random singular PSD pairs; all must vanish."""
    if params.v <= 0:
        raise ValueError("the cusp property concerns non-constant invariants (v > 0)")
    if expr is None:
        expr = solve_recursion(params)
    q = expand_pbasis(expr, p_alpha_family(params.n))
    n = params.n
    records = []
    zero = HalfIntegralMatrix(tuple(tuple(0 for _ in range(n)) for _ in range(n)))
    records.append({"trial": "zero", "value": str(q.evaluate(evaluation_point(zero, zero))), })
    records[-1]["pass"] = records[-1]["value"] == "0"
    for k in range(trials):
        rng = random.Random(f"{seed}:{k}")
        T1, T2 = random_singular_pair(rng, n)
        assert T1.is_psd() and T2.is_psd()
        assert det((T1 + T2).matrix()) == 0
        value = q.evaluate(evaluation_point(T1, T2))
        records.append({"trial": k, "T1": [list(r) for r in T1.doubled], "T2": [list(r) for r in T2.doubled],
                        "value": str(value), "pass": value == 0})
    sanity_point, sanity = nonsingular_witness(q, n, params.half)
    return {
        "n": n, "v": params.v, "d1": params.d1, "d2": params.d2, "seed": seed,
        "trials": records,
        "passed": sum(r["pass"] for r in records if r["trial"] != "zero"),
        "all_pass": all(r["pass"] for r in records),
        "nonsingular_point": sanity_point,
        "nonsingular_value": str(sanity),
        "nonsingular_nonzero": sanity != 0,
    }

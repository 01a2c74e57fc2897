"""Vector-valued harmonic families for ``det^v Sym^m``.

A family is stored through its generating polynomial ``Q(S, S')`` in
``R, R', u``; the components are the coefficients of the monomials ``u^nu``.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Dict, List, Optional, Tuple

from .exactpoly import SLOT_R, SLOT_RP, SLOT_U, Poly, U, congruence_bindings, matvar, poly_sum
from .laplace import OperatorParams, TrivialSpaceError, harmonicity_defect
from .linalg import det
from .pencil import expand_pbasis, p_alpha_family
from .rcsolve import PBasisExpr, choie_eholzer_n2, solve_recursion

Nu = Tuple[int, ...]


class NotHarmonicError(ArithmeticError):
    pass


def multi_indices(n: int, m: int) -> List[Nu]:
    """All ``nu`` with ``|nu| = m``, ``u_1^m`` first (descending lex)."""
    if n == 1:
        return [(m,)]
    out = []
    for first in range(m, -1, -1):
        out.extend((first,) + rest for rest in multi_indices(n - 1, m - first))
    return out


def u_monomial(nu: Nu) -> Tuple:
    return tuple((U(i + 1), e) for i, e in enumerate(nu) if e)


@dataclass(frozen=True)
class VecPoly:
    n: int
    m: int
    v: int
    components: Tuple[Tuple[Nu, Poly], ...]

    def __post_init__(self):
        if len(self.components) != comb(self.m + self.n - 1, self.n - 1):
            raise ValueError("component count does not match binomial(m+n-1, n-1)")
        degrees = {p.total_degree() for _, p in self.components if p}
        if len(degrees) > 1:
            raise ValueError(f"components have mixed degrees {sorted(degrees)}")

    def __getitem__(self, nu) -> Poly:
        for key, p in self.components:
            if key == tuple(nu):
                return p
        raise KeyError(nu)

    def generating(self) -> Poly:
        """``sum_nu Q_nu u^nu``."""
        return poly_sum(p * Poly({u_monomial(nu): 1}) for nu, p in self.components)

    @classmethod
    def from_generating(cls, q: Poly, n: int, m: int, v: int) -> "VecPoly":
        parts = q.collect(SLOT_U)
        comps = []
        for nu in multi_indices(n, m):
            comps.append((nu, parts.pop(u_monomial(nu), Poly())))
        if any(p for p in parts.values()):
            raise ValueError(f"generating polynomial is not homogeneous of degree {m} in u")
        return cls(n, m, v, tuple(comps))

    def to_json(self) -> dict:
        return {"n": self.n, "m": self.m, "v": self.v,
                "components": [{"nu": list(nu), "poly": p.to_text()} for nu, p in self.components]}

    @classmethod
    def from_json(cls, data: dict) -> "VecPoly":
        comps = tuple((tuple(c["nu"]), Poly.from_text(c["poly"])) for c in data["components"])
        return cls(int(data["n"]), int(data["m"]), int(data["v"]), comps)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def quadratic_forms(n: int) -> Tuple[Poly, Poly]:
    """``S = u^t R u`` and ``S' = u^t R' u``."""
    out = []
    for slot in (SLOT_R, SLOT_RP):
        parts = []
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                parts.append(Poly.var(matvar(slot, i, j)) * Poly.var(U(i)) * Poly.var(U(j)))
        out.append(poly_sum(parts))
    return out[0], out[1]


def _genus1_poly(m: int, d1: int, d2: int) -> Poly:
    expr = solve_recursion(OperatorParams(1, m, d1, d2))
    return expand_pbasis(expr, p_alpha_family(1))


def _at_forms(f: Poly, S: Poly, Sp: Poly) -> Poly:
    # genus-one variables r = R[1,1], r' = Rp[1,1]
    return f.substitute({matvar(SLOT_R, 1, 1): S, matvar(SLOT_RP, 1, 1): Sp})


def harmonicity_report(vp: VecPoly, d1: int, d2: int) -> Dict[Nu, bool]:
    params = OperatorParams(vp.n, 0, d1, d2)
    return {nu: harmonicity_defect(params, p).is_zero() for nu, p in vp.components}


def lift_symmetric(n: int, m: int, d1: int, d2: int, base: Optional[Poly] = None) -> VecPoly:
    """Components of ``Q(S, S')`` for the genus-one element ``Q`` of weight ``m``."""
    if m % 2:
        raise TrivialSpaceError("trivial space: m must be even")
    if base is None:
        base = _genus1_poly(m, d1, d2)
    S, Sp = quadratic_forms(n)
    return VecPoly.from_generating(_at_forms(base, S, Sp), n, m, 0)


def mixed_generating(m: int, d1: int, d2: int, half: Fraction = Fraction(1, 2),
                     pairing: str = "cross") -> Poly:
    """Generating polynomial of the genus-2 family for ``det^2 Sym^m``.

    ``Q2 F(S,S') + half ((d2-1) P0 S' - (d1-1) P2 S)(dF/dr - dF/ds)(S,S')``
    where ``Q2`` is the weight-2 genus-2 element with the product-formula
    normalisation and ``F`` the genus-one element of weight ``m`` for
    ``(d1+2, d2+2)``.  ``pairing="same-side"`` pairs ``P0`` with ``S`` and
    ``P2`` with ``S'`` instead; that version is harmonic only for m = 0.
    """
    if pairing not in ("cross", "same-side"):
        raise ValueError(f"unknown pairing {pairing!r}")
    fam = p_alpha_family(2)
    q2 = expand_pbasis(choie_eholzer_n2(1, d1, d2), fam)
    F = _genus1_poly(m, d1 + 2, d2 + 2)
    r, s = matvar(SLOT_R, 1, 1), matvar(SLOT_RP, 1, 1)
    dF = F.partial(r) - F.partial(s)
    S, Sp = quadratic_forms(2)
    with_p0, with_p2 = (Sp, S) if pairing == "cross" else (S, Sp)
    lead = q2 * _at_forms(F, S, Sp)
    corr = (fam[0] * with_p0 * (d2 - 1) - fam[2] * with_p2 * (d1 - 1)) * _at_forms(dF, S, Sp)
    return lead + corr.scale(half)


def mixed_m2_genus2(m: int, d1: int, d2: int, check: bool = True, pairing: str = "cross") -> VecPoly:
    """The genus-2 family for ``det^2 Sym^m``; components are checked harmonic."""
    if m % 2:
        raise TrivialSpaceError("trivial space: m must be even")
    if d1 < 4 or d2 < 4:
        raise ValueError(f"the mixed construction needs d1, d2 >= 4, got {d1}, {d2}")
    vp = VecPoly.from_generating(mixed_generating(m, d1, d2, pairing=pairing), 2, m, 2)
    if check:
        bad = [nu for nu, ok in harmonicity_report(vp, d1, d2).items() if not ok]
        if bad:
            raise NotHarmonicError(f"components {bad} are not harmonic")
    return vp


def explicit_42(d1: int, d2: int, e: Optional[int] = None) -> Poly:
    """Coefficient table for the ``det^2 Sym^2`` generating polynomial.

    The ``P2 S`` coefficient is ``(d1-1)(d1+2)(e+4)``.  With ``e = d2``
    (the default) this is harmonic; ``e = d1`` is harmonic only when d1 = d2.
    """
    e = d2 if e is None else e
    fam = p_alpha_family(2)
    S, Sp = quadratic_forms(2)
    P0, P1, P2 = fam[0], fam[1], fam[2]
    terms = [
        P0 * S * ((d2 - 1) * d2 * (d2 + 2)),
        P1 * S * (-(d1 - 1) * (d2 - 1) * (d2 + 2)),
        P2 * S * ((d1 - 1) * (d1 + 2) * (e + 4)),
        P0 * Sp * (-(d1 + 4) * (d2 - 1) * (d2 + 2)),
        P1 * Sp * ((d1 - 1) * (d1 + 2) * (d2 - 1)),
        P2 * Sp * (-d1 * (d1 - 1) * (d1 + 2)),
    ]
    return poly_sum(terms)


def compare_explicit_42(d1: int, d2: int) -> dict:
    """How the coefficient table relates to the construction at m = 2 (report only)."""
    built = mixed_generating(2, d1, d2)
    out = {"d1": d1, "d2": d2}
    for label, e in (("d2", d2), ("d1", d1)):
        table = explicit_42(d1, d2, e)
        ratio = _ratio(table, built)
        vp = VecPoly.from_generating(table, 2, 2, 2)
        out[f"e_is_{label}"] = {
            "proportional": ratio is not None,
            "ratio": None if ratio is None else str(ratio),
            "harmonic": all(harmonicity_report(vp, d1, d2).values()),
        }
    same_side = VecPoly.from_generating(mixed_generating(2, d1, d2, pairing="same-side"), 2, 2, 2)
    out["same_side_harmonic"] = all(harmonicity_report(same_side, d1, d2).values())
    return out


def _ratio(x: Poly, y: Poly) -> Optional[Fraction]:
    if not y:
        return None
    mono, c = next(iter(y.items()))
    k = Fraction(x.terms.get(mono, 0)) / Fraction(c)
    return k if x == y.scale(k) else None


# Equivariance ----------------------------------------------------------------

def _random_matrix(rng: random.Random, n: int) -> List[List[int]]:
    if rng.random() < 0.5:
        # diagonal with small nonzero entries
        return [[rng.choice([-2, -1, 1, 2, 3]) if i == j else 0 for j in range(n)] for i in range(n)]
    A = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(3 * n):
        if n == 1:
            A[0][0] *= rng.choice([-1, 1])
            continue
        i, j = rng.sample(range(n), 2)
        c = rng.choice([-1, 1])
        A[i] = [a + c * b for a, b in zip(A[i], A[j])]
    return A


def equivariance_holds(q: Poly, n: int, det_power: int, A) -> bool:
    """``Q(A^t R A, A^t R' A, u) == det(A)^det_power Q(R, R', A u)``."""
    lhs = q.substitute({**congruence_bindings(SLOT_R, A), **congruence_bindings(SLOT_RP, A)})
    u_map = {U(i + 1): poly_sum(Poly.var(U(j + 1)) * A[i][j] for j in range(n) if A[i][j])
             for i in range(n)}
    rhs = q.substitute(u_map).scale(det(A) ** det_power)
    return lhs == rhs


def verify_equivariance(vp: VecPoly, n: int, trials: int = 20, seed: int = 0) -> dict:
    if n != vp.n:
        raise ValueError(f"genus mismatch: family has n={vp.n}")
    q = vp.generating()
    records = [{"trial": "identity", "A": [[int(i == j) for j in range(n)] for i in range(n)]}]
    records[0]["pass"] = equivariance_holds(q, n, vp.v, records[0]["A"])
    for k in range(trials):
        A = _random_matrix(random.Random(f"{seed}:{k}"), n)
        records.append({"trial": k, "A": A, "pass": equivariance_holds(q, n, vp.v, A)})
    return {"n": n, "m": vp.m, "v": vp.v, "seed": seed, "trials": records,
            "all_pass": all(r["pass"] for r in records)}

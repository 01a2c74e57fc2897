from fractions import Fraction
from math import comb

import pytest

from rcsiegel.exactpoly import Poly, R, Rp
from rcsiegel.pencil import expand_pbasis, p_alpha_family
from rcsiegel.rcsolve import choie_eholzer_n2, solve_recursion
from rcsiegel.laplace import OperatorParams, TrivialSpaceError
from rcsiegel.vectorops import (NotHarmonicError, VecPoly, compare_explicit_42, equivariance_holds,
                                harmonicity_report, lift_symmetric, mixed_generating, mixed_m2_genus2,
                                multi_indices, explicit_42, verify_equivariance)


def test_multi_indices():
    assert multi_indices(2, 2) == [(2, 0), (1, 1), (0, 2)]
    assert len(multi_indices(3, 4)) == comb(6, 2)


@pytest.mark.parametrize("m", [0, 2, 4, 6])
def test_genus_one_lift_is_identity(m):
    vp = lift_symmetric(1, m, 4, 6)
    base = expand_pbasis(solve_recursion(OperatorParams(1, m, 4, 6)), p_alpha_family(1))
    assert len(vp.components) == 1
    assert vp[(m,)] == base


def test_first_lift_components():
    vp = lift_symmetric(2, 2, 4, 6)
    x = lambda v: Poly.var(v)
    # up to scale: d2 S - d1 S'
    k = Fraction(vp[(2, 0)].terms[((R(1, 1), 1),)], 6)
    assert vp[(2, 0)] == (x(R(1, 1)) * 6 - x(Rp(1, 1)) * 4).scale(k)
    assert vp[(1, 1)] == (x(R(1, 2)) * 12 - x(Rp(1, 2)) * 8).scale(k)
    assert vp[(0, 2)] == (x(R(2, 2)) * 6 - x(Rp(2, 2)) * 4).scale(k)


@pytest.mark.parametrize("n,m", [(2, 2), (2, 4), (3, 2), (3, 4)])
def test_lift_harmonic_and_counted(n, m):
    d = 2 * n + 2
    vp = lift_symmetric(n, m, d, d + 1)
    assert len(vp.components) == comb(m + n - 1, n - 1)
    assert all(harmonicity_report(vp, d, d + 1).values())


def test_odd_degree():
    with pytest.raises(TrivialSpaceError):
        lift_symmetric(2, 3, 4, 4)
    with pytest.raises(TrivialSpaceError):
        mixed_m2_genus2(1, 6, 6)


@pytest.mark.parametrize("m", [0, 2, 4])
@pytest.mark.parametrize("d1,d2", [(6, 6), (6, 8), (5, 9)])
def test_mixed_harmonic(m, d1, d2):
    vp = mixed_m2_genus2(m, d1, d2)
    assert vp.v == 2 and len(vp.components) == m + 1


def test_mixed_weight_zero_is_scalar_invariant():
    vp = mixed_m2_genus2(0, 6, 6)
    q2 = expand_pbasis(choie_eholzer_n2(1, 6, 6), p_alpha_family(2))
    assert _ratio(vp[(0, 0)], q2) is not None


def _ratio(a, b):
    m, c = next(iter(b.items()))
    k = Fraction(a.terms.get(m, 0)) / c
    return k if a == b.scale(k) else None


def test_same_side_pairing_is_not_harmonic():
    with pytest.raises(NotHarmonicError):
        mixed_m2_genus2(2, 6, 6, pairing="same-side")
    # for m = 0 the correction term vanishes and both agree
    assert mixed_m2_genus2(0, 6, 8, pairing="same-side") == mixed_m2_genus2(0, 6, 8)


def test_mixed_needs_large_d():
    with pytest.raises(ValueError):
        mixed_m2_genus2(2, 3, 6)


@pytest.mark.parametrize("d1,d2", [(4, 4), (6, 8), (5, 9)])
def test_explicit_four_two_table(d1, d2):
    rep = compare_explicit_42(d1, d2)
    assert rep["e_is_d2"]["proportional"] and rep["e_is_d2"]["harmonic"]
    assert not rep["same_side_harmonic"]
    if d1 != d2:
        assert not rep["e_is_d1"]["harmonic"]


def test_equivariance_examples():
    vp = lift_symmetric(2, 2, 4, 4)
    q = vp.generating()
    assert equivariance_holds(q, 2, 0, [[1, 0], [0, 1]])
    assert equivariance_holds(q, 2, 0, [[1, 0], [0, -1]])
    assert equivariance_holds(q, 2, 0, [[1, 1], [0, 1]])
    mixed = mixed_m2_genus2(2, 6, 6).generating()
    assert equivariance_holds(mixed, 2, 2, [[2, 0], [0, 1]])
    # the wrong determinant power is detected
    assert not equivariance_holds(mixed, 2, 4, [[2, 0], [0, 1]])


@pytest.mark.parametrize("make", [lambda: lift_symmetric(3, 2, 8, 8), lambda: mixed_m2_genus2(2, 6, 8)])
def test_random_equivariance(make):
    vp = make()
    assert verify_equivariance(vp, vp.n, trials=10, seed=1)["all_pass"]


def test_vecpoly_round_trip():
    for vp in (lift_symmetric(3, 2, 8, 8), mixed_m2_genus2(2, 6, 6)):
        back = VecPoly.from_json(vp.to_json())
        assert back == vp
        assert back.dumps() == vp.dumps()


def test_vecpoly_validation():
    with pytest.raises(ValueError):
        VecPoly(2, 2, 0, (((2, 0), Poly()),))
    with pytest.raises(ValueError):
        VecPoly.from_generating(explicit_42(6, 6), 2, 4, 2)

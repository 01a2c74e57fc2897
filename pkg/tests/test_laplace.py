import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from rcsiegel.exactpoly import Poly, R, Rp
from rcsiegel.laplace import (OperatorParams, TrivialSpaceError, apply_L, apply_Lprime, harmonicity_defect,
                              pairing, structural_defect, structural_to_poly, trace_minor_rank,
                              verify_lemma_deltagrad)
from rcsiegel.pencil import expand_pbasis, p_alpha_family
from rcsiegel.rcsolve import PBasisExpr, index_set

from conftest import polys

r, rp = Poly.var(R(1, 1)), Poly.var(Rp(1, 1))


def test_params_validation():
    with pytest.raises(ValueError):
        OperatorParams(0, 2, 1, 1)
    with pytest.raises(ValueError):
        OperatorParams(1, -2, 1, 1)
    with pytest.raises(ValueError):
        OperatorParams(1, 2, 0, 1)
    with pytest.raises(TrivialSpaceError, match="trivial space: v must be even"):
        OperatorParams(1, 3, 1, 1).half


@given(polys(n=1, max_exp=4), st.integers(1, 9))
def test_genus_one_operator(q, d):
    # at genus 1 the operator is 2d q_r + 4 r q_rr
    got = apply_L(OperatorParams(1, 0, d, 1), 1, 1, q)
    want = q.partial(R(1, 1)).scale(2 * d) + r * q.partial(R(1, 1)).partial(R(1, 1)) * 4
    assert got == want


def test_cohen_weight_two_is_harmonic():
    # d2 r - d1 r' is the degree-one genus-1 element
    assert harmonicity_defect(OperatorParams(1, 2, 4, 6), r * 6 - rp * 4).is_zero()
    assert not harmonicity_defect(OperatorParams(1, 2, 4, 6), r * 4 - rp * 6).is_zero()


@pytest.mark.parametrize("n,d1,d2", [(1, 3, 3), (2, 2, 2), (2, 3, 5), (3, 4, 6)])
def test_pencil_operator_identities(n, d1, d2):
    report = verify_lemma_deltagrad(n, d1, d2)
    assert report and all(rec["pass"] for rec in report), [rec for rec in report if not rec["pass"]]


def test_identity_suite_limit():
    with pytest.raises(ValueError):
        verify_lemma_deltagrad(5, 4, 4)


@given(polys(max_terms=3), polys(max_terms=3), st.integers(1, 2), st.integers(1, 6))
def test_leibniz_rule(q, q2, i, d):
    params = OperatorParams(2, 0, d, d)
    lhs = apply_L(params, i, i, q * q2)
    rhs = apply_L(params, i, i, q) * q2 + q * apply_L(params, i, i, q2) + pairing(q, q2, i, "R", 2) * 8
    assert lhs == rhs
    lhs = apply_Lprime(params, i, i, q * q2)
    rhs = (apply_Lprime(params, i, i, q) * q2 + q * apply_Lprime(params, i, i, q2)
           + pairing(q, q2, i, "Rprime", 2) * 8)
    assert lhs == rhs


@given(polys(), polys(), st.integers(1, 7), st.integers(1, 7))
def test_defect_is_linear(q, q2, d1, d2):
    params = OperatorParams(2, 0, d1, d2)
    c = Fraction(3, 7)
    assert (harmonicity_defect(params, q + q2.scale(c))
            == harmonicity_defect(params, q) + harmonicity_defect(params, q2).scale(c))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_trace_minors_independent(n):
    assert trace_minor_rank(n) == n


@pytest.mark.parametrize("n,half", [(1, 3), (2, 2), (3, 1), (3, 2)])
def test_structural_route_matches_expansion(n, half):
    # random, generally non-harmonic, expressions
    rng = random.Random(f"{n}:{half}")
    fam = p_alpha_family(n)
    for _ in range(3):
        d1, d2 = rng.randint(1, 8), rng.randint(1, 8)
        coeffs = {a: Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for a in index_set(n, half)}
        expr = PBasisExpr(n, 2 * half, coeffs)
        direct = harmonicity_defect(OperatorParams(n, 2 * half, d1, d2), expand_pbasis(expr, fam))
        assert structural_to_poly(structural_defect(expr, d1, d2), n) == direct

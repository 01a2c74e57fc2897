from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from rcsiegel.exactpoly import SLOT_R, SLOT_RP, Poly, R, Rp, congruence_bindings, poly_sum
from rcsiegel.linalg import det
from rcsiegel.pencil import minor_family, p_alpha_family, pencil_determinant


def v(var):
    return Poly.var(var)


def test_genus_one():
    fam = p_alpha_family(1)
    assert fam[0] == v(R(1, 1))
    assert fam[1] == v(Rp(1, 1))
    assert fam[2].is_zero() and fam[-1].is_zero()


def test_genus_two_by_hand():
    fam = p_alpha_family(2)
    assert fam[0] == v(R(1, 1)) * v(R(2, 2)) - v(R(1, 2)) ** 2
    assert fam[1] == (v(R(1, 1)) * v(Rp(2, 2)) + v(Rp(1, 1)) * v(R(2, 2))
                      - v(R(1, 2)) * v(Rp(1, 2)) * 2)
    assert fam[2] == v(Rp(1, 1)) * v(Rp(2, 2)) - v(Rp(1, 2)) ** 2


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("lam", [0, 1, -2, Fraction(3, 5)])
def test_pencil_identity(n, lam):
    fam = p_alpha_family(n)
    assert poly_sum(fam[a].scale(Fraction(lam) ** a) for a in range(n + 1)) == pencil_determinant(n, lam)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_swap_duality(n):
    # exchanging R and R' sends P_alpha to P_{n - alpha}
    fam = p_alpha_family(n)
    swap = {}
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            swap[R(i, j)] = v(Rp(i, j))
            swap[Rp(i, j)] = v(R(i, j))
    for a in range(n + 1):
        assert fam[a].substitute(swap) == fam[n - a]


@given(st.lists(st.integers(-2, 2), min_size=4, max_size=4))
def test_congruence_scales_by_det_squared(entries):
    A = [entries[:2], entries[2:]]
    fam = p_alpha_family(2)
    binds = {**congruence_bindings(SLOT_R, A), **congruence_bindings(SLOT_RP, A)}
    d = det(A)
    for a in range(3):
        assert fam[a].substitute(binds) == fam[a].scale(d * d)


def test_minor_is_literal_determinant():
    # deleting row 1 and column 2 of a 2x2 leaves the single entry (2,1)
    fam = minor_family(2, [1], [2])
    assert fam[0] == v(R(1, 2))
    assert fam[1] == v(Rp(1, 2))


def test_diagonal_minor_of_genus_three():
    fam = minor_family(3, [2], [2])
    assert fam[0] == v(R(1, 1)) * v(R(3, 3)) - v(R(1, 3)) ** 2


@pytest.mark.parametrize("rows,cols", [([1], [1, 2]), ([2, 1], [1, 2]), ([3], [1]), ([1, 2, 3], [1, 2, 3])])
def test_minor_validation(rows, cols):
    with pytest.raises(ValueError):
        minor_family(2, rows, cols)


def test_genus_validation():
    with pytest.raises(ValueError):
        p_alpha_family(0)

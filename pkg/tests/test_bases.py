import pytest

from qcong import bases, forms
from qcong.bases import (Level1Harmonic, build_genus0_basis, build_j_basis,
                         harmonic_series, hauptmodul, hecke_t, j_coefficient,
                         nonconstant_part, pplication_residual)
from qcong.errors import NotCoprimeError, PrecisionExceededError

from helpers import brute_eta_quotient


# -- level 1 ----------------------------------------------------------------

def test_j_basis_first_elements():
    tb = build_j_basis(5, 40)
    assert tb.element(0) == 1
    assert tb.coefficient(1, -1) == 1
    assert tb.coefficient(1, 0) == 0
    assert tb.coefficient(1, 1) == 196884


def test_j_basis_index2_via_hecke_oracle():
    # b(2, 1) = 2 b(2) by the coefficient action of T(2) on the first element
    tb = build_j_basis(2, 10)
    assert tb.coefficient(2, 1) == 2 * forms.j_series(3).coeff(2)
    assert tb.coefficient(2, 1) == 42987520


def test_j_basis_shape():
    tb = build_j_basis(6, 20)
    for m in range(2, 7):
        assert tb.element(m).coeff(-m) == 1
        for e in range(-m + 1, 1):
            assert tb.element(m).coeff(e) == 0


def test_j_basis_integer_mode():
    tb = build_j_basis(8, 15)
    assert all(not s.rational for s in tb.elements.values())


def test_hecke_identity_k1():
    tb = build_j_basis(3, 25)
    act = hecke_t(tb, 1, 1)
    for n in range(1, 20):
        assert act(n) == tb.coefficient(1, n)


def test_hecke_requires_coprime():
    tb = build_j_basis(4, 10)
    with pytest.raises(NotCoprimeError):
        hecke_t(tb, 2, 4)


def test_hecke_vs_reduction_consistency():
    # every index m <= 12 read two ways: reduction table vs coefficient sums
    tb = build_j_basis(12, 40)
    j = forms.j_series(12 * 30 + 1)
    for m in range(1, 13):
        for n in range(1, 31):
            assert j_coefficient(j, m, n) == tb.coefficient(m, n)


def test_hecke_functional_composite_route():
    # apply T(4) to the index-3 element: must equal index-12 coefficients
    tb = build_j_basis(12, 40)
    big = forms.j_series(12 * 39 + 1)
    act = hecke_t(bases.build_j_basis(3, 4 * 39 + 1), 3, 4)
    for n in range(1, 30):
        assert act(n) == tb.coefficient(12, n)


def test_j_basis_prefix_stable_under_higher_precision():
    small = build_j_basis(6, 25)
    big = build_j_basis(6, 60)
    for m in range(7):
        assert big.element(m).truncate(25) == small.element(m)


# -- genus zero -------------------------------------------------------------

def test_hauptmodul_window_vs_eta_oracle():
    t2 = hauptmodul(2, 5)
    oracle = brute_eta_quotient([(1, 24), (2, -24)], 5)
    assert dict(t2.items()) == oracle
    assert [t2.coeff(n) for n in (-1, 0, 1, 2)] == [1, -24, 276, -2048]


def test_genus0_shapes_and_constant_normalization():
    for p in (2, 3, 5, 7):
        tb = build_genus0_basis(p, 4, 12)
        for m in range(1, 5):
            s = tb.element(m)
            assert s.coeff(-m) == 1
            for e in range(-m + 1, 1):
                assert s.coeff(e) == 0


def test_genus0_level7_first_divisibility():
    tb = build_genus0_basis(7, 1, 10)
    assert tb.coefficient(1, 7) % 7 == 0


def test_genus0_prefix_stability():
    small = build_genus0_basis(3, 5, 15)
    big = build_genus0_basis(3, 5, 45)
    for m in range(6):
        assert big.element(m).truncate(15) == small.element(m)


def test_genus0_integer_mode():
    tb = build_genus0_basis(5, 6, 12)
    assert all(not s.rational for s in tb.elements.values())


# -- harmonic view ----------------------------------------------------------

def test_harmonic_constant_convention():
    tb = build_j_basis(6, 12)
    h = Level1Harmonic(tb)
    for m in range(1, 7):
        assert h.c1(m, 0) == 24 * forms.sigma(1, m)
        assert h.c1(m, 3) == tb.coefficient(m, 3)


def test_harmonic_vanishing_conventions():
    from fractions import Fraction
    h = Level1Harmonic(build_j_basis(2, 10))
    assert h.c1(Fraction(1, 2), 5) == 0
    assert h.c1(2, Fraction(5, 3)) == 0
    assert h.c1(0, 5) == 0
    assert h.c1(-1, 5) == 0


def test_harmonic_precision_error():
    h = Level1Harmonic(build_j_basis(2, 10))
    with pytest.raises(PrecisionExceededError):
        h.c1(1, 50)


def test_harmonic_series_constant():
    tb = build_j_basis(3, 12)
    s = harmonic_series(tb, 2)
    assert s.coeff(0) == 24 * forms.sigma(1, 2)
    assert s.coeff(1) == tb.coefficient(2, 1)


# -- u_p consistency against the level-1 series -----------------------------

def test_u11_of_shifted_j_reads_off_eleventh_coefficient():
    j = forms.j_series(12)
    decimated = (j - 744).u_p(11)
    assert decimated.coeff(1) == j.coeff(11)


# -- the prime-index splitting residual -------------------------------------

@pytest.mark.parametrize("p,m", [(2, 1), (3, 1), (5, 5), (7, 2), (2, 4), (3, 6)])
def test_pplication_residual_nonconstant_vanishes(p, m):
    res = pplication_residual(p, m, 60)
    assert nonconstant_part(res).is_zero()


def test_pplication_uses_zero_branch_when_p_does_not_divide_m():
    # residual for p = 3, m = 2 involves no lower harmonic element
    res = pplication_residual(3, 2, 40)
    assert nonconstant_part(res).is_zero()


def test_table_rows_export():
    tb = build_j_basis(2, 4)
    rows = list(tb.rows(n_lo=-2, n_hi=1))
    assert (1, "level1", 2, -2, 1) in rows
    assert all(r[0] == 1 and r[1] == "level1" for r in rows)

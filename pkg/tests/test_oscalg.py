"""Exact-algebra unit and property tests."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quadtomo.oscalg import (
    ANTINORMAL,
    CRational,
    Coefficient,
    DegreeBudgetError,
    NORMAL,
    PhasePolyOperator,
    SYMMETRIC,
    UnknownIdentityError,
    fold_phases,
    hermite_of_quadrature,
    identity_suite,
    normal_ordered_power,
    phase_average,
    phase_shift,
    quadrature_power,
    reorder,
    verify_identity,
    wick_multiply,
)

X = PhasePolyOperator.quadrature()
A = PhasePolyOperator.annihilator()
AD = PhasePolyOperator.creator()
I = PhasePolyOperator.identity()


def frac(a, b=1):
    return Fraction(a, b)


# ---------------------------------------------------------------------------
# wick_multiply
# ---------------------------------------------------------------------------


def test_wick_a_adag():
    # a * ad = ad a + 1
    assert A @ AD == PhasePolyOperator(
        {(1, 1, 0): CRational(1), (0, 0, 0): CRational(1)}
    )


def test_wick_quadrature_square():
    # X^2 = (ad^2 e^{2i phi} + a^2 e^{-2i phi} + 2 ad a + 1)/4, by hand
    expected = PhasePolyOperator(
        {
            (2, 0, 2): CRational(frac(1, 4)),
            (0, 2, -2): CRational(frac(1, 4)),
            (1, 1, 0): CRational(frac(1, 2)),
            (0, 0, 0): CRational(frac(1, 4)),
        }
    )
    assert X @ X == expected


def test_wick_identity_neutral():
    B = (X @ X) @ A + AD * frac(2, 3)
    assert B @ I == B
    assert I @ B == B


def test_wick_budget_error():
    big = PhasePolyOperator.monomial(13, 0)
    with pytest.raises(DegreeBudgetError):
        wick_multiply(big, big)


# small random operators for property tests
def _operators():
    term = st.tuples(
        st.integers(min_value=0, max_value=2),
        st.integers(min_value=0, max_value=2),
        st.integers(min_value=-2, max_value=2),
        st.tuples(
            st.integers(min_value=-3, max_value=3),
            st.integers(min_value=-3, max_value=3),
        ),
    )
    return st.lists(term, min_size=0, max_size=3).map(
        lambda items: PhasePolyOperator(
            {
                (n, m, k): CRational(c_re, c_im)
                for (n, m, k, (c_re, c_im)) in items
            }
        )
    )


@settings(max_examples=60, deadline=None)
@given(_operators(), _operators(), _operators())
def test_wick_associative(a, b, c):
    assert (a @ b) @ c == a @ (b @ c)


@settings(max_examples=60, deadline=None)
@given(_operators(), _operators())
def test_adjoint_antihomomorphism(a, b):
    assert (a @ b).adjoint() == b.adjoint() @ a.adjoint()


@settings(max_examples=40, deadline=None)
@given(_operators())
def test_adjoint_involution(a):
    assert a.adjoint().adjoint() == a


# ---------------------------------------------------------------------------
# quadrature_power / hermite_of_quadrature
# ---------------------------------------------------------------------------


def test_quadrature_power_trivial():
    assert quadrature_power(0) == I
    assert quadrature_power(1) == X


@pytest.mark.parametrize("j", range(2, 9))
def test_quadrature_power_matches_wick(j):
    p = I
    for _ in range(j):
        p = p @ X
    assert quadrature_power(j) == p


@pytest.mark.parametrize("j", range(0, 11))
def test_quadrature_power_parity(j):
    assert all(k % 2 == j % 2 for (_, _, k) in quadrature_power(j).terms)


def test_hermite_small_orders():
    assert hermite_of_quadrature(0) == I
    assert hermite_of_quadrature(1) == PhasePolyOperator(
        {(1, 0, 1): CRational(1), (0, 1, -1): CRational(1)}
    )
    assert hermite_of_quadrature(2) == PhasePolyOperator(
        {(2, 0, 2): CRational(1), (1, 1, 0): CRational(2), (0, 2, -2): CRational(1)}
    )


@pytest.mark.parametrize("n", range(0, 11))
def test_hermite_equals_normal_ordered_power(n):
    assert hermite_of_quadrature(n) == normal_ordered_power(n) * frac(2 ** n)


# ---------------------------------------------------------------------------
# phase_average
# ---------------------------------------------------------------------------


def test_phase_average_values():
    assert phase_average(PhasePolyOperator.phase(2)).is_zero()
    assert phase_average(phase_shift(X, 3)).is_zero()
    const = X @ X @ A  # then strip phases to get a k=0-only operator
    const = PhasePolyOperator(
        {(n, m, 0): c for (n, m, k), c in const.terms.items() if k == 0}
    )
    assert phase_average(const) == const
    # odd phase leaves 2i/(k pi) in the 1/pi slot
    avg = phase_average(PhasePolyOperator.phase(3))
    assert avg.terms[(0, 0, 0)] == Coefficient.over_pi(CRational(0, frac(2, 3)))


def test_fold_phases():
    folded = fold_phases(X @ X)
    # all four terms of X^2 collapse onto phase 0 with a 1/pi factor
    assert set(folded.terms) == {(2, 0, 0), (0, 2, 0), (1, 1, 0), (0, 0, 0)}
    assert folded.terms[(1, 1, 0)] == Coefficient.over_pi(CRational(frac(1, 2)))


# ---------------------------------------------------------------------------
# reorder
# ---------------------------------------------------------------------------


def test_reorder_examples():
    # S{ad a} -> ad a + 1/2
    got = reorder(PhasePolyOperator.monomial(1, 1), SYMMETRIC, NORMAL)
    assert got == PhasePolyOperator(
        {(1, 1, 0): CRational(1), (0, 0, 0): CRational(frac(1, 2))}
    )
    # identity case
    m = PhasePolyOperator.monomial(1, 1)
    assert reorder(m, NORMAL, NORMAL) == m
    # S{ad^2 a^2} -> ad^2 a^2 + 2 ad a + 1/2
    got = reorder(PhasePolyOperator.monomial(2, 2), SYMMETRIC, NORMAL)
    assert got == PhasePolyOperator(
        {
            (2, 2, 0): CRational(1),
            (1, 1, 0): CRational(2),
            (0, 0, 0): CRational(frac(1, 2)),
        }
    )


@settings(max_examples=40, deadline=None)
@given(
    _operators(),
    st.sampled_from([NORMAL, SYMMETRIC, ANTINORMAL]),
    st.sampled_from([NORMAL, SYMMETRIC, ANTINORMAL]),
)
def test_reorder_roundtrip(a, s, r):
    assert reorder(reorder(a, s, r), r, s) == a


def test_reorder_antinormal():
    # a ad = ad a + 1 means :ad a:_{+1} (anti-normal) -> ad a + 1
    got = reorder(PhasePolyOperator.monomial(1, 1), ANTINORMAL, NORMAL)
    assert got == A @ AD


# ---------------------------------------------------------------------------
# verify_identity
# ---------------------------------------------------------------------------


def test_richter_examples():
    rep = verify_identity("RICHTER", n=1, m=1)
    assert rep.passed
    # the kernel itself: C(2,1)^{-1} 2^{-1} H_2(sqrt2 x) = 2x^2 - 1/2 checked
    # at the operator level by averaging to ad a
    rhs = phase_average(hermite_of_quadrature(2)) * frac(1, 2)
    assert rhs == PhasePolyOperator.monomial(1, 1)


def test_main_equiv_example():
    assert verify_identity("MAIN_EQUIV", k=1, n=0).passed


def test_symm_example():
    rep = verify_identity("SYMM", n=1, m=1)
    assert rep.passed


@pytest.mark.parametrize("k", range(0, 9))
@pytest.mark.parametrize("n", [0, 3, 8])
def test_main_equiv_range(k, n):
    assert verify_identity("MAIN_EQUIV", k=k, n=n).passed


@pytest.mark.parametrize("n,m", [(0, 0), (2, 3), (5, 5), (0, 10), (7, 3)])
def test_richter_range(n, m):
    assert verify_identity("RICHTER", n=n, m=m).passed


def test_poisson_even_zero_reproduces_comb_average():
    rep = verify_identity("POISSON", kind="EVEN", k=0)
    assert rep.passed


def test_displacement_series():
    rep = verify_identity(
        "DISPLACEMENT_SERIES", alpha=(frac(3, 10), frac(1, 5)), order=24
    )
    assert rep.passed
    assert rep.residual.is_zero()
    assert rep.numeric_deviation < 1e-10


def test_unknown_identity():
    with pytest.raises(UnknownIdentityError):
        verify_identity("NO_SUCH_IDENTITY")


def test_budget_exceeded():
    with pytest.raises(DegreeBudgetError):
        verify_identity("RICHTER", n=20, m=12)


def test_identity_suite_small():
    reps = identity_suite(
        max_equiv=3, max_richter=4, max_symm=3, max_s_order=3,
        max_trunc=2, max_mu_nu=3, max_resample=3, max_poisson=2,
    )
    assert all(r.passed for r in reps)

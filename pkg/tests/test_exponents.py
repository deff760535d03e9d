from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ns_apriori import exponents
from ns_apriori.errors import DomainError

ALPHAS = [round(0.05 * k, 2) for k in range(1, 20)]


def test_omega_examples():
    assert exponents.omega(2.5, 6, 0.5) == 1.0
    assert exponents.omega(0.0, 6, 0.5) == pytest.approx(1 / 6, rel=1e-15)
    assert exponents.omega(1.0, 6, 0.5) == pytest.approx(0.5, rel=1e-15)


@pytest.mark.parametrize("args", [(-0.1, 6, 0.5), (2.6, 6, 0.5), (1.0, 1.0, 0.5), (1.0, 6, 0.0), (1.0, 6, 1.0)])
def test_omega_domain_errors(args):
    with pytest.raises(DomainError):
        exponents.omega(*args)


def test_special_omegas_at_half():
    assert exponents.special_omegas(0.5) == pytest.approx((1 / 6, 1 / 3, 1 / 2, 2 / 3), rel=1e-15)


@pytest.mark.parametrize("alpha", ALPHAS)
def test_special_omegas_are_omega_and_sum_to_a1(alpha):
    w = exponents.special_omegas(alpha)
    for wl, l in zip(w, (0.0, alpha, 1.0, 1.0 + alpha)):
        assert wl == pytest.approx(exponents.omega(l, 6.0, alpha), rel=1e-14)
    a1, a2 = exponents.a_exponents(alpha)
    assert w[0] + w[3] == pytest.approx(a1, rel=1e-14)
    assert w[1] + w[2] == pytest.approx(a1, rel=1e-14)
    # both product terms carry the same total exponents
    assert (1 - w[0]) + (1 - w[3]) == pytest.approx(a2, rel=1e-14)
    assert 0 < a1 < 1


def test_a_exponents_exact_at_half():
    # oracle: exact rational arithmetic
    a1 = Fraction(6) * Fraction(5, 2) / (Fraction(6) * Fraction(5, 2) + 3)
    assert a1 == Fraction(5, 6)
    got = exponents.a_exponents(0.5)
    assert got == pytest.approx((5 / 6, 7 / 6), rel=1e-15)


def test_young_exponents_at_half():
    A_alt, A_young, B = exponents.young_exponents(5 / 6, 7 / 6)
    assert A_alt == pytest.approx(30 / 7, rel=1e-14)
    assert A_young == pytest.approx(5.0, rel=1e-14)
    assert B == pytest.approx(7.0, rel=1e-14)


def test_young_exponents_limits_and_errors():
    A_alt, A_young, B = exponents.young_exponents(1e-9, 1.5)
    assert A_young == pytest.approx(0.0, abs=1e-8)
    assert B == pytest.approx(1.5, rel=1e-8)
    with pytest.raises(DomainError):
        exponents.young_exponents(1.0, 1.0)
    with pytest.raises(DomainError):
        exponents.young_exponents(0.5, 0.0)


def test_sobolev_critical_exponent():
    assert exponents.sobolev_critical_exponent(3, 2) == 6.0
    assert exponents.sobolev_critical_exponent(3, 1) == 1.5
    with pytest.raises(DomainError):
        exponents.sobolev_critical_exponent(2, 2)


def test_exponent_set_fields():
    ex = exponents.ExponentSet.build(0.5)
    assert (ex.a1, ex.a2, ex.B) == pytest.approx((5 / 6, 7 / 6, 7.0), rel=1e-14)
    assert ex.omega(2.5) == 1.0
    ex4 = exponents.ExponentSet.build(0.3, q=4.0)
    assert ex4.a1 == pytest.approx(ex4.omega_0 + ex4.omega_1alpha, rel=1e-14)


@settings(max_examples=1000, deadline=None)
@given(q=st.floats(1.01, 50), alpha=st.floats(0.01, 0.99), u=st.floats(0, 1), v=st.floats(0, 1))
def test_omega_increasing_and_in_unit_interval(q, alpha, u, v):
    top = 2 + alpha
    l1, l2 = sorted((u * top * 0.999, v * top * 0.999))
    w1, w2 = exponents.omega(l1, q, alpha), exponents.omega(l2, q, alpha)
    assert 0 < w1 < 1 and 0 < w2 < 1
    if l2 - l1 > 1e-9:
        assert w2 > w1
    assert exponents.omega(top, q, alpha) == pytest.approx(1.0, abs=1e-14)


@pytest.mark.parametrize("alpha", ALPHAS)
def test_B_two_ways(alpha):
    a1, a2 = exponents.a_exponents(alpha)
    B = exponents.young_exponents(a1, a2)[2]
    assert B == pytest.approx((2 - a1) / (1 - a1), rel=1e-14)
    assert B > 2
    assert np.isclose(B, 1 + 1 / (1 - a1), rtol=1e-14)

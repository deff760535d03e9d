import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ns_apriori import exponents
from ns_apriori.errors import DomainError, InvalidFamilyError, UndefinedRatioError
from ns_apriori.function_spaces import Grid, ScalarField, c_norm, lq_norm
from ns_apriori.interp_verify import (
    FunctionFamily,
    dilated_bump,
    family_sweep,
    interpolation_ratio,
    ratio_parts,
    refinement_stability,
    scale_copy_deviation,
    scaling_balance_test,
    young_constant,
    young_prefactor,
    young_split_check,
)


def gaussian(n, sigma=0.2):
    return ScalarField.from_function(
        Grid(n), lambda x, y, z: np.exp(-((x - 0.5) ** 2 + (y - 0.4) ** 2 + (z - 0.6) ** 2) / (2 * sigma**2))
    )


# --- families ------------------------------------------------------------------


def test_family_is_deterministic_and_mixed():
    fam = FunctionFamily("mixed", 8, seed=3)
    a = [u.values for _, _, u in fam.members(Grid(5))]
    b = [u.values for _, _, u in fam.members(Grid(5))]
    assert all(np.array_equal(x, y) for x, y in zip(a, b))
    kinds = [k for k, _, _ in fam.members(Grid(5))]
    assert set(kinds) == {"polynomial", "trig", "gaussian_bump", "random_fourier"}


def test_family_validation():
    with pytest.raises(DomainError):
        FunctionFamily("spline", 3)
    with pytest.raises(DomainError):
        FunctionFamily("trig", 0)
    with pytest.raises(DomainError):
        FunctionFamily("gaussian_bump", 3, sigma_range=(0.01, 0.2))


def test_bump_widths_in_range():
    fam = FunctionFamily("gaussian_bump", 20, seed=1)
    for i in range(20):
        sigma = float(fam.spec(i)[1].split("=")[1])
        assert 0.05 <= sigma <= 0.5


# --- interpolation ratio ----------------------------------------------------------


def test_constant_ratio_is_one():
    u = ScalarField(Grid(9), np.full((9, 9, 9), -2.0))
    assert interpolation_ratio(u, 0.0) == pytest.approx(1.0, rel=1e-14)


def test_constant_family_c_emp_is_one():
    fam = FunctionFamily("polynomial", 10, seed=0, max_degree=0)
    rep = family_sweep(fam, 0.0, 6.0, 0.5, Grid(9))
    assert rep.c_emp[0.0] == pytest.approx(1.0, rel=1e-13)


def test_zero_field_rejected():
    with pytest.raises(UndefinedRatioError):
        interpolation_ratio(ScalarField.zeros(Grid(5)), 1.0)


def test_gaussian_ratio_matches_independent_norms():
    u = gaussian(17)
    r = interpolation_ratio(u, 1.0, 6.0, 0.5)
    lhs = c_norm(u, 1, 0.5).sup_norms
    top = c_norm(u, 2, 0.5).c_norm
    w = exponents.omega(1.0, 6.0, 0.5)
    assert np.isfinite(r)
    assert r == pytest.approx(sum(lhs) / (top**w * lq_norm(u, 6.0) ** (1 - w)), rel=1e-13)


@settings(max_examples=20, deadline=None)
@given(lam=st.floats(1e-3, 1e3), l=st.sampled_from([0.0, 0.5, 1.0, 1.5, 2.2]))
def test_ratio_scale_invariance(lam, l):
    u = gaussian(9, 0.3)
    assert interpolation_ratio(u * lam, l) == pytest.approx(interpolation_ratio(u, l), rel=1e-10)


def test_exponent_bookkeeping_in_product():
    u = gaussian(9)
    top, l6 = c_norm(u, 2, 0.5).c_norm, lq_norm(u, 6.0)
    w0, _, _, w1a = exponents.special_omegas(0.5)
    a1, a2 = exponents.a_exponents(0.5)
    split = top ** (w0 + w1a) * l6 ** (2 - w0 - w1a)
    assert split == pytest.approx(top**a1 * l6**a2, rel=1e-12)


def test_l_out_of_range():
    with pytest.raises(DomainError):
        ratio_parts(gaussian(5), 2.5, 6.0, 0.5)


def test_scale_copies_leave_c_emp_unchanged():
    fam = FunctionFamily("mixed", 6, seed=2)
    plain = family_sweep(fam, [0.0, 1.0], 6.0, 0.5, Grid(9))
    dup = family_sweep(fam, [0.0, 1.0], 6.0, 0.5, Grid(9), scale_copies=(0.1, 10.0, 1000.0))
    for l in plain.c_emp:
        assert dup.c_emp[l] == pytest.approx(plain.c_emp[l], rel=1e-10)
    assert scale_copy_deviation(dup) <= 1e-10


def test_csv_columns_and_c_emp_line():
    rep = family_sweep(FunctionFamily("trig", 3), 1.0, 6.0, 0.5, Grid(9))
    lines = rep.to_csv().splitlines()
    assert lines[0] == "kind,param,seed,l,q,alpha,lhs,norm_2a,norm_q,omega,ratio"
    assert lines[-1].startswith("C_emp,")
    assert float(lines[-1].split(",")[1]) == rep.c_emp[1.0]


@pytest.mark.slow
def test_mixed_family_stable_under_refinement():
    fam = FunctionFamily("mixed", 50, seed=0)
    coarse = family_sweep(fam, 1.0, 6.0, 0.5, Grid(17))
    fine = family_sweep(fam, 1.0, 6.0, 0.5, Grid(33))
    assert refinement_stability(coarse, fine)[1.0] <= 0.1
    assert not coarse.outliers() and not fine.outliers()


# --- scaling balance -------------------------------------------------------------------


def test_bump_support_must_stay_inside():
    with pytest.raises(InvalidFamilyError):
        dilated_bump(Grid(17), 0.8)
    with pytest.raises(InvalidFamilyError):
        scaling_balance_test([0.5, 1, 2], grid=Grid(17))


@pytest.mark.parametrize("l, expect", [(0.0, 0.0), (1.0, 1.0)])
def test_scaling_slopes(l, expect):
    fit = scaling_balance_test([1, 2, 4, 8], l=l, q=6.0, alpha=0.5)
    assert fit.gap <= 0.15
    assert fit.s_lhs == pytest.approx(expect, abs=0.2)


def test_scaling_slopes_ignore_fixed_amplitude():
    a = scaling_balance_test([1, 2, 4, 8], l=1.0, grid=Grid(33))
    b = scaling_balance_test([1, 2, 4, 8], l=1.0, grid=Grid(33), amplitudes=[7.0] * 4)
    assert b.s_lhs == pytest.approx(a.s_lhs, abs=1e-10)
    assert b.s_rhs == pytest.approx(a.s_rhs, abs=1e-10)


# --- Young split --------------------------------------------------------------------------


def test_young_closed_form_is_the_sup():
    a1, eps = 5 / 6, 0.1
    X = np.logspace(-5, 12, 200_001)
    assert young_constant(a1, eps) == pytest.approx(np.max(X**a1 - eps * X), rel=1e-6)


def test_young_fit_at_half():
    rep = young_split_check(5 / 6, 7 / 6)
    assert rep.slope_closed == pytest.approx(-5.0, abs=1e-6)
    assert rep.slope_search == pytest.approx(-5.0, abs=0.05)
    assert abs(rep.slope_search + rep.A_alt) > 0.5
    assert rep.violations == 0
    assert rep.ok


def test_young_trivial_cases():
    a1 = 5 / 6
    B = (2 - a1) / (1 - a1)
    # Y = 0 leaves 0 <= eps X; X = Y = 1 with eps = 1
    assert 0.0 <= 0.3 * 5.0 + young_constant(a1, 0.3) * 0.0**B
    assert 1.0 <= 1.0 + young_constant(a1, 1.0)
    assert young_prefactor(a1) == pytest.approx((1 / 6) * (5 / 6) ** 5, rel=1e-14)


def test_young_domain_errors():
    with pytest.raises(DomainError):
        young_split_check(1.0)
    with pytest.raises(DomainError):
        young_split_check(0.5, trials=10)
    with pytest.raises(DomainError):
        young_split_check(0.5, epsilons=[0.5, 2.0])

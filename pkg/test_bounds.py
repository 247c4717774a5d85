"""Tests for sharp constants, the three sign cases and the Bohr specialization."""

import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from services.bounds import (
    admissible_case_i,
    admissible_case_ii,
    aligned_extremal_point,
    bohr_chain_check,
    bohr_matches_sharp,
    bohr_params,
    case_ii_transform,
    certify,
    check,
    check_case_i,
    check_case_ii,
    check_case_iii,
    check_two_term,
    extremal_point,
    q_weights,
    sharp_lambda,
)
from services.core import (
    CaseLabel,
    DegenerateError,
    DomainError,
    WeightedSystem,
    conjugate_exponent,
)


def system(p, a, mu, x=None):
    return WeightedSystem(exponent=conjugate_exponent(p), a=a, mu=mu, x=x)


# =============================================================================
# Sharp constant, Q-weights, extremal point
# =============================================================================


@pytest.mark.parametrize(
    "mu, a, p, expected",
    [
        ([1, 1], [1, 1], 2, 2.0),
        ([0.5, 0.5], [1, 1], 2, 1.0),
        ([3], [2], 3, 24.0),
        ([1, 1], [2, 1], 2, 5.0),
    ],
)
def test_sharp_lambda_examples(mu, a, p, expected):
    assert sharp_lambda(mu, a, conjugate_exponent(p)) == pytest.approx(expected, rel=1e-12)


def test_sharp_lambda_uses_moduli_of_complex_coefficients():
    exp = conjugate_exponent(2)
    assert sharp_lambda([1, 1], [3 + 4j, 0], exp) == pytest.approx(25.0, rel=1e-12)


@pytest.mark.parametrize(
    "mu, a, expected",
    [
        ([1, 1], [1, 1], [0.25, 0.25]),
        ([1], [1], [1.0]),
        ([1, 1], [1, 0], [1.0, 0.0]),
    ],
)
def test_q_weights_examples(mu, a, expected):
    assert q_weights(mu, a, conjugate_exponent(2)) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize(
    "mu, a, expected",
    [
        ([1, 1], [1, 1], [1.0, 1.0]),
        ([1, 1], [2, 1], [2.0, 1.0]),
        ([4], [1], [4.0]),
    ],
)
def test_extremal_point_examples(mu, a, expected):
    assert extremal_point(mu, a, conjugate_exponent(2)) == pytest.approx(expected, rel=1e-12)


def test_sharp_lambda_errors():
    exp = conjugate_exponent(2)
    with pytest.raises(DegenerateError):
        sharp_lambda([1, 1], [0, 0], exp)
    with pytest.raises(DomainError):
        sharp_lambda([1, -1], [1, 1], exp)
    with pytest.raises(DomainError):
        sharp_lambda([1, 1], [1], exp)


def test_certify_bundles_certificate():
    cert = certify([1, 1], [1, 1], conjugate_exponent(2))
    assert cert.lambda_bar == pytest.approx(2.0)
    assert cert.Q == pytest.approx((0.25, 0.25))
    assert cert.x_star == pytest.approx((1.0, 1.0))
    assert cert.case is CaseLabel.CASE_I


positive_weights = st.lists(st.floats(min_value=0.1, max_value=10.0), min_size=1, max_size=6)


@settings(max_examples=200, deadline=None)
@given(
    weights=positive_weights,
    coefficients=st.lists(st.floats(min_value=0.1, max_value=10.0), min_size=6, max_size=6),
    p=st.sampled_from([1.5, 2.0, 2.5, 3.0, 5.0]),
)
def test_extremal_point_attains_equality(weights, coefficients, p):
    exp = conjugate_exponent(p)
    a = coefficients[: len(weights)]
    lam_bar = sharp_lambda(weights, a, exp)
    x_star = extremal_point(weights, a, exp)

    report = check_case_i(system(p, a, weights, x_star), lam_bar)
    assert abs(report.margin) <= 1e-12 * report.lhs
    assert math.fsum(q_weights(weights, a, exp)) == pytest.approx(1.0 / lam_bar, rel=1e-12)


@settings(max_examples=200, deadline=None)
@given(
    weights=st.lists(st.floats(min_value=0.1, max_value=10.0), min_size=3, max_size=3),
    coefficients=st.lists(st.floats(min_value=0.0, max_value=10.0), min_size=3, max_size=3),
    points=st.lists(st.floats(min_value=-10.0, max_value=10.0), min_size=3, max_size=3),
    p=st.floats(min_value=1.1, max_value=6.0),
)
def test_case_i_holds_at_sharp_constant(weights, coefficients, points, p):
    assume(max(coefficients) >= 0.01)
    lam_bar = sharp_lambda(weights, coefficients, conjugate_exponent(p))
    report = check_case_i(system(p, coefficients, weights, points), lam_bar)
    assert report.holds
    assert report.guaranteed


# =============================================================================
# Case (i)
# =============================================================================


def test_check_case_i_examples():
    report = check_case_i(system(2, [1, 1], [1, 1], [3, 4]), 2)
    assert report.lhs == pytest.approx(25.0)
    assert report.rhs == pytest.approx(24.5)
    assert report.holds

    report = check_case_i(system(2, [1, 1], [1, 1], [1, 1]), 2)
    assert report.lhs == pytest.approx(2.0)
    assert report.rhs == pytest.approx(2.0)
    assert report.margin == pytest.approx(0.0, abs=1e-15)
    assert report.holds

    report = check_case_i(system(2, [1, 1], [1, 1], [0, 0]), 2)
    assert (report.lhs, report.rhs, report.holds) == (0.0, 0.0, True)


@pytest.mark.parametrize("lam, expected", [(2, True), (1.999, False), (100, True)])
def test_admissible_case_i(lam, expected):
    assert admissible_case_i([1, 1], [1, 1], conjugate_exponent(2), lam) is expected


def test_check_case_i_below_sharp_constant_fails_at_extremal_point():
    report = check_case_i(system(2, [1, 1], [1, 1], [1, 1]), 0.99 * 2)
    assert not report.guaranteed
    assert not report.holds


def test_check_case_i_rejects_other_sign_patterns():
    with pytest.raises(DomainError):
        check_case_i(system(2, [1, 1], [1, -1], [1, 1]), 2)


# =============================================================================
# Cases (ii) and (iii)
# =============================================================================


def test_check_case_ii_boundary_equality():
    report = check_case_ii(system(2, [2, 1], [1, -1], [2, -1]), 3)
    assert report.lhs == pytest.approx(3.0)
    assert report.rhs == pytest.approx(3.0)
    assert abs(report.margin) <= 1e-12
    assert report.holds
    assert report.guaranteed
    assert report.direction == "le"


def test_check_case_ii_inadmissible_lambda_still_evaluates():
    report = check_case_ii(system(2, [1, 1], [1, -1], [1, 0]), 0.5)
    assert report.lhs == pytest.approx(1.0)
    assert report.rhs == pytest.approx(2.0)
    assert report.holds
    assert not report.guaranteed


def test_check_case_ii_zero_input():
    report = check_case_ii(system(2, [2, 1], [1, -1], [0, 0]), 3)
    assert (report.lhs, report.rhs, report.holds) == (0.0, 0.0, True)


@pytest.mark.parametrize(
    "mu, a, lam, expected",
    [
        ([1, -1], [2, 1], 3, True),
        ([1, -1], [2, 1], 3.01, False),
        ([1, -1], [1, 1], 0.1, False),
        ([1, -1], [1, 1], 100, False),
    ],
)
def test_admissible_case_ii(mu, a, lam, expected):
    assert admissible_case_ii(mu, a, conjugate_exponent(2), lam) is expected


def test_case_ii_verdicts_are_plain_bools():
    exp = conjugate_exponent(2.5)
    assert type(admissible_case_ii([1, -1], [2, 1], exp, 1.0)) is bool
    assert type(check_case_ii(system(2.5, [2, 1], [1, -1], [1, 1]), 1.0).guaranteed) is bool
    assert type(check_case_iii(system(2.5, [2, 1], [-1, 1], [1, 1]), -1.0).guaranteed) is bool
    assert type(admissible_case_i([1, 1], [1, 1], exp, 2.0)) is bool


def test_check_case_ii_requires_nonzero_first_coefficient():
    with pytest.raises(DomainError):
        check_case_ii(system(2, [0, 1], [1, -1], [1, 1]), 1)


def test_check_case_iii_examples():
    report = check_case_iii(system(2, [2, 1], [-1, 1], [2, -1]), -3)
    assert report.lhs == pytest.approx(-3.0)
    assert report.rhs == pytest.approx(-3.0)
    assert abs(report.margin) <= 1e-12
    assert report.holds
    assert report.guaranteed

    report = check_case_iii(system(2, [2, 1], [-1, 1], [1, 1]), -3)
    assert report.lhs == pytest.approx(0.0)
    assert report.rhs == pytest.approx(-3.0)
    assert report.holds

    report = check_case_iii(system(2, [2, 1], [-1, 1], [0, 0]), -3)
    assert report.holds


def test_check_case_iii_rejects_positive_lambda():
    with pytest.raises(DomainError):
        check_case_iii(system(2, [2, 1], [-1, 1], [1, 1]), 3)


@pytest.mark.parametrize(
    "x, expected",
    [
        ([2, 1], dict(Lambda=1.0, nu=(3.0, 1.0), z=(5 + 0j, 1 + 0j), C=(0.5 + 0j, -0.5 + 0j))),
    ],
)
def test_case_ii_transform_boundary_example(x, expected):
    transform = case_ii_transform(system(2, [2, 1], [1, -1], x), 3)
    assert transform.Lambda == expected["Lambda"]
    assert transform.nu == expected["nu"]
    assert transform.z == expected["z"]
    assert transform.C == expected["C"]
    assert transform.reconstruct_first_point() == pytest.approx(2.0)


def test_case_ii_transform_substitution_example():
    transform = case_ii_transform(system(2, [1, 1], [1, -1], [1, 0]), 1)
    assert transform.Lambda == 1.0
    assert transform.nu == (1.0, 1.0)
    assert transform.z == (1 + 0j, 0j)
    assert transform.C == (1 + 0j, -1 + 0j)


@settings(max_examples=200, deadline=None)
@given(
    first=st.tuples(st.floats(min_value=0.1, max_value=10.0), st.floats(min_value=1.0, max_value=10.0)),
    rest=st.lists(
        st.tuples(st.floats(min_value=0.1, max_value=10.0), st.floats(min_value=0.0, max_value=1.0)),
        min_size=1,
        max_size=3,
    ),
    points=st.lists(st.floats(min_value=-10.0, max_value=10.0), min_size=4, max_size=4),
    shrink=st.floats(min_value=0.01, max_value=1.0),
)
def test_case_ii_transform_preserves_admissibility_and_verdict(first, rest, points, shrink):
    exp = conjugate_exponent(2)
    mu = [first[0]] + [-m for m, _ in rest]
    a = [first[1]] + [c for _, c in rest]
    x = points[: len(mu)]
    bound = mu[0] * a[0] ** 2 - sum(-m * c**2 for m, c in zip(mu[1:], a[1:]))
    assume(bound > 1e-3 * mu[0] * a[0] ** 2)
    lam = bound * shrink

    sys = system(2, a, mu, x)
    report = check_case_ii(sys, lam)
    transform = case_ii_transform(sys, lam)
    image = transform.as_system(exp)

    assert report.guaranteed
    assert report.holds
    assert admissible_case_i(image.mu, image.a, exp, transform.Lambda)
    assert check_case_i(image, transform.Lambda).holds
    assert transform.reconstruct_first_point() == pytest.approx(x[0], rel=1e-9, abs=1e-9)


# =============================================================================
# Dispatch
# =============================================================================


def test_check_classifies_and_dispatches():
    assert check(system(2, [1, 1], [1, 1], [1, 1]), 2).case is CaseLabel.CASE_I
    assert check(system(2, [2, 1], [1, -1], [2, -1]), 3).case is CaseLabel.CASE_II
    assert check(system(2, [2, 1], [-1, 1], [2, -1]), -3).case is CaseLabel.CASE_III


def test_check_rejects_unclassified_pattern():
    with pytest.raises(DomainError):
        check(system(2, [1, 1, 1], [1, -1, 1], [1, 1, 1]), 1)


def test_check_honors_forced_case():
    with pytest.raises(DomainError):
        check(system(2, [1, 1], [1, 1], [1, 1]), 2, case=CaseLabel.CASE_II)


def test_check_two_term_sign_cases():
    exp = conjugate_exponent(2)
    assert check_two_term(1, 1, 1, 1, 1, 1, 2, exp).case is CaseLabel.CASE_I

    direct = check_two_term(2, -1, 2, 1, -1, 1, -3, exp)
    assert direct.case is CaseLabel.CASE_III
    assert abs(direct.margin) <= 1e-12

    swapped = check_two_term(-1, 2, 1, 2, 1, -1, -3, exp)
    assert swapped.lhs == pytest.approx(direct.lhs)
    assert swapped.rhs == pytest.approx(direct.rhs)
    assert swapped.guaranteed

    with pytest.raises(DomainError):
        check_two_term(1, 1, 1, 1, -1, -1, 1, exp)


# =============================================================================
# Bohr
# =============================================================================


def test_bohr_params_examples():
    params = bohr_params(2, 2)
    assert (params.a, params.b, params.mu, params.nu, params.lam) == pytest.approx((1.0, 1.0, 0.5, 0.5, 1.0))
    assert bohr_params(2, 3).lam == pytest.approx(2.0)

    params = bohr_params(1.5, 2)
    assert params.t == pytest.approx(3.0)
    assert (params.a, params.b, params.mu, params.nu, params.lam) == pytest.approx((0.5, 1.0, 2 / 3, 1 / 3, 0.5))


@pytest.mark.parametrize("s", [1 + k / 20 for k in range(1, 21)])
@pytest.mark.parametrize("p", [1 + 5 * k / 20 for k in range(1, 21)])
def test_bohr_lambda_is_sharp_on_grid(s, p):
    assert bohr_matches_sharp(bohr_params(s, p))


@pytest.mark.parametrize(
    "s, p, x, y, first, middle, outer",
    [
        (2, 2, 1, 1, 4.0, 4.0, 4.0),
        (2, 3, 1, 1, 4.0, 4.0, 4.0),
        (1.5, 2, 0, 0, 0.0, 0.0, 0.0),
    ],
)
def test_bohr_chain_examples(s, p, x, y, first, middle, outer):
    left, right = bohr_chain_check(s, p, x, y)
    assert left.lhs == pytest.approx(first)
    assert left.rhs == pytest.approx(middle)
    assert right.rhs == pytest.approx(outer)
    assert left.holds and right.holds


@settings(max_examples=300, deadline=None)
@given(
    s=st.floats(min_value=1.01, max_value=2.0),
    p=st.floats(min_value=1.05, max_value=6.0),
    x=st.floats(min_value=0.0, max_value=10.0),
    y=st.floats(min_value=0.0, max_value=10.0),
)
def test_bohr_chain_holds(s, p, x, y):
    left, right = bohr_chain_check(s, p, x, y)
    assert left.holds
    assert right.holds


@pytest.mark.parametrize("s, p", [(1.0, 2.0), (2.5, 2.0), (1.5, 1.0)])
def test_bohr_rejects_out_of_domain(s, p):
    with pytest.raises(DomainError):
        bohr_params(s, p)


def test_bohr_chain_rejects_negative_points():
    with pytest.raises(DomainError):
        bohr_chain_check(2, 2, -1, 1)


def test_weighted_terms_match_numpy_reference():
    exp = conjugate_exponent(3)
    mu, a = np.array([1.0, 4.0]), np.array([2.0, 1.0])
    expected = (np.sqrt(mu) @ a**1.5) ** 2
    assert sharp_lambda(mu, a, exp) == pytest.approx(expected, rel=1e-12)


@settings(max_examples=200, deadline=None)
@given(
    points=st.lists(st.floats(min_value=-10.0, max_value=10.0), min_size=3, max_size=3),
    scale=st.floats(min_value=0.1, max_value=10.0),
    p=st.sampled_from([1.5, 2.0, 3.0]),
)
def test_case_i_sides_are_homogeneous(points, scale, p):
    assume(max(abs(v) for v in points) >= 0.01)
    mu, a = [1.0, 2.0, 0.5], [1.0, 3.0, 2.0]
    lam = sharp_lambda(mu, a, conjugate_exponent(p))
    base = check_case_i(system(p, a, mu, points), lam)
    scaled = check_case_i(system(p, a, mu, [scale * v for v in points]), lam)
    factor = scale**p
    assert scaled.lhs == pytest.approx(factor * base.lhs, rel=1e-12)
    assert scaled.rhs == pytest.approx(factor * base.rhs, rel=1e-12, abs=1e-9 * factor)


@settings(max_examples=200, deadline=None)
@given(
    phases=st.lists(st.floats(min_value=0.0, max_value=6.283), min_size=3, max_size=3),
    common=st.floats(min_value=0.0, max_value=6.283),
)
def test_phases_of_coefficients_and_points(phases, common):
    exp = conjugate_exponent(2.5)
    mu, moduli_a, x = [1.0, 2.0, 0.5], [1.0, 3.0, 2.0], [2.0, -1.0, 1.5]
    rotated_a = [m * np.exp(1j * t) for m, t in zip(moduli_a, phases)]
    assert sharp_lambda(mu, rotated_a, exp) == pytest.approx(sharp_lambda(mu, moduli_a, exp), rel=1e-14)

    lam = sharp_lambda(mu, moduli_a, exp)
    base = check_case_i(system(2.5, moduli_a, mu, x), lam)
    turned = check_case_i(system(2.5, moduli_a, mu, [v * np.exp(1j * common) for v in x]), lam)
    assert turned.lhs == pytest.approx(base.lhs, rel=1e-12)
    assert turned.rhs == pytest.approx(base.rhs, rel=1e-12)


@settings(max_examples=200, deadline=None)
@given(
    weights=st.lists(st.floats(min_value=0.1, max_value=10.0), min_size=1, max_size=5),
    coefficients=st.lists(st.floats(min_value=0.1, max_value=10.0), min_size=5, max_size=5),
    c=st.floats(min_value=0.1, max_value=10.0) | st.floats(min_value=-10.0, max_value=-0.1),
    p=st.sampled_from([1.5, 2.0, 2.5, 3.0, 5.0]),
)
def test_sharp_lambda_is_homogeneous_in_coefficients(weights, coefficients, c, p):
    exp = conjugate_exponent(p)
    a = coefficients[: len(weights)]
    scaled = sharp_lambda(weights, [c * v for v in a], exp)
    assert scaled == pytest.approx(abs(c) ** p * sharp_lambda(weights, a, exp), rel=1e-12)


@settings(max_examples=200, deadline=None)
@given(
    moduli_x=st.lists(st.floats(min_value=0.0, max_value=10.0), min_size=3, max_size=3),
    phases=st.lists(st.floats(min_value=0.0, max_value=6.283), min_size=3, max_size=3),
    p=st.sampled_from([1.5, 2.0, 3.0]),
)
def test_independent_phases_never_beat_aligned_points(moduli_x, phases, p):
    mu, a = [1.0, 2.0, 0.5], [1.0, 3.0, 2.0]
    lam = sharp_lambda(mu, a, conjugate_exponent(p))
    aligned = check_case_i(system(p, a, mu, moduli_x), lam)
    rotated = check_case_i(system(p, a, mu, [r * np.exp(1j * t) for r, t in zip(moduli_x, phases)]), lam)

    assert rotated.lhs == pytest.approx(aligned.lhs, rel=1e-12, abs=1e-300)
    assert rotated.rhs <= aligned.rhs * (1 + 1e-12) + 1e-300
    assert rotated.holds


def test_aligned_extremal_point_attains_equality_for_complex_coefficients():
    exp = conjugate_exponent(2.5)
    mu, a = [1.0, 2.0, 0.5], [1j, 1.0, 1 - 2j]
    lam_bar = sharp_lambda(mu, a, exp)
    point = aligned_extremal_point(mu, a, exp)

    assert np.abs(point) == pytest.approx(extremal_point(mu, a, exp), rel=1e-14)
    report = check_case_i(system(2.5, a, mu, point), lam_bar)
    assert abs(report.margin) <= 1e-12 * report.lhs

    unaligned = check_case_i(system(2.5, a, mu, extremal_point(mu, a, exp)), lam_bar)
    assert unaligned.margin > 0

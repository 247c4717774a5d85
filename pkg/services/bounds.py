"""Sharp constants, admissibility conditions and inequality checks for weighted power sums.

The three certified sign cases of

    sum |x_i|^p / mu_i  >=  |sum a_i x_i|^p / lambda

are handled here, along with the Case (ii) substitution onto Case (i) and the
Bohr specialization for two terms.
"""

import logging
import math
from collections.abc import Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from config import CONJUGACY_TOL, IDENTITY_TOL
from services.core import (
    BoundCertificate,
    CaseLabel,
    DegenerateError,
    DomainError,
    Exponent,
    InequalityReport,
    WeightedSystem,
    classify_case,
    conjugate_exponent,
    make_report,
    moduli_array,
    power,
    scalar_power,
)

logger = logging.getLogger(__name__)


# =============================================================================
# Domain Types
# =============================================================================


class CaseTransform(BaseModel):
    """Substitution data mapping a Case (ii) instance onto Case (i).

    The transformed instance reads sum |z_i|^p / nu_i >= |sum C_i z_i|^p / Lambda.
    """

    model_config = ConfigDict(frozen=True)

    Lambda: float = Field(gt=0)
    nu: tuple[float, ...]
    z: tuple[complex, ...]
    C: tuple[complex, ...]

    def reconstruct_first_point(self) -> complex:
        """x_1 = sum C_i z_i."""
        return complex(np.dot(np.asarray(self.C, dtype=complex), np.asarray(self.z, dtype=complex)))

    def as_system(self, exponent: Exponent) -> WeightedSystem:
        return WeightedSystem(exponent=exponent, a=self.C, mu=self.nu, x=self.z)


class BohrParams(BaseModel):
    """Two-term parameter pack under which Bohr's inequality is a Case (i) instance."""

    model_config = ConfigDict(frozen=True)

    s: float
    t: float
    p: float
    a: float
    b: float = 1.0
    mu: float
    nu: float
    lam: float = Field(alias="lambda")

    @model_validator(mode="after")
    def _check_conjugacy(self) -> "BohrParams":
        if not math.isclose(1.0 / self.s + 1.0 / self.t, 1.0, rel_tol=CONJUGACY_TOL):
            raise DomainError(f"s={self.s} and t={self.t} are not conjugate")
        return self


# =============================================================================
# Helpers
# =============================================================================


def _validated_arrays(mu: Sequence[float], a: Sequence[complex]) -> tuple[np.ndarray, np.ndarray]:
    mu_arr = np.asarray(mu, dtype=float)
    abs_a = moduli_array(a)
    if mu_arr.size == 0 or mu_arr.shape != abs_a.shape:
        raise DomainError(f"mu and a must be nonempty and of equal length, got {len(mu)} and {len(a)}")
    return mu_arr, abs_a


def _positive_weights(mu: Sequence[float], a: Sequence[complex]) -> tuple[np.ndarray, np.ndarray]:
    mu_arr, abs_a = _validated_arrays(mu, a)
    if np.any(mu_arr <= 0):
        raise DomainError(f"every weight must be positive, got mu={list(mu)}")
    return mu_arr, abs_a


def weighted_terms(mu: Sequence[float], a: Sequence[complex], exp: Exponent) -> np.ndarray:
    """|mu_i|^(1/(p-1)) * |a_i|^q, the summands of the admissibility conditions."""
    mu_arr, abs_a = _validated_arrays(mu, a)
    return power(np.abs(mu_arr), exp.inverse_power) * power(abs_a, exp.q)


def _sharp_sum(mu: Sequence[float], a: Sequence[complex], exp: Exponent) -> tuple[float, np.ndarray]:
    _positive_weights(mu, a)
    terms = weighted_terms(mu, a, exp)
    total = math.fsum(terms)
    if total == 0:
        raise DegenerateError("all coefficients a_i are zero; the sharp constant is 0")
    return total, terms


def _at_least(value: float, bound: float) -> bool:
    """value >= bound, resolving boundary rounding in favor of admissibility."""
    return bool(value >= bound - IDENTITY_TOL * max(abs(value), abs(bound)))


def _signed_sides(sys: WeightedSystem, lam: float) -> tuple[float, float]:
    """(sum |x_i|^p / mu_i, |sum a_i x_i|^p / lambda) with signed weights."""
    x = np.asarray(sys.require_points(), dtype=complex)
    a = np.asarray(sys.a, dtype=complex)
    mu = np.asarray(sys.mu, dtype=float)
    lhs = math.fsum(power(np.abs(x), sys.p) / mu)
    rhs = scalar_power(abs(complex(np.dot(a, x))), sys.p) / lam
    return lhs, rhs


# =============================================================================
# Sharp constant
# =============================================================================


def sharp_lambda(mu: Sequence[float], a: Sequence[complex], exp: Exponent) -> float:
    """Smallest lambda for which Case (i) holds: (sum mu_i^(1/(p-1)) |a_i|^q)^(p-1)."""
    total, _ = _sharp_sum(mu, a, exp)
    return scalar_power(total, exp.p - 1.0)


def q_weights(mu: Sequence[float], a: Sequence[complex], exp: Exponent) -> list[float]:
    """Q_i = mu_i^(1/(p-1)) |a_i|^q / S^p; zero-coefficient terms get zero weight."""
    total, terms = _sharp_sum(mu, a, exp)
    return (terms / scalar_power(total, exp.p)).tolist()


def extremal_point(mu: Sequence[float], a: Sequence[complex], exp: Exponent) -> list[float]:
    """x*_i = (|a_i| mu_i)^(1/(p-1)), the ray on which the sharp bound is attained."""
    mu_arr, abs_a = _positive_weights(mu, a)
    _sharp_sum(mu, a, exp)
    return power(abs_a * mu_arr, exp.inverse_power).tolist()


def aligned_extremal_point(mu: Sequence[float], a: Sequence[complex], exp: Exponent) -> list[complex]:
    """x*_i conj(a_i)/|a_i|, the extremal point rotated so every a_i x_i is real and nonnegative."""
    a_arr = np.asarray(a, dtype=complex)
    abs_a = np.abs(a_arr)
    phase = np.ones_like(a_arr)
    nonzero = abs_a > 0
    phase[nonzero] = np.conj(a_arr[nonzero]) / abs_a[nonzero]
    return (np.asarray(extremal_point(mu, a, exp)) * phase).tolist()


def certify(mu: Sequence[float], a: Sequence[complex], exp: Exponent) -> BoundCertificate:
    """Bundle the sharp constant, Q-weights and extremal point of a Case (i) system."""
    return BoundCertificate(
        lambda_bar=sharp_lambda(mu, a, exp),
        Q=q_weights(mu, a, exp),
        x_star=extremal_point(mu, a, exp),
        case=CaseLabel.CASE_I,
    )


# =============================================================================
# Case (i)
# =============================================================================


def admissible_case_i(mu: Sequence[float], a: Sequence[complex], exp: Exponent, lam: float) -> bool:
    """lambda^(1/(p-1)) >= sum mu_i^(1/(p-1)) |a_i|^q, i.e. lambda >= lambda_bar."""
    _positive_weights(mu, a)
    if lam <= 0:
        raise DomainError(f"Case (i) needs lambda > 0, got {lam!r}")
    bound = math.fsum(weighted_terms(mu, a, exp))
    return _at_least(scalar_power(lam, exp.inverse_power), bound)


def check_case_i(sys: WeightedSystem, lam: float, tolerance: float | None = None) -> InequalityReport:
    """Evaluate sum |x_i|^p/mu_i >= |sum a_i x_i|^p/lambda for positive weights."""
    if classify_case(sys.mu, lam) is not CaseLabel.CASE_I:
        raise DomainError(f"Case (i) needs mu_i > 0 and lambda > 0, got mu={list(sys.mu)}, lambda={lam!r}")
    lhs, rhs = _signed_sides(sys, lam)
    return make_report(
        lhs,
        rhs,
        direction="ge",
        tolerance=tolerance,
        guaranteed=admissible_case_i(sys.mu, sys.a, sys.exponent, lam),
        case=CaseLabel.CASE_I,
    )


# =============================================================================
# Cases (ii) and (iii)
# =============================================================================


def _require_mixed_signs(mu: Sequence[float], first_positive: bool) -> None:
    if len(mu) < 2:
        raise DomainError("Cases (ii) and (iii) need at least two terms")
    first, rest = mu[0], mu[1:]
    ok = (first > 0 and all(m < 0 for m in rest)) if first_positive else (first < 0 and all(m > 0 for m in rest))
    if not ok:
        pattern = "mu_1 > 0, mu_i < 0" if first_positive else "mu_1 < 0, mu_i > 0"
        raise DomainError(f"expected sign pattern {pattern} for i >= 2, got mu={list(mu)}")


def case_ii_bound(mu: Sequence[float], a: Sequence[complex], exp: Exponent) -> float:
    """|mu_1|^(1/(p-1))|a_1|^q - sum_{i>=2} |mu_i|^(1/(p-1))|a_i|^q."""
    terms = weighted_terms(mu, a, exp)
    return float(terms[0]) - math.fsum(terms[1:])


def admissible_case_ii(mu: Sequence[float], a: Sequence[complex], exp: Exponent, lam: float) -> bool:
    """|lambda|^(1/(p-1)) <= case_ii_bound; never admissible when the bound is <= 0."""
    _require_mixed_signs(mu, first_positive=True)
    if lam <= 0:
        raise DomainError(f"Case (ii) needs lambda > 0, got {lam!r}")
    return _within_case_ii_bound(mu, a, exp, lam)


def _within_case_ii_bound(mu: Sequence[float], a: Sequence[complex], exp: Exponent, lam: float) -> bool:
    bound = case_ii_bound(mu, a, exp)
    if bound <= 0:
        return False
    return _at_least(bound, scalar_power(abs(lam), exp.inverse_power))


def check_case_ii(sys: WeightedSystem, lam: float, tolerance: float | None = None) -> InequalityReport:
    """Evaluate the reversed form sum |x_i|^p/mu_i <= |sum a_i x_i|^p/lambda."""
    _require_mixed_signs(sys.mu, first_positive=True)
    if lam <= 0:
        raise DomainError(f"Case (ii) needs lambda > 0, got {lam!r}")
    if sys.a[0] == 0:
        raise DomainError("Case (ii) needs a_1 != 0")
    lhs, rhs = _signed_sides(sys, lam)
    return make_report(
        lhs,
        rhs,
        direction="le",
        tolerance=tolerance,
        guaranteed=_within_case_ii_bound(sys.mu, sys.a, sys.exponent, lam),
        case=CaseLabel.CASE_II,
    )


def check_case_iii(sys: WeightedSystem, lam: float, tolerance: float | None = None) -> InequalityReport:
    """Evaluate sum |x_i|^p/mu_i >= |sum a_i x_i|^p/lambda with mu_1 < 0 < mu_i, lambda < 0.

    This is Case (ii) with every sign flipped, so |lambda| is held to the
    same bound.
    """
    _require_mixed_signs(sys.mu, first_positive=False)
    if lam >= 0:
        raise DomainError(f"Case (iii) needs lambda < 0, got {lam!r}")
    lhs, rhs = _signed_sides(sys, lam)
    return make_report(
        lhs,
        rhs,
        direction="ge",
        tolerance=tolerance,
        guaranteed=_within_case_ii_bound(sys.mu, sys.a, sys.exponent, lam),
        case=CaseLabel.CASE_III,
    )


def case_ii_transform(sys: WeightedSystem, lam: float) -> CaseTransform:
    """Substitute z_1 = sum a_i x_i, z_i = x_i so that x_1 = sum C_i z_i."""
    _require_mixed_signs(sys.mu, first_positive=True)
    if sys.a[0] == 0:
        raise DomainError("the Case (ii) substitution divides by a_1, which is zero")
    x = sys.require_points()
    a1 = sys.a[0]

    z = (complex(np.dot(np.asarray(sys.a, dtype=complex), np.asarray(x, dtype=complex))), *x[1:])
    C = (1.0 / a1, *(-ai / a1 for ai in sys.a[1:]))
    nu = (abs(lam), *(abs(m) for m in sys.mu[1:]))
    return CaseTransform(Lambda=abs(sys.mu[0]), nu=nu, z=z, C=C)


_CHECKS = {
    CaseLabel.CASE_I: check_case_i,
    CaseLabel.CASE_II: check_case_ii,
    CaseLabel.CASE_III: check_case_iii,
}


def check(
    sys: WeightedSystem,
    lam: float,
    case: CaseLabel | None = None,
    tolerance: float | None = None,
) -> InequalityReport:
    """Classify the sign pattern (unless forced) and run the matching check."""
    label = case or classify_case(sys.mu, lam)
    if label is CaseLabel.UNCLASSIFIED:
        raise DomainError(f"sign pattern mu={list(sys.mu)}, lambda={lam!r} matches no certified case")
    logger.debug("Checking %s instance with n=%d, p=%s", label.value, sys.n, sys.p)
    return _CHECKS[label](sys, lam, tolerance)


def check_two_term(
    x: complex,
    y: complex,
    a: complex,
    b: complex,
    mu: float,
    nu: float,
    lam: float,
    exp: Exponent,
    tolerance: float | None = None,
) -> InequalityReport:
    """|x|^p/mu + |y|^p/nu >= |ax + by|^p/lambda in its three sign cases.

    (mu<0, nu>0, lambda<0) is Case (iii) as written; (mu>0, nu<0, lambda<0) is
    Case (iii) after swapping the two terms.
    """
    if mu > 0 and nu > 0 and lam > 0:
        sys = WeightedSystem(exponent=exp, a=(a, b), mu=(mu, nu), x=(x, y))
        return check_case_i(sys, lam, tolerance)
    if mu < 0 and nu > 0 and lam < 0:
        sys = WeightedSystem(exponent=exp, a=(a, b), mu=(mu, nu), x=(x, y))
        return check_case_iii(sys, lam, tolerance)
    if mu > 0 and nu < 0 and lam < 0:
        sys = WeightedSystem(exponent=exp, a=(b, a), mu=(nu, mu), x=(y, x))
        return check_case_iii(sys, lam, tolerance)
    raise DomainError(f"sign pattern mu={mu!r}, nu={nu!r}, lambda={lam!r} is not covered for two terms")


# =============================================================================
# Bohr specialization
# =============================================================================


def _check_bohr_domain(s: float, p: float) -> None:
    if not (1 < s <= 2):
        raise DomainError(f"Bohr's inequality needs 1 < s <= 2, got s={s!r}")
    if not (p > 1):
        raise DomainError(f"exponent p must exceed 1, got {p!r}")


def bohr_params(s: float, p: float) -> BohrParams:
    """a = s-1, b = 1, mu = 1/s, nu = 1/t, lambda = (s-1) s^(p-2)."""
    _check_bohr_domain(s, p)
    t = s / (s - 1.0)
    return BohrParams(
        s=s,
        t=t,
        p=p,
        a=s - 1.0,
        b=1.0,
        mu=1.0 / s,
        nu=1.0 / t,
        **{"lambda": (s - 1.0) * scalar_power(s, p - 2.0)},
    )


def bohr_matches_sharp(params: BohrParams) -> bool:
    """Whether the closed-form lambda equals the sharp constant of the mapped system."""
    sharp = sharp_lambda([params.mu, params.nu], [params.a, params.b], conjugate_exponent(params.p))
    return math.isclose(params.lam, sharp, rel_tol=IDENTITY_TOL)


def bohr_chain_check(
    s: float,
    p: float,
    x: float,
    y: float,
    tolerance: float | None = None,
) -> tuple[InequalityReport, InequalityReport]:
    """Both links of s x^p + t y^p >= ((s-1)x+y)^p/((s-1)s^(p-2)) >= ((s-1)x+y)^p/2^(p-2)."""
    _check_bohr_domain(s, p)
    if x < 0 or y < 0:
        raise DomainError(f"Bohr's inequality needs x, y >= 0, got x={x!r}, y={y!r}")
    params = bohr_params(s, p)

    combined = scalar_power((s - 1.0) * x + y, p)
    weighted = s * scalar_power(x, p) + params.t * scalar_power(y, p)
    middle = combined / params.lam
    outer = combined / scalar_power(2.0, p - 2.0)

    first = make_report(weighted, middle, tolerance=tolerance, guaranteed=True, case=CaseLabel.CASE_I)
    second = make_report(middle, outer, tolerance=tolerance, guaranteed=True)
    return first, second

"""Superquadratic refinements of the sharp power-sum bound.

x^p is superquadratic for p >= 2 and subquadratic for 1 < p <= 2. The discrete
Jensen refinement for such functions tightens the sharp bound by a remainder
that measures how far the points lie from the extremal ray. At p = 2 the bound
becomes an identity.
"""

import logging
import math
from collections.abc import Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict

from config import IDENTITY_TOL
from services.bounds import weighted_terms
from services.core import (
    DegenerateError,
    DomainError,
    WeightedSystem,
    conjugate_exponent,
    power,
    scalar_power,
)

logger = logging.getLogger(__name__)

SUPERQUADRATIC = "superquadratic"
SUBQUADRATIC = "subquadratic"
QUADRATIC = "quadratic"


def regime_of(p: float) -> str:
    if p == 2:
        return QUADRATIC
    return SUPERQUADRATIC if p > 2 else SUBQUADRATIC


# =============================================================================
# Domain Types
# =============================================================================


class SuperquadraticWitness(BaseModel):
    """f(x) = x^p together with its witness slope C_f(x) = p x^(p-1)."""

    model_config = ConfigDict(frozen=True)

    p: float

    def slope(self, x: float) -> float:
        return self.p * scalar_power(x, self.p - 1.0)

    @property
    def regime(self) -> str:
        return regime_of(self.p)


class JensenRefinement(BaseModel):
    model_config = ConfigDict(frozen=True)

    lhs: float
    rhs: float
    remainder: float
    mean: float
    regime: str


class RefinedBound(BaseModel):
    """main_term + correction, the refined lower bound for sum x_i^p / mu_i.

    For 1 < p < 2 the direction reverses: lhs <= total.
    """

    model_config = ConfigDict(frozen=True)

    main_term: float
    correction: float
    total: float
    A: tuple[float, ...]
    weighted_mean: float
    lhs: float
    regime: str


class EulerLagrange(BaseModel):
    model_config = ConfigDict(frozen=True)

    lhs: float
    rhs: float
    agree: bool


class GapBound(BaseModel):
    """0 <= gap <= upper for the subquadratic range."""

    model_config = ConfigDict(frozen=True)

    gap: float
    upper: float
    main_term: float
    lhs: float


# =============================================================================
# Pointwise definition and discrete Jensen
# =============================================================================


def superquadratic_check(p: float, x: float, y: float) -> float:
    """f(y) - f(x) - C_f(x)(y - x) - f(|y - x|) for f(x) = x^p."""
    if x < 0 or y < 0:
        raise DomainError(f"superquadracity is defined on [0, inf), got x={x!r}, y={y!r}")
    witness = SuperquadraticWitness(p=conjugate_exponent(p).p)
    return (
        scalar_power(y, p)
        - scalar_power(x, p)
        - witness.slope(x) * (y - x)
        - scalar_power(abs(y - x), p)
    )


def jensen_refinement(p: float, alpha: Sequence[float], x: Sequence[float]) -> JensenRefinement:
    """(sum alpha_i x_i)^p against sum alpha_i (x_i^p - |x_i - mean|^p).

    lhs <= rhs for p >= 2; the inequality reverses for 1 < p <= 2.
    """
    exp = conjugate_exponent(p)
    weights = np.asarray(alpha, dtype=float)
    points = np.asarray(x, dtype=float)
    if weights.size == 0 or weights.shape != points.shape:
        raise DomainError(f"alpha and x must be nonempty and of equal length, got {len(alpha)} and {len(x)}")
    if np.any(weights < 0) or abs(math.fsum(weights) - 1.0) > IDENTITY_TOL:
        raise DomainError(f"alpha must be nonnegative and sum to 1, got {list(alpha)}")
    if np.any(points < 0):
        raise DomainError(f"points must be nonnegative, got {list(x)}")

    mean = math.fsum(weights * points)
    remainder = math.fsum(weights * power(np.abs(points - mean), exp.p))
    return JensenRefinement(
        lhs=scalar_power(mean, exp.p),
        rhs=math.fsum(weights * power(points, exp.p)) - remainder,
        remainder=remainder,
        mean=mean,
        regime=regime_of(exp.p),
    )


# =============================================================================
# Refined bound
# =============================================================================


def _nonnegative_reals(values: Sequence[complex], name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=complex)
    if np.any(arr.imag != 0) or np.any(arr.real < 0):
        raise DomainError(f"{name} must be nonnegative reals, got {list(values)}")
    return arr.real.copy()


def _refinement_inputs(sys: WeightedSystem) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    x = _nonnegative_reals(sys.require_points(), "x")
    a = _nonnegative_reals(sys.a, "a")
    mu = np.asarray(sys.mu, dtype=float)
    if np.any(mu <= 0):
        raise DomainError(f"the refined bound needs mu_i > 0, got mu={list(sys.mu)}")
    return x, a, mu


def refined_bound(sys: WeightedSystem) -> RefinedBound:
    """Split sum x_i^p/mu_i into the sharp main term plus a Jensen remainder.

    With S = sum mu_j^(1/(p-1)) a_j^q and A_i = S x_i / (a_i mu_i)^(1/(p-1)),
    the remainder is sum_i [mu_i^(1/(p-1)) a_i^q / S^p] |A_i - sum_j a_j x_j|^p.
    Terms with a_i = 0 carry zero weight and report A_i = 0.
    """
    x, a, mu = _refinement_inputs(sys)
    exp = sys.exponent
    p = exp.p

    terms = weighted_terms(mu, a, exp)
    total_weight = math.fsum(terms)
    if total_weight == 0:
        raise DegenerateError("all coefficients a_i are zero; the refined bound is undefined")

    mean = math.fsum(a * x)
    active = a > 0
    A = np.zeros_like(x)
    A[active] = total_weight * x[active] / power(a[active] * mu[active], exp.inverse_power)

    weights = terms / scalar_power(total_weight, p)
    correction = math.fsum(weights[active] * power(np.abs(A[active] - mean), p))
    main_term = scalar_power(mean, p) / scalar_power(total_weight, p - 1.0)

    return RefinedBound(
        main_term=main_term,
        correction=correction,
        total=main_term + correction,
        A=tuple(A.tolist()),
        weighted_mean=mean,
        lhs=math.fsum(power(x, p) / mu),
        regime=regime_of(p),
    )


def corollary2_refined_n2(
    x: float,
    y: float,
    a: float,
    b: float,
    mu: float,
    nu: float,
    p: float,
) -> RefinedBound:
    """Two-term refined bound written out directly.

    x^p/mu + y^p/nu >= (ax+by)^p / D^(p-1)
                       + mu^(1/(p-1)) a^q |(1/(a mu))^(1/(p-1)) x - (ax+by)/D|^p
                       + nu^(1/(p-1)) b^q |(1/(b nu))^(1/(p-1)) y - (ax+by)/D|^p
    with D = mu^(1/(p-1)) a^q + nu^(1/(p-1)) b^q.
    """
    exp = conjugate_exponent(p)
    if min(x, y, a, b) < 0:
        raise DomainError(f"x, y, a, b must be nonnegative, got {(x, y, a, b)}")
    if mu <= 0 or nu <= 0:
        raise DomainError(f"mu and nu must be positive, got mu={mu!r}, nu={nu!r}")

    r = exp.inverse_power
    first = scalar_power(mu, r) * scalar_power(a, exp.q)
    second = scalar_power(nu, r) * scalar_power(b, exp.q)
    D = first + second
    if D == 0:
        raise DegenerateError("a and b are both zero; the refined bound is undefined")

    combo = a * x + b * y
    scaled_mean = combo / D
    correction = 0.0
    A = [0.0, 0.0]
    if a > 0:
        unit = scalar_power(1.0 / (a * mu), r) * x
        A[0] = D * unit
        correction += first * scalar_power(abs(unit - scaled_mean), p)
    if b > 0:
        unit = scalar_power(1.0 / (b * nu), r) * y
        A[1] = D * unit
        correction += second * scalar_power(abs(unit - scaled_mean), p)

    main_term = scalar_power(combo, p) / scalar_power(D, p - 1.0)
    return RefinedBound(
        main_term=main_term,
        correction=correction,
        total=main_term + correction,
        A=tuple(A),
        weighted_mean=combo,
        lhs=scalar_power(x, p) / mu + scalar_power(y, p) / nu,
        regime=regime_of(p),
    )


def euler_lagrange_identity(x: float, y: float, a: float, b: float, mu: float, nu: float) -> EulerLagrange:
    """x^2/mu + y^2/nu = (ax+by)^2/(mu a^2 + nu b^2) + (nu b x - a mu y)^2/(mu nu (mu a^2 + nu b^2))."""
    denominator = mu * a * a + nu * b * b
    if mu == 0 or nu == 0 or denominator == 0:
        raise DomainError(f"mu, nu and mu*a^2 + nu*b^2 must be nonzero, got mu={mu!r}, nu={nu!r}, a={a!r}, b={b!r}")

    lhs_terms = (x * x / mu, y * y / nu)
    rhs_terms = ((a * x + b * y) ** 2 / denominator, (nu * b * x - a * mu * y) ** 2 / (mu * nu * denominator))
    lhs, rhs = math.fsum(lhs_terms), math.fsum(rhs_terms)

    # signed weights can cancel, so compare against the size of the summands
    scale = max(1.0, *(abs(t) for t in lhs_terms + rhs_terms))
    return EulerLagrange(lhs=lhs, rhs=rhs, agree=abs(lhs - rhs) <= IDENTITY_TOL * scale)


def corollary3_gap(sys: WeightedSystem) -> GapBound:
    """gap = sum x_i^p/mu_i - main_term, bounded above by the remainder for 1 < p <= 2."""
    if sys.p > 2:
        raise DomainError(f"the gap bound needs 1 < p <= 2, got p={sys.p}")
    bound = refined_bound(sys)
    return GapBound(
        gap=bound.lhs - bound.main_term,
        upper=bound.correction,
        main_term=bound.main_term,
        lhs=bound.lhs,
    )

"""Domain types, conjugate-exponent algebra and sign-case classification.

Every bound evaluation in sharpbound first reduces complex inputs to their
moduli, so the numerical work below operates on nonnegative reals.
"""

import math
from collections.abc import Sequence
from enum import Enum

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from config import CONJUGACY_TOL, IDENTITY_TOL, MAX_EXPONENT, VERDICT_TOL


# =============================================================================
# Errors
# =============================================================================


class DomainError(ValueError):
    """Input lies outside the domain where an operation is defined."""


class DegenerateError(ValueError):
    """Every coefficient vanishes, so the bound is vacuous."""


class ConvergenceError(RuntimeError):
    """A search exhausted its budget without meeting its contract."""


# =============================================================================
# Complex inputs
# =============================================================================


def as_complex(value) -> complex:
    """A number, or an [re, im] pair, as a complex."""
    try:
        if isinstance(value, (list, tuple)):
            if len(value) != 2:
                raise ValueError(f"complex values are [re, im] pairs, got {value!r}")
            return complex(float(value[0]), float(value[1]))
        return complex(value)
    except TypeError as e:
        raise ValueError(f"cannot read {value!r} as a complex number") from e


# =============================================================================
# Domain Types
# =============================================================================


class Exponent(BaseModel):
    """A Hölder pair p, q with 1/p + 1/q = 1."""

    model_config = ConfigDict(frozen=True)

    p: float = Field(gt=1)
    q: float = Field(gt=1)

    @model_validator(mode="after")
    def _check_conjugacy(self) -> "Exponent":
        total = 1.0 / self.p + 1.0 / self.q
        if abs(total - 1.0) > CONJUGACY_TOL:
            raise DomainError(f"p={self.p} and q={self.q} are not conjugate (1/p + 1/q = {total!r})")
        return self

    @property
    def inverse_power(self) -> float:
        """1/(p-1), the power applied to the weights μ_i."""
        return 1.0 / (self.p - 1.0)


class CaseLabel(str, Enum):
    CASE_I = "CaseI"
    CASE_II = "CaseII"
    CASE_III = "CaseIII"
    UNCLASSIFIED = "Unclassified"


class WeightedSystem(BaseModel):
    """Exponent, coefficients a_i, signed weights μ_i and optional points x_i."""

    model_config = ConfigDict(frozen=True)

    exponent: Exponent
    a: tuple[complex, ...]
    mu: tuple[float, ...]
    x: tuple[complex, ...] | None = None

    @field_validator("a", "x", mode="before")
    @classmethod
    def _coerce_complex(cls, values):
        if values is None:
            return None
        return tuple(as_complex(v) for v in values)

    @field_validator("mu", mode="before")
    @classmethod
    def _coerce_real(cls, values):
        return tuple(float(v) for v in values)

    @model_validator(mode="after")
    def _check_shape(self) -> "WeightedSystem":
        if len(self.a) == 0:
            raise DomainError("a weighted system needs at least one term")
        if len(self.mu) != len(self.a):
            raise DomainError(f"len(mu)={len(self.mu)} does not match len(a)={len(self.a)}")
        if self.x is not None and len(self.x) != len(self.a):
            raise DomainError(f"len(x)={len(self.x)} does not match len(a)={len(self.a)}")
        if any(m == 0 for m in self.mu):
            raise DomainError(f"every weight must be nonzero, got mu={list(self.mu)}")
        return self

    @property
    def p(self) -> float:
        return self.exponent.p

    @property
    def n(self) -> int:
        return len(self.a)

    def require_points(self) -> tuple[complex, ...]:
        if self.x is None:
            raise DomainError("this operation needs the points x")
        return self.x


class BoundCertificate(BaseModel):
    """Sharp constant, Q-weights and extremal point for a Case (i) system."""

    model_config = ConfigDict(frozen=True)

    lambda_bar: float = Field(gt=0)
    Q: tuple[float, ...]
    x_star: tuple[float, ...]
    case: CaseLabel = CaseLabel.CASE_I

    @model_validator(mode="after")
    def _check_q_sum(self) -> "BoundCertificate":
        total = math.fsum(self.Q)
        if not math.isclose(total * self.lambda_bar, 1.0, rel_tol=IDENTITY_TOL):
            raise DomainError(f"sum(Q)={total!r} is not 1/lambda_bar for lambda_bar={self.lambda_bar!r}")
        return self


class InequalityReport(BaseModel):
    """Both sides of one inequality instance and its verdict.

    ``direction`` is "ge" for lhs >= rhs and "le" for the reversed form; the
    margin is always the slack in the claimed direction.
    """

    model_config = ConfigDict(frozen=True)

    lhs: float
    rhs: float
    margin: float
    holds: bool
    tolerance_used: float
    direction: str = "ge"
    guaranteed: bool | None = None
    case: CaseLabel | None = None


# =============================================================================
# Numerics
# =============================================================================


def power(values, exponent: float) -> np.ndarray:
    """Elementwise values**exponent as exp(exponent*ln(v)), with 0 mapped to 0."""
    values = np.asarray(values, dtype=float)
    if np.any(values < 0):
        raise DomainError("power() is only defined for nonnegative inputs")
    out = np.zeros_like(values)
    positive = values > 0
    out[positive] = np.exp(exponent * np.log(values[positive]))
    return out


def scalar_power(value: float, exponent: float) -> float:
    if value < 0:
        raise DomainError(f"power() is only defined for nonnegative inputs, got {value!r}")
    if value == 0:
        return 0.0
    return math.exp(exponent * math.log(value))


def verdict_scale(*values: float) -> float:
    return max(1.0, *(abs(v) for v in values))


def make_report(
    lhs: float,
    rhs: float,
    *,
    direction: str = "ge",
    tolerance: float | None = None,
    guaranteed: bool | None = None,
    case: CaseLabel | None = None,
) -> InequalityReport:
    """Build an InequalityReport, computing the oriented margin and verdict."""
    tol = VERDICT_TOL if tolerance is None else tolerance
    margin = lhs - rhs if direction == "ge" else rhs - lhs
    holds = margin >= -tol * verdict_scale(lhs, rhs)
    return InequalityReport(
        lhs=lhs,
        rhs=rhs,
        margin=margin,
        holds=holds,
        tolerance_used=tol,
        direction=direction,
        guaranteed=guaranteed,
        case=case,
    )


# =============================================================================
# Operations
# =============================================================================


def conjugate_exponent(p: float) -> Exponent:
    """Return the Hölder pair (p, p/(p-1)) for p in (1, MAX_EXPONENT]."""
    if not (p > 1):
        raise DomainError(f"exponent p must exceed 1, got {p!r}")
    if p > MAX_EXPONENT:
        raise DomainError(f"exponent p={p!r} exceeds the supported maximum {MAX_EXPONENT}")
    return Exponent(p=p, q=p / (p - 1.0))


def classify_case(mu: Sequence[float], lam: float) -> CaseLabel:
    """Match the sign pattern of (mu, lambda) against the three certified cases."""
    if lam == 0 or any(m == 0 for m in mu):
        raise DomainError(f"weights and lambda must be nonzero, got mu={list(mu)}, lambda={lam!r}")
    first, rest = mu[0], mu[1:]

    if lam > 0 and all(m > 0 for m in mu):
        return CaseLabel.CASE_I
    # Cases (ii) and (iii) need a weight of each sign
    if rest and lam > 0 and first > 0 and all(m < 0 for m in rest):
        return CaseLabel.CASE_II
    if rest and lam < 0 and first < 0 and all(m > 0 for m in rest):
        return CaseLabel.CASE_III
    return CaseLabel.UNCLASSIFIED


def moduli(x: Sequence[complex]) -> list[float]:
    """|x_i| elementwise."""
    return np.abs(np.asarray(x, dtype=complex)).tolist()


def moduli_array(x: Sequence[complex]) -> np.ndarray:
    return np.abs(np.asarray(x, dtype=complex))

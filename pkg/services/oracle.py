"""Brute-force verification: ratio maximization and seeded fuzz campaigns.

Every trial draws from its own PCG64 stream seeded by (seed, trial index), so a
campaign produces the same report whether trials run serially or in a process
pool.
"""

import logging
import math
import time
from collections.abc import Callable, Sequence
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from typing import Any, NamedTuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from config import (
    DEFAULT_BOX,
    DEFAULT_INITIAL_STEP,
    DEFAULT_LOCAL_STEPS,
    DEFAULT_SEED,
    DEFAULT_STEP_DECAY,
    DEFAULT_TRIALS,
    IDENTITY_TOL,
    VERDICT_TOL,
    WORKERS,
)
from services.bounds import (
    admissible_case_i,
    bohr_chain_check,
    bohr_matches_sharp,
    bohr_params,
    case_ii_bound,
    case_ii_transform,
    check_case_i,
    check_case_ii,
    check_case_iii,
    extremal_point,
    sharp_lambda,
)
from services.core import (
    CaseLabel,
    ConvergenceError,
    DomainError,
    Exponent,
    WeightedSystem,
    conjugate_exponent,
    power,
    verdict_scale,
)
from services.superquad import (
    SuperquadraticWitness,
    corollary3_gap,
    euler_lagrange_identity,
    refined_bound,
    superquadratic_check,
)

logger = logging.getLogger(__name__)

# Sampling ranges for random instances
MU_RANGE = (0.1, 10.0)
A_RANGE = (0.0, 10.0)
SUPERQUAD_RANGE = (0.0, 100.0)
SUPERQUAD_EXPONENTS = (1.1, 1.5, 2.0, 2.5, 3.0, 5.0)
MAX_RESAMPLES = 1000

# Local refinement
MAX_SWEEPS = 32
IMPROVEMENT_EPS = 4 * np.finfo(float).eps

SHARPNESS_UPPER_TOL = 1e-9
EQUALITY_RAY_TOL = 1e-6


# =============================================================================
# Domain Types
# =============================================================================


class SearchConfig(BaseModel):
    """Seed and budget for a search or campaign; box bounds every coordinate of x."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    seed: int = Field(default=DEFAULT_SEED, ge=0, lt=2**64)
    trials: int = Field(default=DEFAULT_TRIALS, gt=0)
    local_steps: int = Field(default=DEFAULT_LOCAL_STEPS, gt=0)
    step_decay: float = Field(default=DEFAULT_STEP_DECAY, gt=0, lt=1)
    initial_step: float = Field(default=DEFAULT_INITIAL_STEP, gt=0, lt=1)
    box: tuple[float, float] = DEFAULT_BOX
    workers: int = Field(default=WORKERS, ge=1)

    @model_validator(mode="after")
    def _check_box(self) -> "SearchConfig":
        lo, hi = self.box
        if not (0 <= lo < hi):
            raise DomainError(f"box must satisfy 0 <= lo < hi, got {self.box}")
        return self


class Violation(BaseModel):
    trial: int
    check: str
    input: dict[str, Any]
    margin: float


class CampaignReport(BaseModel):
    campaign: str
    seed: int
    instances_tested: int
    violations: list[Violation]
    worst_margin: float
    best_ratio_found: float | None = None
    reference: float | None = None
    guaranteed: bool = True


class Probe(NamedTuple):
    check: str
    input: dict[str, Any]
    margin: float
    ok: bool


# =============================================================================
# Campaign plumbing
# =============================================================================


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Independent PCG64 stream for one trial."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, trial])))


def _run_campaign(
    name: str,
    trial_fn: Callable[[int], list[Probe]],
    cfg: SearchConfig,
    guaranteed: bool = True,
) -> CampaignReport:
    started = time.monotonic()
    logger.info("Campaign %s: %d trials, seed=%d, workers=%d", name, cfg.trials, cfg.seed, cfg.workers)

    if cfg.workers > 1:
        chunksize = max(1, cfg.trials // (cfg.workers * 8))
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            outcomes = list(pool.map(trial_fn, range(cfg.trials), chunksize=chunksize))
    else:
        outcomes = [trial_fn(trial) for trial in range(cfg.trials)]

    # Reduction in trial order keeps serial and parallel runs identical
    violations: list[Violation] = []
    worst = math.inf
    for trial, probes in enumerate(outcomes):
        for probe in probes:
            worst = min(worst, probe.margin)
            if not probe.ok:
                violations.append(Violation(trial=trial, check=probe.check, input=probe.input, margin=probe.margin))

    elapsed = time.monotonic() - started
    logger.info("Campaign %s finished in %.2fs with %d violations", name, elapsed, len(violations))
    if guaranteed:
        for violation in violations[:10]:
            logger.warning("Campaign %s violation at trial %d (%s): margin=%r", name, violation.trial, violation.check, violation.margin)

    return CampaignReport(
        campaign=name,
        seed=cfg.seed,
        instances_tested=cfg.trials,
        violations=violations,
        worst_margin=worst if math.isfinite(worst) else 0.0,
        guaranteed=guaranteed,
    )


def _report_probe(check: str, report, payload: dict[str, Any]) -> Probe:
    return Probe(check=check, input=payload, margin=report.margin, ok=report.holds)


def _system_payload(exp: Exponent, mu, a, x, lam: float) -> dict[str, Any]:
    return {
        "p": exp.p,
        "mu": [float(m) for m in mu],
        "a": [float(v) for v in a],
        "x": [float(v) for v in x],
        "lambda": float(lam),
    }


# =============================================================================
# Ratio maximization
# =============================================================================


def _ratio(linear: np.ndarray, weighted: np.ndarray, p: float) -> np.ndarray:
    """|sum a_i x_i|^p / sum x_i^p/mu_i, with 0 for the zero vector."""
    out = np.zeros_like(weighted)
    nonzero = weighted > 0
    out[nonzero] = power(linear[nonzero], p) / weighted[nonzero]
    return out


def _maximize_ratio(
    mu: Sequence[float],
    a: Sequence[complex],
    exp: Exponent,
    cfg: SearchConfig,
) -> tuple[float, np.ndarray]:
    """Random restarts in the box, then multiplicative coordinate refinement.

    The ratio is invariant under scaling of x, so steps are relative:
    x_i <- x_i (1 +- delta), with delta decaying geometrically per level.
    """
    sharp_lambda(mu, a, exp)  # validates the Case (i) parameters
    mu_arr = np.asarray(mu, dtype=float)
    abs_a = np.abs(np.asarray(a, dtype=complex))
    inv_mu = 1.0 / mu_arr
    p = exp.p
    n = mu_arr.size

    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(cfg.seed)))
    X = rng.uniform(cfg.box[0], cfg.box[1], size=(cfg.trials, n))
    linear = X @ abs_a
    weighted = power(X, p) @ inv_mu
    ratio = _ratio(linear, weighted, p)

    delta = cfg.initial_step
    for _ in range(cfg.local_steps):
        for _ in range(MAX_SWEEPS):
            improved = False
            for i in range(n):
                for factor in (1.0 + delta, 1.0 - delta):
                    column = X[:, i]
                    cand_linear = linear + abs_a[i] * column * (factor - 1.0)
                    cand_weighted = weighted + power(column, p) * inv_mu[i] * (power(factor, p) - 1.0)
                    candidate = _ratio(cand_linear, cand_weighted, p)
                    better = candidate > ratio * (1.0 + IMPROVEMENT_EPS)
                    if not better.any():
                        continue
                    improved = True
                    X[better, i] *= factor
                    # recompute touched rows exactly so rounding does not accumulate
                    linear[better] = X[better] @ abs_a
                    weighted[better] = power(X[better], p) @ inv_mu
                    ratio[better] = _ratio(linear[better], weighted[better], p)
            if not improved:
                break
        delta *= cfg.step_decay

    best = int(np.argmax(ratio))
    return float(ratio[best]), X[best].copy()


def sharpness_search(mu: Sequence[float], a: Sequence[complex], exp: Exponent, cfg: SearchConfig) -> float:
    """Supremum of |sum a_i x_i|^p / sum x_i^p/mu_i found over nonnegative x."""
    best_ratio, _ = _maximize_ratio(mu, a, exp, cfg)
    return best_ratio


def sharpness_campaign(mu: Sequence[float], a: Sequence[complex], exp: Exponent, cfg: SearchConfig) -> CampaignReport:
    """Run sharpness_search and flag any ratio above the sharp constant."""
    started = time.monotonic()
    lam_bar = sharp_lambda(mu, a, exp)
    best_ratio, x_best = _maximize_ratio(mu, a, exp, cfg)
    margin = lam_bar - best_ratio

    violations = []
    if best_ratio > lam_bar * (1.0 + SHARPNESS_UPPER_TOL):
        payload = {"p": exp.p, "mu": [float(m) for m in mu], "a": [abs(complex(v)) for v in a], "x": x_best.tolist()}
        violations.append(Violation(trial=0, check="ratio_above_sharp_constant", input=payload, margin=margin))
    logger.info(
        "Sharpness search: best ratio %r vs lambda_bar %r after %.2fs",
        best_ratio,
        lam_bar,
        time.monotonic() - started,
    )
    return CampaignReport(
        campaign="sharpness",
        seed=cfg.seed,
        instances_tested=cfg.trials,
        violations=violations,
        worst_margin=margin,
        best_ratio_found=best_ratio,
        reference=lam_bar,
    )


def equality_probe(mu: Sequence[float], a: Sequence[complex], exp: Exponent, cfg: SearchConfig) -> list[float]:
    """Unit-norm point where the margin at lambda_bar is smallest.

    Minimizing the margin at lambda_bar is the same as maximizing the ratio,
    so the search result must lie on the extremal ray.
    """
    _, x_best = _maximize_ratio(mu, a, exp, cfg)
    x_eq = x_best / np.linalg.norm(x_best)
    ray = np.asarray(extremal_point(mu, a, exp))
    ray = ray / np.linalg.norm(ray)
    distance = float(np.linalg.norm(x_eq - ray))
    if distance > EQUALITY_RAY_TOL:
        raise ConvergenceError(f"no near-equality point found: distance to the extremal ray is {distance:.3e}")
    return x_eq.tolist()


# =============================================================================
# Case fuzzing
# =============================================================================


def _case_i_trial(n: int, p: float, cfg: SearchConfig, lambda_scale: float, trial: int) -> list[Probe]:
    rng = trial_rng(cfg.seed, trial)
    exp = conjugate_exponent(p)
    mu = rng.uniform(*MU_RANGE, size=n)
    a = rng.uniform(*A_RANGE, size=n)
    x = rng.uniform(*cfg.box, size=n)

    lam_bar = sharp_lambda(mu, a, exp)
    boundary = lam_bar * lambda_scale
    inside = boundary * (1.0 + rng.uniform(0.01, 1.0))
    x_star = extremal_point(mu, a, exp)

    probes = []
    for label, point, lam in (("boundary", x, boundary), ("inside", x, inside), ("extremal", x_star, boundary)):
        sys = WeightedSystem(exponent=exp, a=a, mu=mu, x=point)
        report = check_case_i(sys, lam, tolerance=VERDICT_TOL)
        probes.append(_report_probe(f"case_i_{label}", report, _system_payload(exp, mu, a, point, lam)))
    return probes


def _sample_case_ii(rng: np.random.Generator, n: int, exp: Exponent) -> tuple[np.ndarray, np.ndarray, float]:
    """Case (ii) weights and coefficients whose admissible lambda range is nonempty."""
    for _ in range(MAX_RESAMPLES):
        mu = -rng.uniform(*MU_RANGE, size=n)
        mu[0] = -mu[0]
        a = rng.uniform(*A_RANGE, size=n)
        bound = case_ii_bound(mu, a, exp)
        if bound > 0 and a[0] > 0:
            return mu, a, bound
    raise ConvergenceError(f"no Case (ii) instance with a positive bound after {MAX_RESAMPLES} draws")


def _case_ii_equality_point(mu: np.ndarray, a: np.ndarray, exp: Exponent, lam: float) -> np.ndarray:
    """Pull the transformed system's extremal point back to the original x."""
    C = np.concatenate(([1.0 / a[0]], -a[1:] / a[0]))
    nu = np.concatenate(([abs(lam)], np.abs(mu[1:])))
    z = power(np.abs(C) * nu, exp.inverse_power) * np.sign(C)
    x = z.copy()
    x[0] = float(np.dot(C, z))
    return x


def _case_ii_trial(
    n: int,
    p: float,
    cfg: SearchConfig,
    lambda_scale: float,
    negate: bool,
    trial: int,
) -> list[Probe]:
    rng = trial_rng(cfg.seed, trial)
    exp = conjugate_exponent(p)
    mu, a, bound = _sample_case_ii(rng, n, exp)
    x = rng.uniform(*cfg.box, size=n) * rng.choice((-1.0, 1.0), size=n)

    boundary = bound ** (exp.p - 1.0) / lambda_scale
    inside = boundary * rng.uniform(0.01, 0.99)
    x_eq = _case_ii_equality_point(mu, a, exp, boundary)

    sign = -1.0 if negate else 1.0
    check = check_case_iii if negate else check_case_ii
    name = "case_iii" if negate else "case_ii"

    probes = []
    for label, point, lam in (("boundary", x, boundary), ("inside", x, inside), ("equality", x_eq, boundary)):
        signed_mu, signed_lam = sign * mu, sign * lam
        sys = WeightedSystem(exponent=exp, a=a, mu=signed_mu, x=point)
        report = check(sys, signed_lam, tolerance=VERDICT_TOL)
        payload = _system_payload(exp, signed_mu, a, point, signed_lam)
        probes.append(_report_probe(f"{name}_{label}", report, payload))

        if not negate:
            probes.extend(_transform_probes(sys, lam, report, payload))
    return probes


def _transform_probes(sys: WeightedSystem, lam: float, report, payload: dict[str, Any]) -> list[Probe]:
    """The Case (i) image must agree on admissibility and on the verdict."""
    transform = case_ii_transform(sys, lam)
    image = transform.as_system(sys.exponent)
    admissible = admissible_case_i(image.mu, image.a, sys.exponent, transform.Lambda)
    image_report = check_case_i(image, transform.Lambda, tolerance=report.tolerance_used)
    first = sys.x[0]
    rebuilt = transform.reconstruct_first_point()
    reconstruction_error = abs(rebuilt - first) - IDENTITY_TOL * max(1.0, abs(first))
    return [
        Probe("transform_admissibility", payload, 0.0 if admissible == report.guaranteed else -1.0, admissible == report.guaranteed),
        Probe("transform_verdict", payload, image_report.margin, image_report.holds == report.holds),
        Probe("transform_reconstruction", payload, -max(reconstruction_error, 0.0), reconstruction_error <= 0),
    ]


def fuzz_case(
    case: CaseLabel,
    n: int,
    exp: Exponent,
    cfg: SearchConfig,
    lambda_scale: float = 1.0,
) -> CampaignReport:
    """Random instances of one sign case at and inside the admissible boundary.

    lambda_scale < 1 pushes lambda outside the admissible set in every case,
    which should produce counterexamples at the equality configuration.
    """
    if lambda_scale <= 0:
        raise DomainError(f"lambda_scale must be positive, got {lambda_scale!r}")
    if case is CaseLabel.CASE_I:
        if n < 1:
            raise DomainError(f"Case (i) needs n >= 1, got {n}")
        trial_fn = partial(_case_i_trial, n, exp.p, cfg, lambda_scale)
    elif case in (CaseLabel.CASE_II, CaseLabel.CASE_III):
        if n < 2:
            raise DomainError(f"{case.value} needs n >= 2, got {n}")
        trial_fn = partial(_case_ii_trial, n, exp.p, cfg, lambda_scale, case is CaseLabel.CASE_III)
    else:
        raise DomainError(f"cannot fuzz case {case.value}")
    return _run_campaign(f"{case.value}/n={n}/p={exp.p}", trial_fn, cfg, guaranteed=lambda_scale >= 1)


# =============================================================================
# Refinement fuzzing
# =============================================================================


def _refinement_trial(n: int, p: float, cfg: SearchConfig, trial: int) -> list[Probe]:
    rng = trial_rng(cfg.seed, trial)
    exp = conjugate_exponent(p)
    mu = rng.uniform(*MU_RANGE, size=n)
    a = rng.uniform(*A_RANGE, size=n)
    x = rng.uniform(*cfg.box, size=n)
    payload = {"p": p, "mu": mu.tolist(), "a": a.tolist(), "x": x.tolist()}

    sys = WeightedSystem(exponent=exp, a=a, mu=mu, x=x)
    bound = refined_bound(sys)
    scale = verdict_scale(bound.lhs, bound.total)
    threshold = -VERDICT_TOL * scale

    probes = []
    if p >= 2:
        lower = bound.lhs - bound.total
        probes.append(Probe("lhs_ge_total", payload, lower, lower >= threshold))
        probes.append(Probe("total_ge_main", payload, bound.correction, bound.correction >= threshold))
        if p == 2:
            slack = -abs(bound.lhs - bound.total)
            probes.append(Probe("identity_at_p2", payload, slack, -slack <= IDENTITY_TOL * max(bound.lhs, 1.0)))
    else:
        gap = corollary3_gap(sys)
        probes.append(Probe("gap_nonnegative", payload, gap.gap, gap.gap >= threshold))
        probes.append(Probe("gap_le_upper", payload, gap.upper - gap.gap, gap.upper - gap.gap >= threshold))

    x_star = extremal_point(mu, a, exp)
    at_star = refined_bound(WeightedSystem(exponent=exp, a=a, mu=mu, x=x_star))
    excess = at_star.correction - IDENTITY_TOL * at_star.main_term
    probes.append(Probe("remainder_vanishes", {**payload, "x": x_star}, -max(excess, 0.0), excess <= 0))
    return probes


def fuzz_refinement(n: int, p: float, cfg: SearchConfig) -> CampaignReport:
    """LHS >= total >= main_term for p >= 2; 0 <= gap <= upper for 1 < p <= 2."""
    if n < 1:
        raise DomainError(f"refinement fuzzing needs n >= 1, got {n}")
    exp = conjugate_exponent(p)
    return _run_campaign(f"refinement/n={n}/p={exp.p}", partial(_refinement_trial, n, exp.p, cfg), cfg)


# =============================================================================
# Bohr, identity and superquadracity fuzzing
# =============================================================================


def _bohr_trial(cfg: SearchConfig, trial: int) -> list[Probe]:
    rng = trial_rng(cfg.seed, trial)
    s = 2.0 - 0.99 * rng.random()
    p = 6.0 - 4.95 * rng.random()
    x, y = rng.uniform(*cfg.box, size=2)
    payload = {"s": s, "p": p, "x": float(x), "y": float(y)}

    first, second = bohr_chain_check(s, p, float(x), float(y), tolerance=VERDICT_TOL)
    matches = bohr_matches_sharp(bohr_params(s, p))
    return [
        _report_probe("bohr_first_link", first, payload),
        _report_probe("bohr_second_link", second, payload),
        Probe("bohr_lambda_is_sharp", payload, 0.0 if matches else -1.0, matches),
    ]


def fuzz_bohr(cfg: SearchConfig) -> CampaignReport:
    """Both links of Bohr's chain and the sharpness of its constant."""
    return _run_campaign("bohr", partial(_bohr_trial, cfg), cfg)


def _identity_trial(cfg: SearchConfig, trial: int) -> list[Probe]:
    rng = trial_rng(cfg.seed, trial)
    for _ in range(MAX_RESAMPLES):
        x, y, a, b = (float(v) for v in rng.uniform(-10.0, 10.0, size=4))
        mu, nu = (float(v) for v in rng.uniform(*MU_RANGE, size=2) * rng.choice((-1.0, 1.0), size=2))
        if abs(mu * a * a + nu * b * b) >= MU_RANGE[0]:
            break
    else:
        raise ConvergenceError(f"no identity instance with a usable denominator after {MAX_RESAMPLES} draws")

    result = euler_lagrange_identity(x, y, a, b, mu, nu)
    payload = {"x": x, "y": y, "a": a, "b": b, "mu": mu, "nu": nu}
    return [Probe("euler_lagrange", payload, -abs(result.lhs - result.rhs), result.agree)]


def fuzz_identity(cfg: SearchConfig) -> CampaignReport:
    """The two-term Euler-Lagrange identity on random signed weights."""
    return _run_campaign("identity", partial(_identity_trial, cfg), cfg)


def _superquadratic_trial(cfg: SearchConfig, trial: int) -> list[Probe]:
    rng = trial_rng(cfg.seed, trial)
    p = float(rng.choice(SUPERQUAD_EXPONENTS)) if trial % 2 == 0 else 6.0 - 4.95 * rng.random()
    x, y = rng.uniform(*SUPERQUAD_RANGE, size=2)
    x, y = float(x), float(y)
    payload = {"p": p, "x": x, "y": y}

    margin = superquadratic_check(p, x, y)
    witness = SuperquadraticWitness(p=p)
    scale = verdict_scale(y**p, x**p, witness.slope(x) * (y - x), abs(y - x) ** p)
    allowed = IDENTITY_TOL * scale

    if p == 2:
        return [Probe("quadratic_identity", payload, -abs(margin), abs(margin) <= allowed)]
    if p > 2:
        return [Probe("superquadratic", payload, margin, margin >= -allowed)]
    return [Probe("subquadratic", payload, -margin, margin <= allowed)]


def fuzz_superquadratic(cfg: SearchConfig) -> CampaignReport:
    """Sign of the superquadracity margin on both sides of p = 2."""
    return _run_campaign("superquadratic", partial(_superquadratic_trial, cfg), cfg)

"""Command dispatch shared by the CLI and the HTTP router."""

import json
import logging
from typing import Any, NamedTuple

from pydantic import ValidationError

from models import (
    BohrRequest,
    CheckRequest,
    Command,
    FuzzRequest,
    IdentityRequest,
    JobOptions,
    JobSpec,
    LambdaRequest,
    RefineRequest,
    SearchInput,
    SharpnessRequest,
)
from services import bounds, oracle, superquad
from services.core import (
    CaseLabel,
    ConvergenceError,
    DegenerateError,
    DomainError,
    WeightedSystem,
    as_complex,
    conjugate_exponent,
)

logger = logging.getLogger(__name__)


class JobResult(NamedTuple):
    payload: dict[str, Any]
    violation: bool = False


def error_kind(exc: BaseException) -> str | None:
    """Classify an exception for the {"error": {"kind", "detail"}} object."""
    if isinstance(exc, ValidationError):
        return "validation"
    if isinstance(exc, DegenerateError):
        return "degenerate"
    if isinstance(exc, DomainError):
        return "domain"
    if isinstance(exc, ConvergenceError):
        return "convergence"
    if isinstance(exc, (json.JSONDecodeError, OSError, ValueError)):
        return "input"
    return None


def _search_config(search: SearchInput | None, options: JobOptions) -> oracle.SearchConfig:
    fields = search.model_dump(exclude_none=True) if search else {}
    if options.seed is not None:
        fields["seed"] = options.seed
    if options.trials is not None:
        fields["trials"] = options.trials
    return oracle.SearchConfig(**fields)


def _case_label(value: str) -> CaseLabel:
    try:
        return CaseLabel(value)
    except ValueError:
        raise DomainError(f"unknown case {value!r}; expected one of CaseI, CaseII, CaseIII")


# =============================================================================
# Handlers
# =============================================================================


def _lambda(request: LambdaRequest, options: JobOptions) -> JobResult:
    a = [as_complex(v) for v in request.a]
    exp = conjugate_exponent(request.p)
    payload = bounds.certify(request.mu, a, exp).model_dump(mode="json")
    # equality point for complex coefficients
    if any(v.imag != 0 or v.real < 0 for v in a):
        aligned = bounds.aligned_extremal_point(request.mu, a, exp)
        payload["x_aligned"] = [[z.real, z.imag] for z in aligned]
    return JobResult(payload)


def _check(request: CheckRequest, options: JobOptions) -> JobResult:
    exp = conjugate_exponent(request.p)
    sys = WeightedSystem(exponent=exp, a=request.a, mu=request.mu, x=request.x)
    forced = options.case or (request.case.value if request.case else None)
    case = _case_label(forced) if forced else None

    report = bounds.check(sys, request.lam, case=case, tolerance=options.tolerance)
    payload = report.model_dump(mode="json")
    payload["admissible"] = report.guaranteed
    return JobResult(payload)


def _refine(request: RefineRequest, options: JobOptions) -> JobResult:
    exp = conjugate_exponent(request.p)
    sys = WeightedSystem(exponent=exp, a=request.a, mu=request.mu, x=request.x)
    payload = superquad.refined_bound(sys).model_dump(mode="json")
    if exp.p <= 2:
        payload["gap"] = superquad.corollary3_gap(sys).model_dump(mode="json")
    return JobResult(payload)


def _identity(request: IdentityRequest, options: JobOptions) -> JobResult:
    values = (request.x, request.y, request.a, request.b, request.mu, request.nu)
    payload = superquad.euler_lagrange_identity(*values).model_dump(mode="json")
    if request.p is not None:
        payload["refined"] = superquad.corollary2_refined_n2(*values, request.p).model_dump(mode="json")
    return JobResult(payload)


def _bohr(request: BohrRequest, options: JobOptions) -> JobResult:
    params = bounds.bohr_params(request.s, request.p)
    payload = params.model_dump(mode="json", by_alias=True)
    payload["matches_sharp"] = bounds.bohr_matches_sharp(params)

    if (request.x is None) != (request.y is None):
        raise DomainError("the Bohr chain needs both x and y")
    if request.x is not None:
        links = bounds.bohr_chain_check(request.s, request.p, request.x, request.y, tolerance=options.tolerance)
        payload["chain"] = [link.model_dump(mode="json") for link in links]
    return JobResult(payload)


def _fuzz(request: FuzzRequest, options: JobOptions) -> JobResult:
    cfg = _search_config(request.search, options)
    campaign = request.case or options.case
    if campaign is None:
        raise DomainError("fuzz needs a case: CaseI, CaseII, CaseIII, refinement, bohr, identity or superquadratic")

    if campaign == "refinement":
        report = oracle.fuzz_refinement(request.n, request.p, cfg)
    elif campaign == "bohr":
        report = oracle.fuzz_bohr(cfg)
    elif campaign == "identity":
        report = oracle.fuzz_identity(cfg)
    elif campaign == "superquadratic":
        report = oracle.fuzz_superquadratic(cfg)
    else:
        report = oracle.fuzz_case(
            _case_label(campaign),
            request.n,
            conjugate_exponent(request.p),
            cfg,
            lambda_scale=request.lambda_scale,
        )
    return JobResult(report.model_dump(mode="json"), violation=report.guaranteed and bool(report.violations))


def _sharpness(request: SharpnessRequest, options: JobOptions) -> JobResult:
    cfg = _search_config(request.search, options)
    a = [as_complex(v) for v in request.a]
    report = oracle.sharpness_campaign(request.mu, a, conjugate_exponent(request.p), cfg)
    return JobResult(report.model_dump(mode="json"), violation=bool(report.violations))


_HANDLERS = {
    Command.LAMBDA: _lambda,
    Command.CHECK: _check,
    Command.REFINE: _refine,
    Command.IDENTITY: _identity,
    Command.BOHR: _bohr,
    Command.FUZZ: _fuzz,
    Command.SHARPNESS: _sharpness,
}


def run_job(job: JobSpec, options: JobOptions | None = None) -> JobResult:
    """Execute one job and return its JSON-ready payload."""
    options = options or JobOptions()
    logger.info("Running %s job", job.command.value)
    result = _HANDLERS[job.command](job.request, options)
    if result.violation:
        logger.warning("%s job found a violation in a guaranteed region", job.command.value)
    return result

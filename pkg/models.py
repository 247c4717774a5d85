from enum import Enum
from typing import Any

from pydantic import BaseModel, ConfigDict, Field

from services.core import CaseLabel

# Complex values travel as [re, im]; bare numbers are real.
ComplexInput = float | tuple[float, float]


class Command(str, Enum):
    LAMBDA = "lambda"
    CHECK = "check"
    REFINE = "refine"
    IDENTITY = "identity"
    BOHR = "bohr"
    FUZZ = "fuzz"
    SHARPNESS = "sharpness"


class StrictModel(BaseModel):
    """Rejects unknown fields so typos in hand-written jobs surface as errors."""

    model_config = ConfigDict(extra="forbid", populate_by_name=True)


class SearchInput(StrictModel):
    seed: int | None = None
    trials: int | None = None
    local_steps: int | None = None
    step_decay: float | None = None
    initial_step: float | None = None
    box: tuple[float, float] | None = None
    workers: int | None = None


class LambdaRequest(StrictModel):
    p: float
    mu: list[float]
    a: list[ComplexInput]


class CheckRequest(LambdaRequest):
    x: list[ComplexInput]
    lam: float = Field(alias="lambda")
    case: CaseLabel | None = None


class RefineRequest(StrictModel):
    p: float
    mu: list[float]
    a: list[float]
    x: list[float]


class IdentityRequest(StrictModel):
    x: float
    y: float
    a: float
    b: float
    mu: float
    nu: float
    # when given, the two-term refined bound at this exponent is reported too
    p: float | None = None


class BohrRequest(StrictModel):
    s: float
    p: float
    x: float | None = None
    y: float | None = None


class FuzzRequest(StrictModel):
    case: str | None = None
    n: int = 2
    p: float = 2.0
    lambda_scale: float = 1.0
    search: SearchInput | None = None


class SharpnessRequest(LambdaRequest):
    search: SearchInput | None = None


REQUEST_MODELS: dict[Command, type[StrictModel]] = {
    Command.LAMBDA: LambdaRequest,
    Command.CHECK: CheckRequest,
    Command.REFINE: RefineRequest,
    Command.IDENTITY: IdentityRequest,
    Command.BOHR: BohrRequest,
    Command.FUZZ: FuzzRequest,
    Command.SHARPNESS: SharpnessRequest,
}


class JobSpec(BaseModel):
    """One command together with its validated input."""

    command: Command
    request: StrictModel

    @classmethod
    def build(cls, command: Command | str, payload: dict[str, Any]) -> "JobSpec":
        command = Command(command)
        request = REQUEST_MODELS[command].model_validate(payload)
        return cls(command=command, request=request)


class JobOptions(BaseModel):
    """Per-invocation overrides coming from CLI flags or query parameters."""

    seed: int | None = None
    trials: int | None = None
    tolerance: float | None = None
    case: str | None = None

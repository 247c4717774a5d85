"""HTTP endpoint running the same jobs as the sharpbound CLI."""

import logging
from typing import Any

from fastapi import APIRouter, Body, HTTPException

from models import Command, JobOptions, JobSpec
from services.jobs import error_kind, run_job

logger = logging.getLogger(__name__)

router = APIRouter(prefix="/jobs", tags=["jobs"])


@router.post("/{command}")
def submit_job(
    command: Command,
    payload: dict[str, Any] = Body(...),
    seed: int | None = None,
    trials: int | None = None,
    tol: float | None = None,
    case: str | None = None,
):
    """Validate and run one job synchronously.

    Campaigns are CPU-bound, so this is a plain def route and FastAPI runs it
    in its threadpool.
    """
    logger.info("Received %s job", command.value)

    try:
        job = JobSpec.build(command, payload)
        result = run_job(job, JobOptions(seed=seed, trials=trials, tolerance=tol, case=case))
    except Exception as e:
        kind = error_kind(e)
        if kind is None:
            raise
        logger.error("Job %s rejected (%s): %s", command.value, kind, e)
        raise HTTPException(status_code=422, detail={"kind": kind, "detail": str(e)})

    return {
        "status": "violation" if result.violation else "ok",
        "result": result.payload,
    }

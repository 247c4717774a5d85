"""Run the named verification campaigns from campaigns.json and print a summary."""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any

import numpy as np

from config import DEFAULT_SEED
from models import JobOptions, JobSpec
from services.jobs import run_job

logger = logging.getLogger(__name__)

SHARPNESS_LOWER_TOL = 1e-6


def load_campaigns() -> dict:
    """Load campaign definitions from the JSON file next to this script."""
    campaigns_path = Path(__file__).parent / "campaigns.json"
    with open(campaigns_path, "r") as f:
        return json.load(f)


def _fuzz_jobs(entry: dict[str, Any]) -> list[dict[str, Any]]:
    """Expand the n and p grids of one campaign entry into fuzz payloads."""
    base = {"case": entry["case"]}
    if "lambda_scale" in entry:
        base["lambda_scale"] = entry["lambda_scale"]
    if "n" not in entry:
        return [base]
    return [{**base, "n": n, "p": p} for n in entry["n"] for p in entry["p"]]


def run_fuzz_campaign(entry: dict[str, Any], seed: int) -> tuple[int, int]:
    """Returns (jobs run, jobs that failed their expectation)."""
    expect_violations = entry.get("expect_violations", False)
    options = JobOptions(seed=seed, trials=entry["trials"])
    failed = 0
    jobs = _fuzz_jobs(entry)

    for payload in jobs:
        result = run_job(JobSpec.build("fuzz", payload), options)
        found = len(result.payload["violations"])
        ok = found > 0 if expect_violations else found == 0
        label = ", ".join(f"{k}={v}" for k, v in payload.items())
        print(f"   {'✅' if ok else '❌'} {label}: {found} violations, worst margin {result.payload['worst_margin']:.3e}")
        failed += not ok
    return len(jobs), failed


def run_sharpness_campaign(entry: dict[str, Any], seed: int) -> tuple[int, int]:
    """Random (mu, a) instances; the search must land in [lambda_bar(1-1e-6), lambda_bar(1+1e-9)]."""
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, 0])))
    options = JobOptions(seed=seed, trials=entry["trials"])
    failed = 0

    for _ in range(entry["instances"]):
        n = int(rng.choice(entry["n"]))
        p = float(rng.choice(entry["p"]))
        payload = {
            "p": p,
            "mu": rng.uniform(0.1, 10.0, size=n).tolist(),
            "a": rng.uniform(0.1, 10.0, size=n).tolist(),
        }
        report = run_job(JobSpec.build("sharpness", payload), options).payload
        lam_bar, best = report["reference"], report["best_ratio_found"]
        ok = not report["violations"] and best >= lam_bar * (1.0 - SHARPNESS_LOWER_TOL)
        if not ok:
            print(f"   ❌ n={n}, p={p}: best ratio {best!r} vs lambda_bar {lam_bar!r}")
        failed += not ok

    print(f"   {'✅' if failed == 0 else '❌'} {entry['instances'] - failed}/{entry['instances']} instances reached lambda_bar")
    return entry["instances"], failed


def main(argv: list[str] | None = None) -> int:
    """Run every campaign (or the selected ones) and print a summary."""
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("names", nargs="*", help="campaigns to run (default: all)")
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED)
    args = parser.parse_args(argv)

    logging.basicConfig(
        level=logging.INFO,
        format="%(asctime)s - %(levelname)s - %(message)s",
    )

    campaigns = load_campaigns()
    names = args.names or list(campaigns)
    unknown = [name for name in names if name not in campaigns]
    if unknown:
        print(f"❌ Unknown campaigns: {', '.join(unknown)}")
        return 2

    print("=" * 60)
    print("sharpbound - Verification Campaigns")
    print("=" * 60)

    total_failed = 0
    for name in names:
        entry = campaigns[name]
        print(f"\n📐 {entry['name']} ({name})")
        print(f"   {entry['description']}")
        if entry["job"] == "sharpness":
            _, failed = run_sharpness_campaign(entry, args.seed)
        else:
            _, failed = run_fuzz_campaign(entry, args.seed)
        total_failed += failed

    print("\n" + "=" * 60)
    if total_failed:
        print(f"❌ {total_failed} campaign jobs failed")
    else:
        print("✅ All campaigns passed!")
    print("=" * 60)
    return 1 if total_failed else 0


if __name__ == "__main__":
    sys.exit(main())

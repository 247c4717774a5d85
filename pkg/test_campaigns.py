"""Tests for the campaign presets and runner."""

from run_campaigns import _fuzz_jobs, load_campaigns, main, run_fuzz_campaign


def test_presets_cover_every_campaign():
    campaigns = load_campaigns()
    cases = {entry.get("case") for entry in campaigns.values()}
    assert {"CaseI", "CaseII", "CaseIII", "refinement", "bohr", "identity", "superquadratic"} <= cases
    assert any(entry["job"] == "sharpness" for entry in campaigns.values())
    assert any(entry.get("expect_violations") for entry in campaigns.values())


def test_fuzz_jobs_expand_grid():
    jobs = _fuzz_jobs({"case": "CaseI", "n": [1, 2], "p": [2.0, 3.0], "lambda_scale": 0.99})
    assert len(jobs) == 4
    assert {"case": "CaseI", "n": 2, "p": 3.0, "lambda_scale": 0.99} in jobs
    assert _fuzz_jobs({"case": "bohr"}) == [{"case": "bohr"}]


def test_counterexample_campaign_passes_when_refuted():
    entry = {"case": "CaseI", "n": [2], "p": [2.0], "lambda_scale": 0.99, "trials": 10, "expect_violations": True}
    assert run_fuzz_campaign(entry, seed=1) == (1, 0)


def test_unknown_campaign_name():
    assert main(["no_such_campaign"]) == 2

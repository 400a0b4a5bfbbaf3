"""Acceptance gate: every criterion runs at its stated desk scale.

Run with `pytest tests/test_acceptance.py -v -s` to see one PASS/FAIL line
per criterion; the claim report files land next to the test session's tmp
directory.
"""
import pytest

from qarith.claims import EXPECTED_CLAIM_IDS, run_claims, write_reports


@pytest.fixture(scope="module")
def claim_results(tmp_path_factory):
    checks = run_claims()
    out = tmp_path_factory.mktemp("claims")
    write_reports(checks, out / "claims.md", out / "claims.json")
    return {c.claim_id: c for c in checks}


def test_claim_list_is_closed(claim_results):
    assert tuple(claim_results) == EXPECTED_CLAIM_IDS


@pytest.mark.parametrize("claim_id", EXPECTED_CLAIM_IDS)
def test_acceptance_criterion(claim_results, claim_id):
    check = claim_results[claim_id]
    marker = "PASS" if check.status == "pass" else "FAIL"
    print(f"{claim_id} {marker} - {check.observed}")
    assert check.status == "pass", f"{claim_id}: {check.observed}"

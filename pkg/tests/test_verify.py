import json

import pytest

from liemean import verify


@pytest.mark.parametrize("name", sorted(verify.SUITES))
def test_default_suites_pass(name):
    result = verify.run_suite(name)
    assert result.status == "pass", result.details
    assert result.seconds >= 0


def test_conjecture_above_degree_three_is_reported_not_asserted():
    result = verify.run_suite("conjecture", n=4, m=2, degree=5)
    assert result.status == "report"
    assert result.params["asserted"] is False
    # recorded outcome of the brute-force run: disagreement confined to degree 5
    assert result.details["agree"] is False
    assert result.details["difference_degrees"] == [5]


def test_unknown_suite():
    with pytest.raises(KeyError):
        verify.run_suite("nope")


def test_json_and_summary():
    results = [verify.run_suite("witt", n=2, degree=4), verify.SuiteResult("x", "fail", {})]
    data = json.loads(verify.results_json(results))
    assert data["passed"] is False and len(data["results"]) == 2
    text = verify.summary(results)
    assert "PASS" in text and "FAIL" in text and "1/2" in text

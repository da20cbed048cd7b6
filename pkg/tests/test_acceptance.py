"""The ten acceptance criteria, one test each, with a one-line verdict per criterion."""

import pytest

from hecke_so.checks import acceptance_suite

SUITE = {num: (label, tasks) for num, label, tasks in acceptance_suite()}
RESULTS = {}


@pytest.fixture(scope="module", autouse=True)
def summary(request):
    # conftest prints these in the terminal summary, so they show without -s
    request.config.acceptance_results = RESULTS
    yield


def run_criterion(num):
    label, tasks = SUITE[num]
    RESULTS[num] = (label, False)
    reports = [task() for task in tasks]
    ok = all(r.verdict == "pass" for r in reports)
    RESULTS[num] = (label, ok)
    print(f"criterion {num}: {'PASS' if ok else 'FAIL'} {label}")
    for r in reports:
        assert r.verdict == "pass", r.to_text(False)
    return reports


@pytest.mark.parametrize("num", [1, 2, 3, 4, 5, 6, 8, 9, 10])
def test_criterion(num):
    run_criterion(num)


def test_criterion_7_single_calibration_scalar():
    reports = run_criterion(7)
    scalars = {r.details["calibration_scalar"] for r in reports}
    assert scalars == {"1"}

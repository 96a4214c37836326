import os
import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("ci", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("ci")

# criterion -> (passed, detail), filled in by test_acceptance.py
ACCEPTANCE: dict = {}
# outcomes of the tests marked criterion6 (the oracle-backed property suites)
PROPERTY_OUTCOMES = {"passed": 0, "failed": 0, "skipped": 0}


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def acceptance():
    return ACCEPTANCE


def pytest_runtest_logreport(report):
    if "criterion6" not in report.keywords:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        PROPERTY_OUTCOMES[report.outcome] += 1


def pytest_terminal_summary(terminalreporter):
    results = dict(ACCEPTANCE)
    ran = PROPERTY_OUTCOMES["passed"] + PROPERTY_OUTCOMES["failed"]
    if ran:
        results[6] = (PROPERTY_OUTCOMES["failed"] == 0,
                      f"property suites: {PROPERTY_OUTCOMES['passed']} passed, "
                      f"{PROPERTY_OUTCOMES['failed']} failed, "
                      f"{PROPERTY_OUTCOMES['skipped']} skipped (over-size groups)")
    elif results:
        results[6] = (False, "property suites not collected in this run "
                             "(run the whole tests/ directory)")
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(results):
        passed, detail = results[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if passed else 'FAIL'}  {detail}")

import math

import pytest
from hypothesis import HealthCheck, settings

from dmu import AtomicMeasure, StructuredFunction

settings.register_profile("dmu", deadline=None, max_examples=25, derandomize=True,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("dmu")


@pytest.fixture
def delta0():
    return AtomicMeasure.dirac(0.0)


@pytest.fixture
def two_atoms():
    return AtomicMeasure(((0.0, 1.0), (math.pi, 2.0)))


S = StructuredFunction


ACCEPTANCE_LINES = []


@pytest.fixture
def report_line():
    """Record one PASS/FAIL line per acceptance criterion."""
    def record(criterion: int, passed: bool, detail: str):
        line = f"{'PASS' if passed else 'FAIL'} criterion {criterion}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)

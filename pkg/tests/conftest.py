from __future__ import annotations

import os

import pytest
from hypothesis import HealthCheck, settings

from branchdec.instances import Graph, carving_oracle

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("thorough", max_examples=400, deadline=None, suppress_health_check=list(HealthCheck))
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def report():
    def record(number: int, ok: bool, detail: str) -> bool:
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def c4():
    return carving_oracle(Graph.cycle(4))


@pytest.fixture
def p4():
    return carving_oracle(Graph.path(4))


@pytest.fixture
def k13():
    """Carving oracle of the star with center 0 and leaves 1, 2, 3."""
    return carving_oracle(Graph.star(3))

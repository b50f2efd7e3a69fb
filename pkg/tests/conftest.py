import random

import pytest

from e2ibs import scheme
from e2ibs.group import ToyGroup

_acceptance_lines = []


@pytest.fixture
def record():
    """Collect one PASS/FAIL line per acceptance criterion for the summary."""
    def _record(n, ok, detail):
        line = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        _acceptance_lines.append(line)
        print(line)
        return ok
    return _record


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def master():
    """Production-size master key, shared because setup costs ~0.2 s."""
    return scheme.setup(rng=random.Random(1234))


@pytest.fixture
def toy():
    return ToyGroup(23)

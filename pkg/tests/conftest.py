import os

from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.register_profile("thorough", max_examples=500, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

import pytest

_REPORT = {}


@pytest.fixture
def criterion():
    """Record one acceptance verdict; returns it so tests can assert on it."""
    def record(num, ok, detail):
        _REPORT[num] = f"criterion {num}: {'PASS' if ok else 'FAIL'}  {detail}"
        print(_REPORT[num])
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if _REPORT:
        terminalreporter.section("acceptance criteria")
        for num in sorted(_REPORT):
            terminalreporter.write_line(_REPORT[num])

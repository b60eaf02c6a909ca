import contextlib

import pytest

from lpcycle.family import problem1, steepest_edge_example
from lpcycle.numeric import Backend

_ACCEPTANCE = []


@pytest.fixture
def p1():
    return problem1()


@pytest.fixture
def p1_float():
    return problem1(Backend.FLOAT)


@pytest.fixture
def se_instance():
    return steepest_edge_example()


@pytest.fixture
def criterion():
    """Context manager recording one PASS/FAIL line per acceptance criterion."""

    @contextlib.contextmanager
    def record(label):
        try:
            yield
        except BaseException as exc:
            _ACCEPTANCE.append(("FAIL", label, f"{type(exc).__name__}: {exc}".splitlines()[0]))
            raise
        _ACCEPTANCE.append(("PASS", label, ""))

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for status, label, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"[{status}] {label}" + (f"  -- {detail}" if detail else ""))

from fractions import Fraction

import pytest


def F(x) -> Fraction:
    return Fraction(x)


@pytest.fixture
def one():
    return Fraction(1)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None) if mod else None
    if lines:
        terminalreporter.section("acceptance criteria")
        for k in sorted(lines):
            terminalreporter.write_line(lines[k])

import pytest

from weyltype.checks import context

ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        name, ok = ACCEPTANCE[key]
        terminalreporter.write_line(f"criterion {key} ({name}): {'PASS' if ok else 'FAIL'}")


@pytest.fixture(scope="session")
def Z():
    return context("Z")


@pytest.fixture(scope="session")
def Z2():
    return context("Z2")


@pytest.fixture(scope="session")
def Zr2():
    return context("Z+Zsqrt2")


@pytest.fixture(scope="session")
def p1_report():
    from weyltype.classify import solve_p1

    return solve_p1(6)

"""Shared fixtures; the expensive balls are built once per session."""

import pytest

from cubetact import ragroups as rg

_criterion_lines = []


@pytest.fixture(scope="session")
def criterion_report():
    """Record a single pass/fail line per acceptance criterion; the lines
    are replayed in the terminal summary.
    """
    def record(number, ok, message):
        status = "PASS" if ok else "FAIL"
        _criterion_lines.append(f"[criterion {number}] {status}: {message}")
    return record


def pytest_terminal_summary(terminalreporter):
    if _criterion_lines:
        terminalreporter.section("acceptance criteria")
        def number(line):
            return int(line.split("]")[0].split()[-1])

        for line in sorted(_criterion_lines, key=number):
            terminalreporter.write_line(line)


def _ball(name, kind, radius):
    return rg.build_ball(rg.builtin_defining_graph(name), kind, radius)


@pytest.fixture(scope="session")
def y_c5_r3():
    return _ball("C5", rg.COXETER, 3)


@pytest.fixture(scope="session")
def y_p4_r4():
    return _ball("P4", rg.COXETER, 4)


@pytest.fixture(scope="session")
def y_st5_r3():
    return _ball("STAR_EQ5", rg.COXETER, 3)


@pytest.fixture(scope="session")
def y_st5_r4():
    return _ball("STAR_EQ5", rg.COXETER, 4)


@pytest.fixture(scope="session")
def x_c5_r2():
    return _ball("C5", rg.ARTIN, 2)


@pytest.fixture(scope="session")
def x_c5_r3():
    return _ball("C5", rg.ARTIN, 3)


@pytest.fixture(scope="session")
def x_f2_r3():
    return _ball("F2", rg.ARTIN, 3)


@pytest.fixture(scope="session")
def z2_r3():
    return _ball("EDGE2", rg.ARTIN, 3)

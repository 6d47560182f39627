import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from transreduce.defense import Nds
from transreduce.pcp import PcpInstance
from transreduce.zmachine import ZTransducer

ACCEPTANCE_LINES = []


@pytest.fixture
def ex1():
    return PcpInstance((("ab", "a"), ("b", "bb")))


def stay_system():
    return Nds(1, ((1, "0", 1, 0, 1), (1, "1", 1, 0, 1)))


def drift_system():
    return Nds(1, ((1, "0", 1, 1, 1), (1, "1", 1, 1, 1)))


def two_branch_system():
    half = "1/2"
    rules = [(1, a, 1, 0, half) for a in "01"] + [(1, a, 2, 1, half) for a in "01"]
    rules += [(2, a, 2, 0, 1) for a in "01"]
    return Nds(2, tuple(rules))


def tiny_c():
    return ZTransducer(("q0", "qf"), frozenset({("q0", "0", 1, "qf"), ("q0", "1", 1, "qf")}), "q0", "qf")


def tiny_d():
    return ZTransducer(("g0", "gf"), frozenset({("g0", "0", 2, "gf"), ("g0", "1", 1, "gf")}), "g0", "gf")


def never_accepting_d():
    return ZTransducer(("g0", "gf"), frozenset({("g0", "0", 1, "g0"), ("g0", "1", 2, "g0")}), "g0", "gf")


@pytest.fixture
def stay():
    return stay_system()


@pytest.fixture
def drift():
    return drift_system()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

import sys

import numpy as np
import pytest

from levyfields.kernel import KernelSpec
from levyfields.lattice import LatticeSpec, gaussian_bump
from levyfields.levy import LevyTriple, center
from levyfields.schwinger import TestFunction


@pytest.fixture
def lat1():
    return LatticeSpec(1, 256, 0.05)


@pytest.fixture
def k_half():
    return KernelSpec(0.5, 1.0, 1)


@pytest.fixture
def gauss():
    return LevyTriple(0.0, 1.0)


@pytest.fixture
def poisson():
    return center(LevyTriple.from_atoms(0.0, 0.0, [(1.0, 1.0)]))


def bump(lattice, t, width=0.3, positive=False, y=0.0, name="bump"):
    c = [t] + [y] * (lattice.d - 1)
    return TestFunction(gaussian_bump(lattice, c, width, positive_time=positive, name=name), positive)


def rel(a, b):
    return abs(a - b) / abs(b)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)

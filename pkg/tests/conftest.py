import os
import sys
from pathlib import Path

import numpy as np
import pytest

from colbmd import BitMatrix

import golden

DATA_DIRS = [Path(p) for p in os.environ.get("COLBMD_DATA_DIR", "").split(os.pathsep) if p]
DATA_DIRS += [Path(__file__).parent / "data", Path.cwd() / "data"]


def find_dataset(*names):
    for d in DATA_DIRS:
        for name in names:
            if (d / name).exists():
                return d / name
    return None


@pytest.fixture
def ex1():
    return BitMatrix.from_dense(golden.EX1_M)


@pytest.fixture
def ex2():
    return BitMatrix.from_dense(golden.EX2_M)


@pytest.fixture
def qm_r():
    return BitMatrix.from_dense(golden.QM_R)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    results = getattr(acceptance, "RESULTS", None)
    if results:
        terminalreporter.write_sep("=", "acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])

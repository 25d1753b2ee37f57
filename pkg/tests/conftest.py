import functools
import math
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from hata import dirichlet_spectrum  # noqa: E402

SQRT3 = math.sqrt(3.0)
H_GRID = (1.5, SQRT3, 2.0, 3.0)

_acceptance_lines: list[str] = []


@functools.lru_cache(maxsize=None)
def spectrum(m, h, count, measure_exponent=None):
    """Shared cache: the level-10 solves are the slow part of the suite."""
    return dirichlet_spectrum(m, h, count, measure_exponent=measure_exponent)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def acceptance():
    """Record one pass/fail line per acceptance check, printed at the end of the run."""

    def record(name, ok, detail=""):
        _acceptance_lines.append(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}".rstrip())
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)

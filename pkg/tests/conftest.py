import math
import time

import numpy as np
import pytest

from scalefree import pnt
from scalefree.sieve import sieve_pi


def trial_division_is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for d in range(3, math.isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


def trial_division_pi(limit: int) -> np.ndarray:
    """pi(x) for x = 0..limit by trial division, one number at a time."""
    flags = np.fromiter((trial_division_is_prime(n) for n in range(limit + 1)), dtype=np.int64,
                        count=limit + 1)
    return np.cumsum(flags)


@pytest.fixture(scope="session")
def trial_pi_1e5():
    return trial_division_pi(10**5)


@pytest.fixture(scope="session")
def default_scan():
    """Scan of the default 40-per-decade grid over [1e3, 1e8], plus the wall time of its sieve."""
    grid = pnt.default_grid()
    t0 = time.perf_counter()
    table = sieve_pi(grid[-1], checkpoints=grid + [10**6])
    elapsed = time.perf_counter() - t0
    return table, pnt.pnt_scan(table, grid), elapsed


ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])

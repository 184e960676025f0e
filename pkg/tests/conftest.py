import numpy as np
import pytest

from bornrigidity.projective import haar_random_rays

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


@pytest.fixture
def rays3():
    return haar_random_rays(11, 50, 3)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)

import numpy as np
import pytest
from scipy.stats import unitary_group

from biphoton.qutrit import random_mode

# lines appended by tests/test_acceptance.py, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20021024)


def random_unitary(dim, seed):
    return unitary_group.rvs(dim, random_state=seed)


def random_tuning(rng):
    from biphoton.braun_twiss import DetectorTuning

    return DetectorTuning(random_mode(rng), random_mode(rng))

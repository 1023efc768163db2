import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from teichlab import QuadraticDifferential

settings.register_profile("teichlab", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("teichlab")


@pytest.fixture(scope="session")
def one():
    return QuadraticDifferential.constant(1.0)


@pytest.fixture(scope="session")
def psi():
    """phi = (zeta + 2)^2, zero-free on the closed disk."""
    return QuadraticDifferential.psi_squared([2.0, 1.0])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    from _report import LINES
    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in LINES:
            terminalreporter.write_line(line)

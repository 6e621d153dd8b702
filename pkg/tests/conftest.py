import numpy as np
import pytest

from periodic_dbscan import available_backends


@pytest.fixture(params=["compiled", "python"])
def backend(request):
    if request.param not in available_backends():
        pytest.skip("compiled extension not built")
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)

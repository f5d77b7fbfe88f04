import numpy as np
import pytest

from pfourier import parse_group

FINITE = ["Z/2", "Z/8", "D4", "D5", "S3", "S4", "A4", "Q8"]
ALL_FINITE = FINITE + ["prod(S3,Z/2)", "prod(Z/2,Z/2)"]
P_GRID = [1, "4/3", 2, 3, "inf"]

# filled by test_acceptance, printed at the end of the session
ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(params=ALL_FINITE)
def finite_group(request):
    return parse_group(request.param)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])

import math

import pytest

from deltacasimir import H1, H3, R1, R3, Model, QuadratureSpec

# filled by tests/test_acceptance.py, printed at the end of the session
ACCEPTANCE_LINES: dict[str, str] = {}


@pytest.fixture(scope="session")
def spec():
    return QuadratureSpec()


@pytest.fixture(params=["R1", "H3", "H1"])
def zeta_model(request):
    return {
        "R1": Model.from_b(R1, 1.0),
        "H3": Model.from_b(H3, 1.0, 1.0),
        "H1": Model.from_b(H1, 1.0, 1.0),
    }[request.param]


@pytest.fixture
def r3_model():
    return Model(R3, 1.0)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])


def rel(x, y):
    return abs(x - y) / max(abs(y), math.ulp(1.0))

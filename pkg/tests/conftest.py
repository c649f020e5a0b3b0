import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from valdist.funcspace import RationalMap

settings.register_profile("valdist", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("valdist")


def M(text: str) -> RationalMap:
    return RationalMap.parse(text)


def power_map(d: int, scale=1, shift=0) -> RationalMap:
    """[1 : (scale z)^d + shift] with exact coefficients."""
    coeffs = [str(shift)] + ["0"] * (d - 1) + [str(scale**d)]
    return M("1|" + ",".join(coeffs))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# one line per acceptance criterion, repeated at the end of the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)

import math

import pytest

from paramp_flow import ParampParams, derive


@pytest.fixture
def fig1():
    """Resonant paramp of the S_par(t) figure."""
    return derive(ParampParams(gamma=1.0, f=0.4, delta_omega=0.0))


@pytest.fixture
def fig2():
    """Off-resonant paramp of the window-entropy figure: f = 0.3, f' = 0.2."""
    return derive(ParampParams.from_f_prime(1.0, 0.3, 0.2))


# in-regime points (gamma, f, delta_omega) used across modules
PARAM_POINTS = [
    (1.0, 0.4, 0.0),
    (1.0, 0.3, math.sqrt(0.05)),
    (1.0, 0.5, 0.4),
    (2.0, 0.3, -0.1),
    (0.5, 0.2, 0.15),
    (1.0, 0.1, 0.05),
    (1.0, 0.45, 0.3),
    (1.0, 0.25, -0.2),
    (3.0, 1.2, 0.9),
    (1.0, 0.49, 0.0),
]


@pytest.fixture(params=PARAM_POINTS, ids=lambda p: "G{}-f{}-dw{:.3g}".format(*p))
def derived(request):
    g, f, dw = request.param
    return derive(ParampParams(gamma=g, f=f, delta_omega=dw, omega_p=2.5))


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    verdicts = getattr(mod, "VERDICTS", None)
    if not verdicts:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(verdicts):
        terminalreporter.write_line(verdicts[number])

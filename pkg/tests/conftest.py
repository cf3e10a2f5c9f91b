import pytest

from ptnorm import oscillator as osc
from ptnorm import squarewell as sw
from ptnorm.pseudometric import PtContour


@pytest.fixture(scope="session")
def line():
    """Default oscillator contour, delta = 1."""
    return PtContour.make(delta=1.0)


@pytest.fixture(scope="session")
def interval():
    return PtContour.interval()


@pytest.fixture(scope="session")
def osc_basis(line):
    """Normalized oscillator states N = 0..7 at G = 0.3."""
    return osc.normalized_spectrum(osc.OscillatorParams(0.3), 3, line)


@pytest.fixture(scope="session")
def osc_pair(line):
    return osc.broken_pair(osc.OscillatorParams(-0.5), 0, line)


@pytest.fixture(scope="session")
def well_pair(interval):
    return sw.pair(sw.SquareWellParams(5.0), 0, interval)


ACCEPTANCE_LINES = []


@pytest.fixture
def criterion():
    """``record(k, text, ok, detail)`` prints and stores one PASS/FAIL line."""

    def record(k, text, ok, detail):
        line = f"criterion {k}: {'PASS' if ok else 'FAIL'}  {text}  [{detail}]"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

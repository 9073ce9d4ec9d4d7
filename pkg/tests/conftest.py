import numpy as np
import pytest

from weylswap.states import StateVector

# criterion label -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE_RESULTS: dict[str, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(ACCEPTANCE_RESULTS, key=lambda k: int(k.split(".")[0])):
        ok, detail = ACCEPTANCE_RESULTS[name]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")


@pytest.fixture
def bell():
    return StateVector((2, 2), np.array([1, 0, 0, 1]) / np.sqrt(2))


@pytest.fixture
def t_state():
    return StateVector(2, np.array([1, np.exp(1j * np.pi / 4)]) / np.sqrt(2))


@pytest.fixture
def ghz():
    amps = np.zeros(8)
    amps[0] = amps[7] = 1 / np.sqrt(2)
    return StateVector((2, 2, 2), amps)


@pytest.fixture
def qutrit_bell():
    amps = np.zeros(9)
    amps[[0, 4, 8]] = 1 / np.sqrt(3)
    return StateVector((3, 3), amps)

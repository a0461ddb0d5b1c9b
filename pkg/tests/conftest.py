import numpy as np
import pytest

from choi_witness.dephasing import DephasingParams

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)


@pytest.fixture
def paper_params():
    return DephasingParams(gamma0=1.0, lam=1.0, epsilon=1e-4)


def random_hermitian(rng, d):
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return a + a.conj().T


def random_state(rng, d, rank=None):
    k = rng.normal(size=(d, rank or d)) + 1j * rng.normal(size=(d, rank or d))
    rho = k @ k.conj().T
    return rho / np.trace(rho)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

import numpy as np
import pytest
from scipy.linalg import expm

from spinkick import SpinValue, make_sy, make_sz

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


ALL_SPINS = [SpinValue(tw) for tw in range(1, 25)]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def full_hamiltonian_propagator(spin1, spin2, g, t):
    """exp(-i g t Sz1 x Sz2) by dense matrix exponential: independent of the phase route."""
    h = np.kron(make_sz(spin1), make_sz(spin2))
    return expm(-1j * g * t * h)


def brute_reduced(psi_flat, d1, d2):
    """rho1 from the full density matrix by explicit index sums."""
    rho = np.outer(psi_flat, psi_flat.conj()).reshape(d1, d2, d1, d2)
    return np.einsum("ajbj->ab", rho)


def expm_kick(spin, angle):
    return expm(-1j * angle * make_sy(spin))

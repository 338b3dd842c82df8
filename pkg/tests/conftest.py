import numpy as np
import pytest

from ctcsim import StateSet, StateVector, ctc_map

S = 1 / np.sqrt(2)
HADAMARD = np.array([[S, S], [S, -S]], dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)


@pytest.fixture
def zero_minus_set() -> StateSet:
    """The canonical two-state example set {|0>, |->}."""
    return StateSet((StateVector([1, 0]), StateVector([S, -S])))


def damped_power_iteration(u, rho_cr, sigma0, max_iters=3000, tol=1e-12):
    """Independent fixed-point oracle: sigma <- (sigma + map(sigma)) / 2.

    Returns (sigma, converged).  Damping removes peripheral oscillation
    so the iteration settles whenever a nearby fixed point attracts.
    """
    sigma = np.asarray(sigma0, dtype=complex)
    for _ in range(max_iters):
        nxt = 0.5 * sigma + 0.5 * ctc_map(u, rho_cr, sigma).entries
        if np.abs(nxt - sigma).max() < tol:
            return nxt, True
        sigma = nxt
    return sigma, False

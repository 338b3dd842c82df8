"""Seeded random inputs for property tests and demos."""

from __future__ import annotations

import numpy as np

from .linalg import DensityMatrix, StateSet, StateVector, UnitaryMatrix


def haar_state(dim: int, rng: np.random.Generator) -> StateVector:
    """Haar-random pure state."""
    z = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return StateVector(z / np.linalg.norm(z))


def haar_unitary(dim: int, rng: np.random.Generator) -> UnitaryMatrix:
    """Haar-random unitary via phase-fixed QR of a complex Gaussian."""
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z)
    phases = np.diag(r).copy()
    phases /= np.abs(phases)
    return UnitaryMatrix(q * phases)


def random_density_matrix(dim: int, rng: np.random.Generator) -> DensityMatrix:
    """Full-rank random mixed state (normalized Wishart)."""
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    m = g @ g.conj().T
    return DensityMatrix(m / m.trace())


def random_state_set(n: int, rng: np.random.Generator,
                     max_pairwise_fidelity: float = 0.9) -> StateSet:
    """N random distinct states in N dimensions.

    Resamples until every pairwise fidelity stays below
    `max_pairwise_fidelity`, which keeps the discrimination problem
    numerically well separated without making the states orthogonal.
    """
    for _ in range(1000):
        states = [haar_state(n, rng) for _ in range(n)]
        fids = [
            abs(np.vdot(states[i].amplitudes, states[j].amplitudes)) ** 2
            for i in range(n) for j in range(i + 1, n)
        ]
        if not fids or max(fids) < max_pairwise_fidelity:
            return StateSet(tuple(states))
    raise RuntimeError("could not sample a well-separated state set")

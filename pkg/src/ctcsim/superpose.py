"""Deterministic superposition of two states drawn from a known set.

Two copies of the discrimination circuit first collapse the (unknown)
inputs psi_m and psi_n onto their basis labels via independent CTC
interactions.  A block-diagonal control unitary

    u_prime = sum_{i,j} |i><i| (x) |j><j| (x) U^{i,j}

then writes the normalized target gamma^{-1} (alpha psi_i + beta psi_j)
onto a fresh ancilla, conditioned on the two label registers.  The
labels m, n are never read classically after state preparation; they
are recovered only through the CTC dynamics.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .discrimination import build_distinguisher, distinguish
from .errors import DegenerateSuperposition, DimensionError, PurityLoss
from .linalg import (
    StateSet,
    StateVector,
    UnitaryMatrix,
    _as_matrix,
    basis_state,
    partial_trace,
    projector,
    state_fidelity,
    tensor_product,
    unitary_from_first_column,
)

TOL_GAMMA = 1e-9

_PURITY_SECOND_EIG = 1e-6


@dataclass(frozen=True)
class SuperpositionSpec:
    """The two target amplitudes; the normalizer is derived per pair."""

    alpha: complex
    beta: complex

    def __post_init__(self):
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "beta", complex(self.beta))
        if self.alpha == 0 and self.beta == 0:
            raise ValueError("amplitudes (alpha, beta) must not both be zero")


@dataclass(frozen=True)
class ProtocolReport:
    """Outcome of one end-to-end superposition run."""

    spec: SuperpositionSpec
    m: int
    n: int
    ancilla_state: StateVector
    expected: StateVector
    fidelity: float
    fixed_point_residuals: tuple[float, float]
    decoded_indices: tuple[int, int]


def build_omega(states: StateSet, i: int, j: int,
                spec: SuperpositionSpec) -> StateVector:
    """Normalized target (alpha psi_i + beta psi_j) / gamma.

    gamma is the Euclidean norm of the unnormalized combination; if it
    falls below ``TOL_GAMMA`` the amplitudes cancel and
    :class:`DegenerateSuperposition` is raised.
    """
    raw = (spec.alpha * states[i].amplitudes
           + spec.beta * states[j].amplitudes)
    gamma = float(np.linalg.norm(raw))
    if gamma < TOL_GAMMA:
        raise DegenerateSuperposition(i, j, gamma)
    return StateVector(raw / gamma)


def build_u_ij(states: StateSet, i: int, j: int, spec: SuperpositionSpec,
               uks: Sequence) -> UnitaryMatrix:
    """The conditional block U^{i,j} mapping |0> to the (i, j) target.

    Off the diagonal this is a Gram-Schmidt completion whose first
    column is the target state, with the set members as completion
    candidates in index order.  On the diagonal the target is psi_i
    itself, realized exactly as U_i^dagger P_i with P_i the permutation
    sending |0> to |i>.
    """
    n = states.size
    if not (0 <= i < n and 0 <= j < n):
        raise DimensionError(f"block indices ({i}, {j}) out of range for N={n}")
    if i == j:
        p = np.eye(n, dtype=complex)
        if i != 0:
            p[[0, i]] = p[[i, 0]]
        u_i = np.asarray(uks[i], dtype=complex)
        return UnitaryMatrix(u_i.conj().T @ p)
    omega = build_omega(states, i, j, spec)
    return unitary_from_first_column(omega, states.states)


def build_u_prime(states: StateSet, spec: SuperpositionSpec,
                  uks: Sequence) -> UnitaryMatrix:
    """Block-diagonal control unitary over both label registers.

    The (i, j) block sits at block index i*N + j.  A degenerate pair
    propagates :class:`DegenerateSuperposition`, which carries the
    offending indices.
    """
    n = states.size
    out = np.zeros((n**3, n**3), dtype=complex)
    for i in range(n):
        for j in range(n):
            block = build_u_ij(states, i, j, spec, uks)
            lo = (i * n + j) * n
            out[lo:lo + n, lo:lo + n] = block.entries
    return UnitaryMatrix(out)


def pure_state_from_density(reduced, second_eig_tol: float = _PURITY_SECOND_EIG) -> StateVector:
    """Dominant eigenvector of a numerically pure reduced matrix.

    Raises :class:`PurityLoss` when the second eigenvalue exceeds
    `second_eig_tol`, which would mean the reduction is genuinely mixed.
    """
    m = _as_matrix(reduced)
    w, v = np.linalg.eigh((m + m.conj().T) / 2)
    if m.shape[0] > 1 and w[-2] > second_eig_tol:
        raise PurityLoss(
            f"reduced state has second eigenvalue {w[-2]:.3e}; expected pure"
        )
    return StateVector(v[:, -1])


def run_protocol(states: StateSet, m: int, n: int, spec: SuperpositionSpec,
                 rng_seed: int = 0) -> ProtocolReport:
    """End-to-end superposition of psi_m and psi_n on a fresh ancilla.

    Builds one discrimination bundle, runs two independent CTC
    fixed-point passes on psi_m and psi_n, applies the block-diagonal
    control unitary to (out1 (x) out2 (x) |0><0|), and extracts the
    ancilla state by tracing out both label registers.  The reported
    fidelity compares the ancilla against the normalized target (for
    m == n the target is psi_m itself, whatever the amplitudes).
    """
    size = states.size
    if not (0 <= m < size and 0 <= n < size):
        raise DimensionError(f"block indices ({m}, {n}) out of range for N={size}")
    bundle = build_distinguisher(states, rng_seed)
    r1 = distinguish(bundle, states[m])
    r2 = distinguish(bundle, states[n])
    u_prime = build_u_prime(states, spec, bundle.uks)
    joint = tensor_product(
        tensor_product(r1.rho_out.entries, r2.rho_out.entries),
        projector(basis_state(size, 0)),
    )
    evolved = u_prime.entries @ joint @ u_prime.entries.conj().T
    reduced = partial_trace(evolved, size * size, size, "second")
    ancilla = pure_state_from_density(reduced)
    if m == n:
        expected = states[m]
    else:
        expected = build_omega(states, m, n, spec)
    return ProtocolReport(
        spec=spec,
        m=int(m),
        n=int(n),
        ancilla_state=ancilla,
        expected=expected,
        fidelity=state_fidelity(ancilla, expected),
        fixed_point_residuals=(r1.residual, r2.residual),
        decoded_indices=(r1.decoded, r2.decoded),
    )

"""Self-consistent CTC states: the fixed-point engine, step by step.

A system on a closed timelike curve must exit its interaction in the
same state it entered, so its density matrix sigma solves

    sigma = Tr_CR[ u (rho_cr (x) sigma) u^dagger ].

This script walks through the map itself, its linearization, and the
spectral solver on three circuits: one that fixes everything, one that
forces a unique answer, and one with a whole family of solutions.
"""

import numpy as np

from ctcsim import (
    consistency_residual,
    ctc_map,
    fixed_point,
    projector,
    superoperator_matrix,
    swap_operator,
    tensor_product,
    von_neumann_entropy,
)

np.set_printoptions(precision=6, suppress=True)

S = 1 / np.sqrt(2)
PLUS = np.array([S, S])
MINUS = np.array([S, -S])
HADAMARD = np.array([[S, S], [S, -S]])

# ---------------------------------------------------------------------------
# 1. The identity circuit fixes every CTC state.

print("1. identity circuit: every sigma is self-consistent")
sigma = np.array([[0.7, 0.1], [0.1, 0.3]])
out = ctc_map(np.eye(4), projector(PLUS), sigma)
print("   residual for an arbitrary sigma:",
      consistency_residual(np.eye(4), projector(PLUS), sigma))
result = fixed_point(np.eye(4), projector(PLUS), policy="max_entropy")
print(f"   fixed-space dimension: {result.fixed_space_dim} (the whole space)")
print("   max-entropy selection:\n", result.fixed_point.entries.real)
print()

# ---------------------------------------------------------------------------
# 2. SWAP pins the CTC state to whatever enters from the CR side.

print("2. SWAP circuit: the CTC state must equal rho_cr")
rho = projector(PLUS)
result = fixed_point(swap_operator(2), rho)
print("   unique:", result.unique, " residual:", result.residual)
print("   fixed point:\n", result.fixed_point.entries.real)
print()

# ---------------------------------------------------------------------------
# 3. The two-state discrimination circuit has a unique, informative
#    fixed point: feeding |-> drives the CTC (and the output) to |1><1|.

print("3. discrimination circuit on input |->")
total = (tensor_product(np.diag([1, 0]), np.eye(2))
         + tensor_product(np.diag([0, 1]), HADAMARD)) @ swap_operator(2)
L = superoperator_matrix(total, projector(MINUS))
eigs = np.sort(np.abs(np.linalg.eigvals(L)))[::-1]
print("   superoperator eigenvalue magnitudes:", eigs)
result = fixed_point(total, projector(MINUS))
print("   unique:", result.unique)
print("   fixed point (the basis label |1><1|):\n",
      result.fixed_point.entries.real)
print()

# ---------------------------------------------------------------------------
# 4. A dephasing-style interaction leaves many consistent states; the
#    max-entropy policy picks the most noncommittal one.

print("4. controlled bit flip: a whole line of fixed points")
x = np.array([[0, 1], [1, 0]])
u = tensor_product(np.diag([1, 0]), np.eye(2)) + tensor_product(np.diag([0, 1]), x)
result = fixed_point(u, projector(PLUS), policy="max_entropy")
print("   fixed-space dimension:", result.fixed_space_dim)
print("   max-entropy fixed point:\n", result.fixed_point.entries.real)
print("   entropy (nats):", von_neumann_entropy(result.fixed_point),
      " ln 2 =", np.log(2))

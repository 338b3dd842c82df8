import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import HADAMARD, PAULI_X, S
from ctcsim import (
    DensityMatrix,
    DimensionError,
    NormalizationError,
    StateSet,
    StateVector,
    UnitaryMatrix,
    basis_state,
    partial_trace,
    projector,
    state_fidelity,
    tensor_product,
    unitary_from_first_column,
    validate,
)


# ---------------------------------------------------------------------------
# tensor_product


def test_tensor_identity_case():
    assert np.array_equal(tensor_product(np.eye(2), np.eye(2)), np.eye(4))


def test_tensor_composes_controlled_hadamard():
    built = (tensor_product(np.diag([1, 0]), np.eye(2))
             + tensor_product(np.diag([0, 1]), HADAMARD))
    expected = np.array([
        [1, 0, 0, 0],
        [0, 1, 0, 0],
        [0, 0, S, S],
        [0, 0, S, -S],
    ], dtype=complex)
    assert np.abs(built - expected).max() < 1e-15


def test_tensor_matches_direct_multiplication():
    # oracle: multiply the two lifted factors directly as 4x4 matrices
    lhs = tensor_product(PAULI_X, np.eye(2)) @ tensor_product(np.eye(2), PAULI_X)
    assert np.abs(lhs - tensor_product(PAULI_X, PAULI_X)).max() == 0.0


def test_tensor_associative_on_random_factors():
    rng = np.random.default_rng(11)
    for _ in range(50):
        dims = rng.integers(2, 4, size=3)
        a, b, c = (
            rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
            for d in dims
        )
        left = tensor_product(a, tensor_product(b, c))
        right = tensor_product(tensor_product(a, b), c)
        assert np.abs(left - right).max() < 1e-12


def test_tensor_rejects_empty():
    with pytest.raises(DimensionError):
        tensor_product(np.zeros((0, 0)), np.eye(2))


# ---------------------------------------------------------------------------
# partial_trace


def test_partial_trace_product_state():
    m = tensor_product(projector(basis_state(2, 0)), projector(basis_state(2, 1)))
    reduced = partial_trace(m, 2, 2, "second")
    assert np.abs(reduced - projector(basis_state(2, 1))).max() < 1e-15


def test_partial_trace_bell_projector():
    bell = np.zeros(4, dtype=complex)
    bell[0] = bell[3] = S
    m = projector(bell)
    # oracle: sum the two diagonal 2x2 blocks by hand
    blocks = m.reshape(2, 2, 2, 2)
    by_hand = blocks[0, :, 0, :] + blocks[1, :, 1, :]
    reduced = partial_trace(m, 2, 2, "first")
    assert np.abs(reduced - by_hand).max() < 1e-15
    assert np.abs(reduced - np.eye(2) / 2).max() < 1e-15


def test_partial_trace_preserves_trace():
    rng = np.random.default_rng(3)
    m = rng.standard_normal((12, 12)) + 1j * rng.standard_normal((12, 12))
    for keep in ("first", "second"):
        assert abs(partial_trace(m, 3, 4, keep).trace() - m.trace()) < 1e-10


def test_partial_trace_of_product_factors():
    rng = np.random.default_rng(7)
    for da in (2, 3, 4):
        for db in (2, 3, 4):
            ga = rng.standard_normal((da, da)) + 1j * rng.standard_normal((da, da))
            gb = rng.standard_normal((db, db)) + 1j * rng.standard_normal((db, db))
            rho = ga @ ga.conj().T
            rho /= rho.trace()
            sig = gb @ gb.conj().T
            sig /= sig.trace()
            got = partial_trace(tensor_product(rho, sig), da, db, "first")
            assert np.abs(got - rho * sig.trace()).max() < 1e-12


def test_partial_trace_dimension_mismatch():
    with pytest.raises(DimensionError):
        partial_trace(np.eye(5), 2, 2, "first")


def test_partial_trace_bad_selector():
    with pytest.raises(ValueError):
        partial_trace(np.eye(4), 2, 2, "third")


# ---------------------------------------------------------------------------
# unitary_from_first_column


def test_completion_already_orthonormal_gives_identity():
    u = unitary_from_first_column(basis_state(2, 0),
                                  [basis_state(2, 0), basis_state(2, 1)])
    assert np.abs(u.entries - np.eye(2)).max() == 0.0


def test_completion_of_plus_state():
    plus = StateVector([S, S])
    u = unitary_from_first_column(plus, [])
    assert np.array_equal(u.entries[:, 0], plus.amplitudes)
    assert np.abs(u.entries.conj().T @ u.entries - np.eye(2)).max() < 1e-10


def test_completion_reproduces_reference_columns(zero_minus_set):
    # omega for {|0>, |->} at equal amplitudes; the reference second
    # column is fixed up to a phase
    raw = S * zero_minus_set[0].amplitudes + S * zero_minus_set[1].amplitudes
    omega = StateVector(raw / np.linalg.norm(raw))
    u = unitary_from_first_column(omega, zero_minus_set.states)
    assert np.abs(u.entries[:, 0] - omega.amplitudes).max() == 0.0
    ref_col1 = np.array([0.38268343236508978, 0.92387953251128674])
    overlap = np.vdot(ref_col1, u.entries[:, 1])
    phase = overlap / abs(overlap)
    assert np.abs(u.entries[:, 1] - phase * ref_col1).max() < 1e-12


def test_completion_always_unitary():
    rng = np.random.default_rng(42)
    for _ in range(1000):
        dim = int(rng.integers(2, 7))
        z = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        first = StateVector(z / np.linalg.norm(z))
        n_cand = int(rng.integers(0, dim + 2))
        cands = []
        for _ in range(n_cand):
            c = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
            # occasionally feed a dependent candidate to exercise skipping
            if rng.random() < 0.3 and cands:
                c = cands[-1] * (1 + 1e-13)
            cands.append(c / np.linalg.norm(c))
        u = unitary_from_first_column(first, [StateVector(c) for c in cands])
        res = np.abs(u.entries.conj().T @ u.entries - np.eye(dim)).max()
        assert res <= 1e-10


def test_completion_rejects_unnormalized_first():
    with pytest.raises(NormalizationError):
        unitary_from_first_column(StateVector([1, 1]))


def test_completion_rejects_mismatched_candidate():
    with pytest.raises(DimensionError):
        unitary_from_first_column(basis_state(2, 0), [basis_state(3, 0)])


# ---------------------------------------------------------------------------
# state_fidelity


def test_fidelity_self_is_one():
    psi = StateVector([S, S * 1j])
    assert abs(state_fidelity(psi, psi) - 1.0) < 1e-14


def test_fidelity_orthogonal_is_zero():
    assert state_fidelity(basis_state(2, 0), basis_state(2, 1)) == 0.0


def test_fidelity_zero_minus_is_half(zero_minus_set):
    # direct inner product: <0|-> = 1/sqrt(2)
    f = state_fidelity(zero_minus_set[0], zero_minus_set[1])
    assert abs(f - 0.5) < 1e-14


@settings(derandomize=True, max_examples=50)
@given(st.floats(min_value=-10.0, max_value=10.0), st.integers(0, 2**31 - 1))
def test_fidelity_phase_invariant(theta, seed):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    b = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    a /= np.linalg.norm(a)
    b /= np.linalg.norm(b)
    base = state_fidelity(a, b)
    assert abs(state_fidelity(np.exp(1j * theta) * a, b) - base) < 1e-12
    assert abs(state_fidelity(a, np.exp(1j * theta) * b) - base) < 1e-12


def test_fidelity_dimension_mismatch():
    with pytest.raises(DimensionError):
        state_fidelity(basis_state(2, 0), basis_state(3, 0))


# ---------------------------------------------------------------------------
# validate


def test_validate_identity_unitary():
    report = validate(UnitaryMatrix(np.eye(2)))
    assert report.passed
    assert report.checks[0].residual == 0.0


def test_validate_bad_trace_density():
    report = validate(DensityMatrix(np.diag([1.0, 0.5])))
    failed = {c.name for c in report.failures()}
    assert failed == {"unit_trace"}


def test_validate_non_psd_density():
    report = validate(DensityMatrix(np.diag([1.5, -0.5])))
    assert "positive_semidefinite" in {c.name for c in report.failures()}


def test_validate_duplicate_state_set():
    dup = StateSet((basis_state(2, 0), basis_state(2, 0)))
    report = validate(dup)
    assert {c.name for c in report.failures()} == {"distinct"}


def test_validate_good_state_set(zero_minus_set):
    assert validate(zero_minus_set).passed


def test_validate_unnormalized_vector():
    report = validate(StateVector([1, 1]))
    assert not report.passed


def test_state_set_requires_square_shape():
    with pytest.raises(DimensionError):
        StateSet((basis_state(3, 0), basis_state(3, 1)))

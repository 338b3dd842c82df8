import numpy as np
import pytest

from conftest import HADAMARD, S
from ctcsim import (
    Condition2Exhausted,
    DimensionError,
    InputNotInSetWarning,
    NonUniqueFixedPoint,
    StateSet,
    StateVector,
    basis_state,
    build_distinguisher,
    build_uk,
    bundle_from_unitaries,
    condition_report,
    controlled_stack,
    distinguish,
    swap_operator,
    tensor_product,
)
from ctcsim.sampling import random_state_set


def orthonormal_set(n):
    return StateSet(tuple(basis_state(n, k) for k in range(n)))


def test_swap_operator_exchanges_registers():
    rng = np.random.default_rng(0)
    for d in (2, 3):
        s = swap_operator(d)
        a = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        b = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        assert np.abs(s @ np.kron(a, b) - np.kron(b, a)).max() < 1e-14


def test_build_uk_orthonormal_basis_is_identity():
    states = orthonormal_set(2)
    for k in (0, 1):
        uk = build_uk(states, k, rng_seed=0)
        assert np.abs(uk.entries - np.eye(2)).max() < 1e-14


def test_build_uk_example_reproduces_hadamard(zero_minus_set):
    u1 = build_uk(zero_minus_set, 1, rng_seed=0)
    assert np.abs(u1.entries - HADAMARD).max() < 1e-14
    u0 = build_uk(zero_minus_set, 0, rng_seed=0)
    assert np.abs(u0.entries - np.eye(2)).max() < 1e-14


def test_build_uk_conditions_on_random_set():
    rng = np.random.default_rng(7)
    states = random_state_set(3, rng)
    for k in range(3):
        uk = build_uk(states, k, rng_seed=7)
        mapped = uk.entries @ states[k].amplitudes
        assert np.linalg.norm(mapped - np.eye(3)[k]) < 1e-9
        for j in range(3):
            assert abs(uk.entries[j] @ states[j].amplitudes) > 1e-6


def test_build_uk_duplicate_states_exhaust_retries():
    dup = StateSet((basis_state(2, 0), basis_state(2, 0)))
    with pytest.raises(Condition2Exhausted):
        build_uk(dup, 0, rng_seed=0)


def test_build_uk_index_out_of_range(zero_minus_set):
    with pytest.raises(DimensionError):
        build_uk(zero_minus_set, 2)


def test_condition_report_orthonormal_identity():
    states = orthonormal_set(2)
    report = condition_report(states, [np.eye(2), np.eye(2)])
    assert np.abs(report.overlaps - np.ones((2, 2))).max() < 1e-14
    assert report.min_overlap == pytest.approx(1.0)


def test_condition_report_example_table(zero_minus_set):
    report = condition_report(zero_minus_set, [np.eye(2), HADAMARD])
    expected = np.array([[1, S], [S, 1]])
    assert np.abs(report.overlaps - expected).max() < 1e-12
    assert report.min_overlap == pytest.approx(S)
    assert report.condition1_deviation.max() < 1e-12


def test_condition_report_rejects_wrong_count(zero_minus_set):
    with pytest.raises(DimensionError):
        condition_report(zero_minus_set, [np.eye(2)])


def test_build_distinguisher_example_total(zero_minus_set):
    bundle = build_distinguisher(zero_minus_set, rng_seed=0)
    reference = (tensor_product(np.diag([1, 0]), np.eye(2))
                 + tensor_product(np.diag([0, 1]), HADAMARD)) @ swap_operator(2)
    assert np.abs(bundle.total.entries - reference).max() < 1e-12
    assert bundle.condition2_min == pytest.approx(S, abs=1e-12)


def test_bundle_invariants_on_random_sets():
    rng = np.random.default_rng(12)
    for n in (3, 4):
        for _ in range(3):
            states = random_state_set(n, rng)
            bundle = build_distinguisher(states, rng_seed=int(rng.integers(1 << 30)))
            stacked = controlled_stack([u.entries for u in bundle.uks])
            rebuilt = stacked @ swap_operator(n)
            assert np.abs(bundle.total.entries - rebuilt).max() < 1e-12
            eye = np.eye(n * n)
            assert np.abs(bundle.total.entries.conj().T
                          @ bundle.total.entries - eye).max() < 1e-10
            assert bundle.condition2_min > 1e-6
            report = condition_report(states, bundle.uks)
            assert report.condition1_deviation.max() <= 1e-9


def test_build_distinguisher_is_deterministic():
    rng = np.random.default_rng(5)
    states = random_state_set(4, rng)
    b1 = build_distinguisher(states, rng_seed=11)
    b2 = build_distinguisher(states, rng_seed=11)
    assert np.array_equal(b1.total.entries, b2.total.entries)
    for u1, u2 in zip(b1.uks, b2.uks):
        assert np.array_equal(u1.entries, u2.entries)


def test_distinguish_example_minus(zero_minus_set):
    bundle = build_distinguisher(zero_minus_set, rng_seed=0)
    result = distinguish(bundle, zero_minus_set[1])
    assert result.decoded == 1
    assert result.unique
    assert result.input_in_set
    expected = np.diag([0.0, 1.0])
    assert np.abs(result.rho_out.entries - expected).max() < 1e-8
    assert np.abs(result.rho_ctc.entries - expected).max() < 1e-8


def test_distinguish_orthonormal_basis():
    bundle = build_distinguisher(orthonormal_set(2), rng_seed=0)
    assert distinguish(bundle, basis_state(2, 0)).decoded == 0


def test_distinguish_every_member_of_random_set():
    rng = np.random.default_rng(21)
    states = random_state_set(3, rng)
    bundle = build_distinguisher(states, rng_seed=21)
    for j in range(3):
        result = distinguish(bundle, states[j])
        assert result.decoded == j
        assert result.fidelity_to_basis >= 1 - 1e-8
        assert result.residual <= 1e-8


def test_distinguish_flags_unknown_input():
    bundle = build_distinguisher(orthonormal_set(2), rng_seed=0)
    plus = StateVector([S, S])
    with pytest.warns(InputNotInSetWarning):
        result = distinguish(bundle, plus)
    assert not result.input_in_set


def test_distinguish_detects_condition2_violation():
    # Hand-built counterexample: conditions (1) hold but U_1 and U_2
    # shuffle the other basis states in a closed 2-cycle, so on input
    # psi_0 the self-consistency condition has a whole family of
    # solutions (|0><0| and (|1><1| + |2><2|)/2 among them).
    states = orthonormal_set(3)
    u1 = np.array([[0, 0, 1], [0, 1, 0], [1, 0, 0]], dtype=complex)  # 0<->2
    u2 = np.array([[0, 1, 0], [1, 0, 0], [0, 0, 1]], dtype=complex)  # 0<->1
    bundle = bundle_from_unitaries(states, [np.eye(3), u1, u2])
    assert bundle.condition2_min < 1e-6
    with pytest.raises(NonUniqueFixedPoint):
        distinguish(bundle, states[0])


def test_distinguish_dimension_mismatch(zero_minus_set):
    bundle = build_distinguisher(zero_minus_set, rng_seed=0)
    with pytest.raises(DimensionError):
        distinguish(bundle, basis_state(3, 0))

"""Dense complex linear algebra shared by every other module.

Conventions fixed here, once, for the whole package:

* Kronecker products are row-major with the first factor as the slow
  index.  A composite system therefore always stores the
  chronology-respecting register first and the CTC register second.
* Residuals are measured in the max-entry norm unless stated otherwise,
  and tolerances are absolute.

The wrapper types (:class:`StateVector`, :class:`DensityMatrix`,
:class:`UnitaryMatrix`, :class:`StateSet`) enforce only structural shape
at construction.  Numeric invariants (normalization, hermiticity, unit
trace, positivity, unitarity, distinctness) are checked by
:func:`validate`, which reports instead of raising; operations that need
an invariant check it themselves at their boundary.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .errors import DimensionError, NormalizationError

TOL_NORM = 1e-10
TOL_HERM = 1e-10
TOL_UNI = 1e-10
TOL_GS = 1e-10
TOL_PSD = 1e-9
TOL_DISTINCT = 1e-9

# loss of orthogonality that triggers a second Gram-Schmidt sweep
_REORTH_THRESHOLD = 1e-8


def _frozen_complex_array(values, ndim: int, what: str) -> np.ndarray:
    arr = np.array(values, dtype=complex)
    if arr.ndim != ndim or arr.size == 0:
        raise DimensionError(f"{what} must be a nonempty {ndim}-d complex array")
    if ndim == 2 and arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"{what} must be square, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class StateVector:
    """A pure state held as a complex amplitude vector."""

    amplitudes: np.ndarray

    def __post_init__(self):
        object.__setattr__(
            self, "amplitudes",
            _frozen_complex_array(self.amplitudes, 1, "state vector"),
        )

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.amplitudes, dtype=dtype)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A mixed or pure state held as a d x d complex matrix."""

    entries: np.ndarray

    def __post_init__(self):
        object.__setattr__(
            self, "entries",
            _frozen_complex_array(self.entries, 2, "density matrix"),
        )

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)


@dataclass(frozen=True, eq=False)
class UnitaryMatrix:
    """An operator held as a d x d complex matrix, expected unitary."""

    entries: np.ndarray

    def __post_init__(self):
        object.__setattr__(
            self, "entries",
            _frozen_complex_array(self.entries, 2, "unitary matrix"),
        )

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)


@dataclass(frozen=True, eq=False)
class StateSet:
    """An ordered collection of N states in an N-dimensional space."""

    states: tuple[StateVector, ...]

    def __post_init__(self):
        members = tuple(
            s if isinstance(s, StateVector) else StateVector(np.asarray(s))
            for s in self.states
        )
        n = len(members)
        if n == 0:
            raise DimensionError("state set must contain at least one state")
        if any(s.dim != n for s in members):
            raise DimensionError(
                f"a set of {n} states must live in a {n}-dimensional space"
            )
        object.__setattr__(self, "states", members)

    @property
    def size(self) -> int:
        return len(self.states)

    def __len__(self) -> int:
        return len(self.states)

    def __iter__(self):
        return iter(self.states)

    def __getitem__(self, k: int) -> StateVector:
        return self.states[k]


def _as_vector(v) -> np.ndarray:
    arr = np.asarray(v, dtype=complex)
    if arr.ndim != 1 or arr.size == 0:
        raise DimensionError("expected a nonempty 1-d complex vector")
    return arr


def _as_matrix(m) -> np.ndarray:
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2 or arr.size == 0:
        raise DimensionError("expected a nonempty 2-d complex matrix")
    return arr


def basis_state(dim: int, index: int) -> StateVector:
    """Computational basis vector |index> in `dim` dimensions."""
    if not 0 <= index < dim:
        raise DimensionError(f"basis index {index} out of range for dim {dim}")
    amp = np.zeros(dim, dtype=complex)
    amp[index] = 1.0
    return StateVector(amp)


def projector(state) -> np.ndarray:
    """Rank-1 projector |psi><psi| as a plain array."""
    v = _as_vector(state)
    return np.outer(v, v.conj())


def tensor_product(a, b) -> np.ndarray:
    """Kronecker product with the first factor as the slow index.

    out[i*p + k, j*q + l] = a[i, j] * b[k, l] for b of shape (p, q).
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.size == 0 or b.size == 0:
        raise DimensionError("tensor_product operands must be nonempty")
    return np.kron(a, b)


def partial_trace(m, dim_a: int, dim_b: int,
                  keep: Literal["first", "second"]) -> np.ndarray:
    """Trace out one factor of a (dim_a * dim_b)-dimensional operator.

    `keep="first"` returns the reduced operator on the slow (first)
    subsystem, `keep="second"` on the fast one.  The total trace is
    preserved.
    """
    m = _as_matrix(m)
    d = dim_a * dim_b
    if m.shape != (d, d):
        raise DimensionError(
            f"matrix of shape {m.shape} does not factor as {dim_a} x {dim_b}"
        )
    r = m.reshape(dim_a, dim_b, dim_a, dim_b)
    if keep == "first":
        return np.einsum("ijkj->ik", r)
    if keep == "second":
        return np.einsum("ijil->jl", r)
    raise ValueError(f"keep must be 'first' or 'second', got {keep!r}")


def _orthogonal_residual(vec: np.ndarray, cols: list[np.ndarray]) -> np.ndarray:
    """One or two modified Gram-Schmidt sweeps of `vec` against `cols`."""
    r = vec.astype(complex).copy()
    for q in cols:
        r -= np.vdot(q, r) * q
    if cols and np.linalg.norm(r) >= TOL_GS:
        worst = max(abs(np.vdot(q, r)) for q in cols)
        if worst > _REORTH_THRESHOLD:
            for q in cols:
                r -= np.vdot(q, r) * q
    return r


def unitary_from_first_column(first, candidates: Sequence = ()) -> UnitaryMatrix:
    """Complete a normalized vector to a unitary whose column 0 it is.

    The remaining columns come from modified Gram-Schmidt over
    `candidates` in order; vectors whose residual drops below
    ``TOL_GS`` are skipped.  If the candidates do not span the space,
    the basis is completed with standard basis vectors in index order.
    Column 0 equals `first` exactly.
    """
    v0 = _as_vector(first)
    if abs(np.linalg.norm(v0) - 1.0) > TOL_NORM:
        raise NormalizationError(
            f"first column has norm {np.linalg.norm(v0):.12g}, expected 1"
        )
    dim = v0.size
    cols: list[np.ndarray] = [v0]
    pool: list[np.ndarray] = []
    for c in candidates:
        cv = _as_vector(c)
        if cv.size != dim:
            raise DimensionError(
                f"candidate of dim {cv.size} does not match first column dim {dim}"
            )
        pool.append(cv)
    pool.extend(np.eye(dim, dtype=complex))
    for vec in pool:
        if len(cols) == dim:
            break
        r = _orthogonal_residual(vec, cols)
        nrm = np.linalg.norm(r)
        if nrm < TOL_GS:
            continue
        cols.append(r / nrm)
    if len(cols) != dim:
        raise RuntimeError("basis completion failed to reach full rank")
    return UnitaryMatrix(np.column_stack(cols))


def state_fidelity(a, b) -> float:
    """Squared overlap |<a|b>|^2; invariant under global phases."""
    va = _as_vector(a)
    vb = _as_vector(b)
    if va.size != vb.size:
        raise DimensionError(
            f"states of dims {va.size} and {vb.size} cannot overlap"
        )
    f = abs(np.vdot(va, vb)) ** 2
    return float(min(max(f, 0.0), 1.0))


@dataclass(frozen=True)
class InvariantCheck:
    """Outcome of one invariant: the measured residual and its threshold."""

    name: str
    passed: bool
    residual: float
    tolerance: float


@dataclass(frozen=True)
class ValidityReport:
    """Pass/fail per invariant of one domain object."""

    kind: str
    checks: tuple[InvariantCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> tuple[InvariantCheck, ...]:
        return tuple(c for c in self.checks if not c.passed)


def _check(name: str, residual: float, tolerance: float) -> InvariantCheck:
    residual = float(residual)
    return InvariantCheck(name, residual <= tolerance, residual, float(tolerance))


def validate(obj, *, distinct_tol: float = TOL_DISTINCT) -> ValidityReport:
    """Measure every invariant of a domain object; reports, never raises.

    `distinct_tol` overrides the state-set distinctness tolerance (the
    pairwise fidelity bound is ``1 - distinct_tol``).
    """
    if isinstance(obj, StateVector):
        return ValidityReport("StateVector", (
            _check("norm", abs(np.linalg.norm(obj.amplitudes) - 1.0), TOL_NORM),
        ))
    if isinstance(obj, DensityMatrix):
        m = obj.entries
        herm = np.abs(m - m.conj().T).max()
        trace = abs(m.trace() - 1.0)
        eigmin = np.linalg.eigvalsh((m + m.conj().T) / 2).min()
        return ValidityReport("DensityMatrix", (
            _check("hermitian", herm, TOL_HERM),
            _check("unit_trace", trace, TOL_NORM),
            _check("positive_semidefinite", max(0.0, -eigmin), TOL_PSD),
        ))
    if isinstance(obj, UnitaryMatrix):
        u = obj.entries
        res = np.abs(u.conj().T @ u - np.eye(obj.dim)).max()
        return ValidityReport("UnitaryMatrix", (
            _check("unitary", res, TOL_UNI),
        ))
    if isinstance(obj, StateSet):
        worst_norm = max(
            abs(np.linalg.norm(s.amplitudes) - 1.0) for s in obj.states
        )
        max_fid = 0.0
        for i in range(obj.size):
            for j in range(i + 1, obj.size):
                max_fid = max(max_fid, state_fidelity(obj[i], obj[j]))
        distinct = InvariantCheck(
            "distinct",
            max_fid < 1.0 - distinct_tol,
            max_fid,
            1.0 - distinct_tol,
        )
        return ValidityReport("StateSet", (
            _check("members_normalized", worst_norm, TOL_NORM),
            distinct,
        ))
    raise TypeError(f"validate() does not know the type {type(obj).__name__}")

"""Exact finite-dimensional quantum state algebra.

Pure states are amplitude vectors over an explicit register layout and
density operators are Hermitian, positive, trace-one matrices. Indexing
is big-endian throughout: the first register is the most significant
digit of the flat index. Values are immutable after construction and
every operation returns a new value, so states can be shared freely.

Measurements come in two modes. Exact mode returns every branch with
its Born probability; sampled mode draws a single branch from an
explicitly seeded generator. Nothing in this module ever consults
global random state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatchError,
    InvalidBasisError,
    NonUnitaryGateError,
    StateValidationError,
)
from .tolerances import (
    CONSTRUCT_ATOL,
    EIGENVALUE_FLOOR,
    HERMITIAN_ATOL,
    ZERO_BRANCH_PROB,
)

__all__ = [
    "PureState",
    "DensityOperator",
    "MeasurementResult",
    "PAULI_Z",
    "HADAMARD",
    "tensor",
    "overlap",
    "equal_up_to_global_phase",
    "apply_gate",
    "project_register",
    "measure_in_basis",
    "swap_test_pass_probability",
    "swap_test_pass_probability_mixed",
    "partial_trace",
    "trace_norm",
]

PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=np.complex128)
HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=np.complex128) / math.sqrt(2.0)


def _as_complex_vector(values) -> np.ndarray:
    arr = np.asarray(values, dtype=np.complex128).reshape(-1).copy()
    if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
        raise StateValidationError("amplitudes must be finite")
    return arr


@dataclass(frozen=True)
class PureState:
    """Normalized amplitude vector over ``dims`` registers (big-endian)."""

    dims: tuple[int, ...]
    amplitudes: np.ndarray

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims or any(d < 1 for d in dims):
            raise StateValidationError(f"register dims must be positive, got {dims}")
        amps = _as_complex_vector(self.amplitudes)
        if amps.size != math.prod(dims):
            raise StateValidationError(
                f"amplitude count {amps.size} does not match dims {dims}"
            )
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > CONSTRUCT_ATOL:
            raise StateValidationError(f"state is not normalized: norm={norm!r}")
        amps.setflags(write=False)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def build(cls, amplitudes, dims=None, normalize: bool = False) -> "PureState":
        """Construct from raw amplitudes, optionally rescaling to unit norm."""
        amps = _as_complex_vector(amplitudes)
        if dims is None:
            dims = (amps.size,)
        if normalize:
            norm = float(np.linalg.norm(amps))
            if norm < ZERO_BRANCH_PROB:
                raise StateValidationError("cannot normalize a null vector")
            amps = amps / norm
        return cls(tuple(dims), amps)

    @classmethod
    def basis_state(cls, dims, labels) -> "PureState":
        """Computational basis state |labels...> over the given registers."""
        dims = tuple(int(d) for d in dims)
        labels = tuple(int(x) for x in labels)
        if len(labels) != len(dims):
            raise DimensionMismatchError("one label per register required")
        for x, d in zip(labels, dims):
            if not 0 <= x < d:
                raise StateValidationError(f"label {x} out of range for dim {d}")
        amps = np.zeros(math.prod(dims), dtype=np.complex128)
        amps[int(np.ravel_multi_index(labels, dims))] = 1.0
        return cls(dims, amps)

    @property
    def dim(self) -> int:
        return math.prod(self.dims)

    def as_tensor(self) -> np.ndarray:
        return self.amplitudes.reshape(self.dims)


@dataclass(frozen=True)
class DensityOperator:
    """Hermitian, positive semidefinite, trace-one matrix over ``dims``."""

    dims: tuple[int, ...]
    matrix: np.ndarray

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims or any(d < 1 for d in dims):
            raise StateValidationError(f"register dims must be positive, got {dims}")
        d = math.prod(dims)
        mat = np.asarray(self.matrix, dtype=np.complex128).copy()
        if mat.shape != (d, d):
            raise StateValidationError(f"matrix shape {mat.shape} does not match dims {dims}")
        if not np.all(np.isfinite(mat.real)) or not np.all(np.isfinite(mat.imag)):
            raise StateValidationError("matrix entries must be finite")
        if np.max(np.abs(mat - mat.conj().T)) > CONSTRUCT_ATOL:
            raise StateValidationError("density operator is not Hermitian")
        tr = complex(np.trace(mat))
        if abs(tr - 1.0) > CONSTRUCT_ATOL:
            raise StateValidationError(f"density operator trace is {tr!r}, not 1")
        low = float(np.min(np.linalg.eigvalsh((mat + mat.conj().T) / 2.0)))
        if low < EIGENVALUE_FLOOR:
            raise StateValidationError(f"density operator has eigenvalue {low!r} < 0")
        mat.setflags(write=False)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "matrix", mat)

    @classmethod
    def from_pure(cls, state: PureState) -> "DensityOperator":
        v = state.amplitudes
        return cls(state.dims, np.outer(v, v.conj()))

    @property
    def dim(self) -> int:
        return math.prod(self.dims)


@dataclass(frozen=True)
class MeasurementResult:
    """One branch of a projective measurement.

    ``post_state`` keeps the full register layout with the measured
    register collapsed onto its outcome vector, or is None when the
    branch probability is too small to renormalize.
    """

    outcome: int
    probability: float
    post_state: PureState | None


def tensor(a: PureState, b: PureState) -> PureState:
    """Kronecker product; ``a`` supplies the more significant registers."""
    return PureState(a.dims + b.dims, np.kron(a.amplitudes, b.amplitudes))


def overlap(a: PureState, b: PureState) -> complex:
    """Inner product <a|b>. Requires identical register layouts."""
    if a.dims != b.dims:
        raise DimensionMismatchError(f"layouts differ: {a.dims} vs {b.dims}")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def equal_up_to_global_phase(a: PureState, b: PureState, atol: float = CONSTRUCT_ATOL) -> bool:
    """Whether |<a|b>| = 1 within ``atol``."""
    return abs(abs(overlap(a, b)) - 1.0) <= atol


def _check_registers(state: PureState, registers) -> tuple[int, ...]:
    regs = tuple(int(r) for r in registers)
    if len(set(regs)) != len(regs):
        raise DimensionMismatchError(f"duplicate register in {regs}")
    for r in regs:
        if not 0 <= r < len(state.dims):
            raise DimensionMismatchError(
                f"register {r} out of range for layout {state.dims}"
            )
    return regs


def apply_gate(state: PureState, gate, registers) -> PureState:
    """Apply a unitary to the listed registers (in the order given).

    The gate dimension must equal the product of the selected register
    dimensions; unitarity is checked to construction tolerance.
    """
    regs = _check_registers(state, registers)
    if not regs:
        raise DimensionMismatchError("apply_gate needs at least one register")
    gate = np.asarray(gate, dtype=np.complex128)
    d = math.prod(state.dims[r] for r in regs)
    if gate.shape != (d, d):
        raise DimensionMismatchError(
            f"gate shape {gate.shape} does not match register dims (product {d})"
        )
    if np.max(np.abs(gate.conj().T @ gate - np.eye(d))) > CONSTRUCT_ATOL:
        raise NonUnitaryGateError("gate is not unitary within tolerance")
    tens = state.as_tensor()
    moved = np.moveaxis(tens, regs, range(len(regs)))
    folded = moved.reshape(d, -1)
    acted = gate @ folded
    back = np.moveaxis(acted.reshape(moved.shape), range(len(regs)), regs)
    return PureState(state.dims, back.reshape(-1))


def project_register(state: PureState, register: int, vec) -> tuple[float, PureState | None]:
    """Project one register onto ``vec`` and drop it.

    Returns (probability, remaining state). The remaining state is None
    when the probability is below the renormalization floor or when no
    register is left.
    """
    (register,) = _check_registers(state, (register,))
    vec = _as_complex_vector(vec)
    if vec.size != state.dims[register]:
        raise DimensionMismatchError(
            f"vector length {vec.size} does not match register dim {state.dims[register]}"
        )
    inner = np.tensordot(vec.conj(), state.as_tensor(), axes=([0], [register]))
    prob = float(np.sum(np.abs(inner) ** 2))
    rest_dims = state.dims[:register] + state.dims[register + 1 :]
    if prob < ZERO_BRANCH_PROB or not rest_dims:
        return prob, None
    remaining = PureState(rest_dims, inner.reshape(-1) / math.sqrt(prob))
    return prob, remaining


def _collapse_register(state: PureState, register: int, vec: np.ndarray, prob: float) -> PureState:
    """Post-measurement state with ``register`` collapsed onto ``vec``."""
    inner = np.tensordot(vec.conj(), state.as_tensor(), axes=([0], [register]))
    post = np.moveaxis(np.multiply.outer(inner, vec), -1, register)
    return PureState(state.dims, post.reshape(-1) / math.sqrt(prob))


def measure_in_basis(state: PureState, register: int, basis, mode: str = "exact", rng=None):
    """Projective measurement of a qubit register in a two-vector basis.

    basis: pair of orthonormal length-2 vectors; outcome i corresponds
    to basis[i]. Exact mode returns both MeasurementResults (branches
    of negligible probability carry post_state None); sampled mode
    draws one outcome from ``rng`` and returns a single result.
    """
    (register,) = _check_registers(state, (register,))
    if state.dims[register] != 2:
        raise DimensionMismatchError("measure_in_basis requires a qubit register")
    b0 = _as_complex_vector(basis[0])
    b1 = _as_complex_vector(basis[1])
    if b0.size != 2 or b1.size != 2:
        raise InvalidBasisError("basis vectors must have length 2")
    gram = np.array(
        [
            [np.vdot(b0, b0), np.vdot(b0, b1)],
            [np.vdot(b1, b0), np.vdot(b1, b1)],
        ]
    )
    if np.max(np.abs(gram - np.eye(2))) > CONSTRUCT_ATOL:
        raise InvalidBasisError("basis is not orthonormal within tolerance")

    branches = []
    for outcome, vec in enumerate((b0, b1)):
        inner = np.tensordot(vec.conj(), state.as_tensor(), axes=([0], [register]))
        prob = float(np.sum(np.abs(inner) ** 2))
        post = None
        if prob >= ZERO_BRANCH_PROB:
            post = _collapse_register(state, register, vec, prob)
        branches.append(MeasurementResult(outcome, prob, post))

    total = branches[0].probability + branches[1].probability
    if abs(total - 1.0) > CONSTRUCT_ATOL:
        raise StateValidationError(f"branch probabilities sum to {total!r}")

    if mode == "exact":
        return tuple(branches)
    if mode == "sampled":
        if rng is None:
            raise ValueError("sampled mode requires an explicit rng")
        pick = 0 if rng.random() < branches[0].probability else 1
        return branches[pick]
    raise ValueError(f"unknown mode {mode!r}")


def swap_test_pass_probability(xi: PureState, chi: PureState) -> float:
    """SWAP-test pass probability (1 + |<xi|chi>|^2) / 2 for pure inputs."""
    ov = overlap(xi, chi)
    return 0.5 * (1.0 + abs(ov) ** 2)


def swap_test_pass_probability_mixed(rho: DensityOperator, sigma: DensityOperator) -> float:
    """SWAP-test pass probability (1 + tr(rho sigma)) / 2 for mixed inputs."""
    if rho.dims != sigma.dims:
        raise DimensionMismatchError(f"layouts differ: {rho.dims} vs {sigma.dims}")
    val = complex(np.trace(rho.matrix @ sigma.matrix))
    return 0.5 * (1.0 + val.real)


def partial_trace(obj: PureState | DensityOperator, keep) -> DensityOperator:
    """Reduced density operator on the ``keep`` registers (ascending order).

    Keeping every register of a pure state yields its projector.
    """
    keep = tuple(int(k) for k in keep)
    if not keep:
        raise DimensionMismatchError("must keep at least one register")
    if len(set(keep)) != len(keep) or list(keep) != sorted(keep):
        raise DimensionMismatchError(f"keep must be strictly ascending, got {keep}")
    n = len(obj.dims)
    for k in keep:
        if not 0 <= k < n:
            raise DimensionMismatchError(f"register {k} out of range for layout {obj.dims}")
    traced = tuple(i for i in range(n) if i not in keep)
    kept_dims = tuple(obj.dims[k] for k in keep)
    dk = math.prod(kept_dims)

    if isinstance(obj, PureState):
        tens = obj.as_tensor()
        if not traced:
            return DensityOperator.from_pure(obj)
        red = np.tensordot(tens, tens.conj(), axes=(traced, traced))
        return DensityOperator(kept_dims, red.reshape(dk, dk))

    tens = obj.matrix.reshape(obj.dims + obj.dims)
    k_live = n
    for reg in sorted(traced, reverse=True):
        tens = np.trace(tens, axis1=reg, axis2=reg + k_live)
        k_live -= 1
    return DensityOperator(kept_dims, tens.reshape(dk, dk))


def trace_norm(matrix) -> float:
    """Trace norm (sum of absolute eigenvalues) of a Hermitian matrix."""
    mat = np.asarray(matrix, dtype=np.complex128)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {mat.shape}")
    if np.max(np.abs(mat - mat.conj().T)) > HERMITIAN_ATOL:
        raise StateValidationError("trace_norm input is not Hermitian within tolerance")
    eigs = np.linalg.eigvalsh((mat + mat.conj().T) / 2.0)
    return float(np.sum(np.abs(eigs)))

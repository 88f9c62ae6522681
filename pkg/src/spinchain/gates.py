"""Gate matrices, circuits and their application to states.

Gates act on 1-based site indices. Applying a gate never builds the full
2**m x 2**m operator: the amplitude array is viewed as an m-axis tensor
(site 1 on axis 0) and the small gate matrix is contracted onto the target
axes. :func:`circuit_unitary` builds dense matrices and exists for
verification only.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    ArityMismatchError,
    DimensionMismatchError,
    SpinChainError,
    TargetOutOfRangeError,
    TooManyQubitsError,
)
from .states import DensityMatrix, StateVector

MAX_UNITARY_QUBITS = 8
MAX_DENSITY_QUBITS = 6

I2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
CNOT_MATRIX = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)
RCNOT_MATRIX = np.array(
    [[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0]], dtype=complex
)
MAGIC_MATRIX = np.array(
    [[1, 1j, 0, 0], [0, 0, 1j, 1], [0, 0, 1j, -1], [1, -1j, 0, 0]], dtype=complex
) / np.sqrt(2)

for _m in (PAULI_X, PAULI_Y, PAULI_Z, HADAMARD, CNOT_MATRIX, RCNOT_MATRIX, MAGIC_MATRIX):
    _m.setflags(write=False)


class GateKind(enum.Enum):
    X = "X"
    Y = "Y"
    Z = "Z"
    H = "H"
    PHASE = "PHASE"
    RX = "RX"
    RY = "RY"
    RZ = "RZ"
    CNOT = "CNOT"
    RCNOT = "RCNOT"
    MAGIC = "MAGIC"
    MAGIC_DG = "MAGIC_DG"

    @property
    def arity(self) -> int:
        return 2 if self in _TWO_QUBIT else 1

    @property
    def parametrized(self) -> bool:
        return self in _PARAMETRIZED


_TWO_QUBIT = frozenset({GateKind.CNOT, GateKind.RCNOT, GateKind.MAGIC, GateKind.MAGIC_DG})
_PARAMETRIZED = frozenset({GateKind.PHASE, GateKind.RX, GateKind.RY, GateKind.RZ})


def rotation(axis: np.ndarray, phi: float) -> np.ndarray:
    """exp(-i phi sigma / 2) for a Pauli matrix ``sigma``."""
    return np.cos(phi / 2) * I2 - 1j * np.sin(phi / 2) * axis


def gate_matrix(kind: GateKind, angle: float | None = None) -> np.ndarray:
    """Return the unitary for ``kind``; rotations and the phase gate need ``angle``."""
    if kind.parametrized:
        if angle is None:
            raise ArityMismatchError(f"{kind.value} requires an angle")
        if kind is GateKind.PHASE:
            return np.diag([1.0, np.exp(1j * angle)]).astype(complex)
        if kind is GateKind.RZ:
            return np.diag([np.exp(-0.5j * angle), np.exp(0.5j * angle)])
        axis = PAULI_X if kind is GateKind.RX else PAULI_Y
        return rotation(axis, angle)
    fixed = {
        GateKind.X: PAULI_X,
        GateKind.Y: PAULI_Y,
        GateKind.Z: PAULI_Z,
        GateKind.H: HADAMARD,
        GateKind.CNOT: CNOT_MATRIX,
        GateKind.RCNOT: RCNOT_MATRIX,
        GateKind.MAGIC: MAGIC_MATRIX,
    }
    if kind is GateKind.MAGIC_DG:
        return MAGIC_MATRIX.conj().T.copy()
    return fixed[kind].copy()


@dataclass(frozen=True)
class GateOp:
    """One gate on 1-based ``targets``. For CNOT the first target is the control."""

    kind: GateKind
    targets: tuple[int, ...]
    angle: float | None = None

    def __post_init__(self):
        targets = tuple(int(t) for t in self.targets)
        object.__setattr__(self, "targets", targets)
        if len(targets) != self.kind.arity:
            raise ArityMismatchError(
                f"{self.kind.value} acts on {self.kind.arity} qubit(s), got {targets}"
            )
        if len(set(targets)) != len(targets):
            raise ArityMismatchError(f"repeated target in {targets}")
        if self.kind.parametrized:
            if self.angle is None:
                raise ArityMismatchError(f"{self.kind.value} requires an angle")
            object.__setattr__(self, "angle", float(self.angle))
        elif self.angle is not None:
            raise ArityMismatchError(f"{self.kind.value} takes no angle")

    @property
    def matrix(self) -> np.ndarray:
        return gate_matrix(self.kind, self.angle)

    def dump(self) -> str:
        head = self.kind.value if self.angle is None else f"{self.kind.value}({self.angle!r})"
        return " ".join([head, *(str(t) for t in self.targets)])


def op(kind: GateKind | str, *targets: int, angle: float | None = None) -> GateOp:
    """Shorthand constructor: ``op("RZ", 1, angle=0.3)``, ``op("CNOT", 1, 2)``."""
    return GateOp(GateKind(kind) if isinstance(kind, str) else kind, targets, angle)


@dataclass(frozen=True)
class Circuit:
    num_qubits: int
    ops: tuple[GateOp, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.num_qubits < 1:
            raise SpinChainError("circuit needs at least one qubit")
        ops = tuple(self.ops)
        object.__setattr__(self, "ops", ops)
        for g in ops:
            for t in g.targets:
                if not 1 <= t <= self.num_qubits:
                    raise TargetOutOfRangeError(
                        f"{g.dump()} targets qubit {t} outside [1, {self.num_qubits}]"
                    )

    def __len__(self) -> int:
        return len(self.ops)

    def __iter__(self):
        return iter(self.ops)

    def __add__(self, other: Circuit) -> Circuit:
        if other.num_qubits != self.num_qubits:
            raise DimensionMismatchError("cannot concatenate circuits of different width")
        return Circuit(self.num_qubits, self.ops + other.ops)

    def repeat(self, n: int) -> Circuit:
        return Circuit(self.num_qubits, self.ops * n)

    def dump(self) -> str:
        """One op per line: ``KIND(angle) q_i [q_j]``."""
        return "\n".join(g.dump() for g in self.ops)

    @classmethod
    def parse(cls, text: str, num_qubits: int) -> Circuit:
        ops = []
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            m = _DUMP_LINE.fullmatch(line)
            if m is None:
                raise SpinChainError(f"line {lineno}: cannot parse {line!r}")
            angle = float(m["angle"]) if m["angle"] is not None else None
            targets = [int(t) for t in m["targets"].split()]
            ops.append(GateOp(GateKind(m["kind"]), tuple(targets), angle))
        return cls(num_qubits, tuple(ops))


_DUMP_LINE = re.compile(r"(?P<kind>[A-Z_]+)(?:\((?P<angle>[^)]*)\))?\s+(?P<targets>\d+(?:\s+\d+)*)")


def _contract(tensor: np.ndarray, u: np.ndarray, axes: Sequence[int]) -> np.ndarray:
    k = len(axes)
    ut = u.reshape((2,) * (2 * k))
    out = np.tensordot(ut, tensor, axes=(list(range(k, 2 * k)), list(axes)))
    return np.moveaxis(out, list(range(k)), list(axes))


def apply_matrix(psi: np.ndarray, u: np.ndarray, targets: Sequence[int], num_qubits: int) -> np.ndarray:
    """Apply a 2**k x 2**k matrix on 1-based ``targets`` of raw amplitudes.

    ``psi`` may carry leading batch axes; its last axis has length 2**num_qubits.
    """
    lead = psi.shape[:-1]
    t = psi.reshape(lead + (2,) * num_qubits)
    axes = [len(lead) + q - 1 for q in targets]
    return _contract(t, u, axes).reshape(psi.shape)


def apply_matrix_density(rho: np.ndarray, u: np.ndarray, targets: Sequence[int], num_qubits: int) -> np.ndarray:
    """rho -> U rho U^dagger with U embedded on ``targets``."""
    t = rho.reshape((2,) * (2 * num_qubits))
    rows = [q - 1 for q in targets]
    cols = [num_qubits + q - 1 for q in targets]
    t = _contract(t, u, rows)
    t = _contract(t, u.conj(), cols)
    return t.reshape(rho.shape)


def _check_width(circuit_qubits: int, state_qubits: int):
    if circuit_qubits != state_qubits:
        raise DimensionMismatchError(f"circuit has {circuit_qubits} qubits, state has {state_qubits}")


def apply_gate(state: StateVector, gate: GateOp) -> StateVector:
    m = state.num_qubits
    for t in gate.targets:
        if not 1 <= t <= m:
            raise TargetOutOfRangeError(f"qubit {t} outside [1, {m}]")
    return StateVector(m, apply_matrix(state.amplitudes, gate.matrix, gate.targets, m))


def run_ops(psi: np.ndarray, ops: Iterable[GateOp], num_qubits: int) -> np.ndarray:
    """Apply ops to a raw (possibly batched) amplitude array without revalidating."""
    for g in ops:
        psi = apply_matrix(psi, g.matrix, g.targets, num_qubits)
    return psi


def apply_circuit(state: StateVector, circuit: Circuit) -> StateVector:
    _check_width(circuit.num_qubits, state.num_qubits)
    return StateVector(state.num_qubits, run_ops(state.amplitudes, circuit.ops, state.num_qubits))


def circuit_unitary(circuit: Circuit) -> np.ndarray:
    m = circuit.num_qubits
    if m > MAX_UNITARY_QUBITS:
        raise TooManyQubitsError(f"dense unitary limited to {MAX_UNITARY_QUBITS} qubits, got {m}")
    # Columns are basis states; push the identity through as a batch of row vectors.
    u = np.eye(2**m, dtype=complex)
    return run_ops(u, circuit.ops, m).T


def embed(u: np.ndarray, targets: Sequence[int], num_qubits: int) -> np.ndarray:
    """Dense 2**m operator for ``u`` on ``targets``."""
    eye = np.eye(2**num_qubits, dtype=complex)
    return apply_matrix(eye, u, targets, num_qubits).T


def unitaries_equal_up_to_phase(u: np.ndarray, v: np.ndarray, tol: float) -> bool:
    """True iff |tr(U^dagger V)| / d >= 1 - tol."""
    u = np.asarray(u)
    v = np.asarray(v)
    if u.shape != v.shape:
        raise DimensionMismatchError(f"{u.shape} vs {v.shape}")
    d = u.shape[0]
    return bool(abs(np.trace(u.conj().T @ v)) / d >= 1 - tol)


def phase_distance(u: np.ndarray, v: np.ndarray) -> float:
    """Max entrywise deviation after removing the best global phase."""
    tr = np.trace(u.conj().T @ v)
    phase = tr / abs(tr) if abs(tr) > 0 else 1.0
    return float(np.abs(u * phase - v).max())


def apply_circuit_density(rho: DensityMatrix, circuit: Circuit) -> DensityMatrix:
    m = rho.num_qubits
    _check_width(circuit.num_qubits, m)
    if m > MAX_DENSITY_QUBITS:
        raise TooManyQubitsError(f"density evolution limited to {MAX_DENSITY_QUBITS} qubits, got {m}")
    r = np.array(rho.elements)
    for g in circuit.ops:
        r = apply_matrix_density(r, g.matrix, g.targets, m)
    return DensityMatrix(m, r)

"""Pure and mixed state containers.

Ordering convention used everywhere in the package: site 1 is the leftmost
character of a ket label and the most significant bit of the flat amplitude
index. Bit 0 is spin up (sigma_z = +1), bit 1 is spin down (sigma_z = -1).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatchError,
    EmptyStringError,
    InvalidCharacterError,
    NotNormalizedError,
    NotPowerOfTwoError,
    WrongQubitCountError,
)

NORM_TOL = 1e-9


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=complex)
    arr.setflags(write=False)
    return arr


def _num_qubits_for(length: int) -> int:
    if length < 2 or length & (length - 1):
        raise NotPowerOfTwoError(f"length {length} is not a power of two >= 2")
    return length.bit_length() - 1


@dataclass(frozen=True, eq=False)
class StateVector:
    """An m-qubit pure state stored as 2**m complex amplitudes."""

    num_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = _frozen(self.amplitudes).ravel()
        if amps.size != 2**self.num_qubits:
            raise DimensionMismatchError(
                f"{amps.size} amplitudes for {self.num_qubits} qubits"
            )
        norm2 = float(np.vdot(amps, amps).real)
        if abs(norm2 - 1.0) > NORM_TOL:
            raise NotNormalizedError(f"squared norm {norm2!r} deviates from 1")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def __len__(self) -> int:
        return self.dim


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    num_qubits: int
    elements: np.ndarray

    def __post_init__(self):
        rho = _frozen(self.elements)
        d = 2**self.num_qubits
        if rho.shape != (d, d):
            raise DimensionMismatchError(f"shape {rho.shape} for {self.num_qubits} qubits")
        object.__setattr__(self, "elements", rho)

    @property
    def dim(self) -> int:
        return self.elements.shape[0]

    def trace(self) -> float:
        return float(np.trace(self.elements).real)

    def purity(self) -> float:
        return float(np.einsum("ij,ji->", self.elements, self.elements).real)

    def is_valid(self, tol: float = NORM_TOL) -> bool:
        """Hermitian, unit trace and positive semidefinite within ``tol``."""
        rho = self.elements
        if np.abs(rho - rho.conj().T).max() > tol:
            return False
        if abs(np.trace(rho) - 1.0) > tol:
            return False
        return bool(np.linalg.eigvalsh(rho).min() >= -tol)


@dataclass(frozen=True)
class BlochVector:
    x: float
    y: float
    z: float

    def norm(self) -> float:
        return float(np.sqrt(self.x**2 + self.y**2 + self.z**2))


def from_bitstring(bits: str) -> StateVector:
    """Computational basis state for a ket label such as ``"1010"``."""
    if not bits:
        raise EmptyStringError("bitstring must be nonempty")
    bad = set(bits) - {"0", "1"}
    if bad:
        raise InvalidCharacterError(f"invalid characters {sorted(bad)} in {bits!r}")
    amps = np.zeros(2 ** len(bits), dtype=complex)
    amps[int(bits, 2)] = 1.0
    return StateVector(len(bits), amps)


def from_amplitudes(amps) -> StateVector:
    """Wrap an amplitude array as a state. Unnormalized input is rejected."""
    arr = np.asarray(amps, dtype=complex).ravel()
    return StateVector(_num_qubits_for(arr.size), arr)


def bloch_coords(state: StateVector) -> BlochVector:
    if state.num_qubits != 1:
        raise WrongQubitCountError(f"Bloch coordinates need 1 qubit, got {state.num_qubits}")
    a, b = state.amplitudes
    # <X> = 2 Re(a* b), <Y> = 2 Im(a* b), <Z> = |a|^2 - |b|^2
    ab = np.conj(a) * b
    return BlochVector(float(2 * ab.real), float(2 * ab.imag), float(abs(a) ** 2 - abs(b) ** 2))


def inner_product(a: StateVector, b: StateVector) -> complex:
    """<a|b>, conjugate-linear in ``a``."""
    if a.num_qubits != b.num_qubits:
        raise DimensionMismatchError(f"{a.num_qubits} vs {b.num_qubits} qubits")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def to_density(state: StateVector) -> DensityMatrix:
    psi = state.amplitudes
    return DensityMatrix(state.num_qubits, np.outer(psi, psi.conj()))


def fidelity(a: StateVector, b: StateVector) -> float:
    return abs(inner_product(a, b)) ** 2


def phase_aligned_distance(a: StateVector, b: StateVector) -> float:
    """min over global phase of ||a - e^{i alpha} b||."""
    overlap = inner_product(b, a)
    phase = overlap / abs(overlap) if abs(overlap) > 0 else 1.0
    return float(np.linalg.norm(a.amplitudes - phase * b.amplitudes))

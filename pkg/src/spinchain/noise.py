"""Gate noise: depolarizing channels after each gate.

Three execution modes share one noise description:

* ``Ideal`` ignores noise and evolves a pure state.
* ``Density`` applies every gate and then its depolarizing channel to a
  density matrix (exact, m <= 6).
* ``Trajectories`` unravels the same channel: after each gate a uniformly
  chosen non-identity Pauli string is inserted on the gate's qubits with the
  gate's error probability. Trajectory ``i`` draws from its own stream
  seeded by ``derive_seed(seed, i)``; results are reduced in index order, so
  output is reproducible for a fixed seed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    BadProbabilityError,
    GridMismatchError,
    SpinChainError,
    TooManyQubitsError,
)
from .gates import (
    I2,
    MAX_DENSITY_QUBITS,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    Circuit,
    GateOp,
    apply_matrix,
    apply_matrix_density,
    run_ops,
)
from .observables import ObservableSeries
from .seeding import derive_seed, generator
from .states import DensityMatrix, StateVector, to_density

MAX_TRAJECTORY_QUBITS = 10
# amplitudes held per trajectory chunk
_CHUNK_AMPLITUDES = 1 << 21


def _check_probability(p: float, name: str) -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise BadProbabilityError(f"{name} must lie in [0, 1], got {p}")
    return p


@dataclass(frozen=True)
class NoiseModel:
    p_two_qubit: float = 0.01
    p_single_qubit: float = 0.0

    def __post_init__(self):
        _check_probability(self.p_two_qubit, "p_two_qubit")
        _check_probability(self.p_single_qubit, "p_single_qubit")

    def error_probability(self, gate: GateOp) -> float:
        return self.p_two_qubit if gate.kind.arity == 2 else self.p_single_qubit


@dataclass(frozen=True)
class Ideal:
    pass


@dataclass(frozen=True)
class Density:
    pass


@dataclass(frozen=True)
class Trajectories:
    n_traj: int
    seed: int = 0

    def __post_init__(self):
        if self.n_traj < 1:
            raise SpinChainError(f"n_traj must be >= 1, got {self.n_traj}")


ExecutionMode = Ideal | Density | Trajectories


@lru_cache(maxsize=None)
def pauli_strings(k: int) -> tuple[np.ndarray, ...]:
    """The 4**k - 1 non-identity Pauli products on k qubits, in I, X, Y, Z lexicographic order."""
    paulis = (I2, PAULI_X, PAULI_Y, PAULI_Z)
    out = []
    for combo in itertools.product(range(4), repeat=k):
        if any(combo):
            mat = paulis[combo[0]]
            for c in combo[1:]:
                mat = np.kron(mat, paulis[c])
            out.append(mat)
    return tuple(out)


def _depolarize(rho: np.ndarray, sites: Sequence[int], p: float, m: int) -> np.ndarray:
    if p == 0.0:
        return rho
    strings = pauli_strings(len(sites))
    mixed = sum(apply_matrix_density(rho, s, sites, m) for s in strings)
    return (1.0 - p) * rho + (p / len(strings)) * mixed


def apply_depolarizing(rho: DensityMatrix, sites: Sequence[int], p: float) -> DensityMatrix:
    m = rho.num_qubits
    if m > MAX_DENSITY_QUBITS:
        raise TooManyQubitsError(f"density evolution limited to {MAX_DENSITY_QUBITS} qubits, got {m}")
    sites = [int(s) for s in sites]
    if len(sites) not in (1, 2) or len(set(sites)) != len(sites):
        raise SpinChainError(f"depolarizing acts on one or two distinct sites, got {sites}")
    if any(not 1 <= s <= m for s in sites):
        raise SpinChainError(f"sites {sites} outside [1, {m}]")
    p = _check_probability(p, "p")
    return DensityMatrix(m, _depolarize(np.array(rho.elements), sites, p, m))


def _density_ops(rho: np.ndarray, ops: Iterable[GateOp], noise: NoiseModel, m: int) -> np.ndarray:
    for g in ops:
        rho = apply_matrix_density(rho, g.matrix, g.targets, m)
        rho = _depolarize(rho, g.targets, noise.error_probability(g), m)
    return rho


class _TrajectoryBatch:
    """Error draws for a contiguous block of trajectories over a fixed gate sequence."""

    def __init__(self, ops: Sequence[GateOp], noise: NoiseModel, seed: int, start: int, stop: int, repeats: int):
        self.ops = list(ops)
        probs = np.array([noise.error_probability(g) for g in self.ops])
        self.noisy = np.flatnonzero(probs > 0)
        self.probs = probs
        n_events = len(self.noisy) * repeats
        draws = np.empty((stop - start, 2 * n_events))
        for row, i in enumerate(range(start, stop)):
            rng = generator(derive_seed(seed, i))
            draws[row] = rng.random(2 * n_events)
        self.hit = draws[:, :n_events]
        self.which = draws[:, n_events:]
        self._cursor = 0

    def run(self, psi: np.ndarray, m: int) -> np.ndarray:
        """Apply the gate sequence once, consuming the next block of draws."""
        slot = {int(j): n for n, j in enumerate(self.noisy)}
        base = self._cursor
        for j, g in enumerate(self.ops):
            psi = apply_matrix(psi, g.matrix, g.targets, m)
            if j not in slot:
                continue
            col = base + slot[j]
            hit = self.hit[:, col] < self.probs[j]
            if not hit.any():
                continue
            strings = pauli_strings(len(g.targets))
            choice = np.minimum((self.which[:, col] * len(strings)).astype(int), len(strings) - 1)
            for c, pauli in enumerate(strings):
                sel = hit & (choice == c)
                if sel.any():
                    psi[sel] = apply_matrix(psi[sel], pauli, g.targets, m)
        self._cursor += len(self.noisy)
        return psi


def _trajectory_chunks(n_traj: int, dim: int):
    size = max(1, _CHUNK_AMPLITUDES // dim)
    for start in range(0, n_traj, size):
        yield start, min(n_traj, start + size)


def _check_mode_size(mode: ExecutionMode, m: int):
    if isinstance(mode, Density) and m > MAX_DENSITY_QUBITS:
        raise TooManyQubitsError(f"density mode limited to {MAX_DENSITY_QUBITS} qubits, got {m}")
    if isinstance(mode, Trajectories) and m > MAX_TRAJECTORY_QUBITS:
        raise TooManyQubitsError(f"trajectory mode limited to {MAX_TRAJECTORY_QUBITS} qubits, got {m}")


def noisy_execute(circuit: Circuit, psi0: StateVector, noise: NoiseModel, mode: ExecutionMode) -> DensityMatrix:
    """Run ``circuit`` on ``psi0`` under ``noise`` and return the output density matrix."""
    m = psi0.num_qubits
    if circuit.num_qubits != m:
        raise SpinChainError(f"circuit has {circuit.num_qubits} qubits, state has {m}")
    _check_mode_size(mode, m)
    if isinstance(mode, Ideal):
        return to_density(StateVector(m, run_ops(psi0.amplitudes, circuit.ops, m)))
    if isinstance(mode, Density):
        return DensityMatrix(m, _density_ops(np.array(to_density(psi0).elements), circuit.ops, noise, m))
    dim = 2**m
    rho = np.zeros((dim, dim), dtype=complex)
    for start, stop in _trajectory_chunks(mode.n_traj, dim):
        batch = _TrajectoryBatch(circuit.ops, noise, mode.seed, start, stop, repeats=1)
        psi = np.repeat(psi0.amplitudes[None, :], stop - start, axis=0)
        psi = batch.run(psi, m)
        rho += psi.T @ psi.conj()
    return DensityMatrix(m, rho / mode.n_traj)


def noisy_series(
    step: Circuit,
    psi0: StateVector,
    n_steps: int,
    dt: float,
    noise: NoiseModel,
    mode: ExecutionMode,
) -> ObservableSeries:
    """Repeat ``step`` n_steps times under noise, recording probabilities after every step."""
    m = psi0.num_qubits
    _check_mode_size(mode, m)
    times = np.arange(n_steps + 1) * dt
    if isinstance(mode, Ideal):
        psi = psi0.amplitudes
        probs = [np.abs(psi) ** 2]
        for _ in range(n_steps):
            psi = run_ops(psi, step.ops, m)
            probs.append(np.abs(psi) ** 2)
        return ObservableSeries.from_probabilities(times, probs)
    if isinstance(mode, Density):
        rho = np.array(to_density(psi0).elements)
        probs = [np.diag(rho).real.copy()]
        for _ in range(n_steps):
            rho = _density_ops(rho, step.ops, noise, m)
            probs.append(np.diag(rho).real.copy())
        return ObservableSeries.from_probabilities(times, probs)
    dim = 2**m
    total = np.zeros((n_steps + 1, dim))
    for start, stop in _trajectory_chunks(mode.n_traj, dim):
        batch = _TrajectoryBatch(step.ops, noise, mode.seed, start, stop, repeats=n_steps)
        psi = np.repeat(psi0.amplitudes[None, :], stop - start, axis=0)
        total[0] += (np.abs(psi) ** 2).sum(axis=0)
        for j in range(1, n_steps + 1):
            psi = batch.run(psi, m)
            total[j] += (np.abs(psi) ** 2).sum(axis=0)
    return ObservableSeries.from_probabilities(times, total / mode.n_traj)


def deviation_series(ideal: ObservableSeries, noisy: ObservableSeries) -> np.ndarray:
    """|M_s ideal - M_s noisy| at each time point."""
    if len(ideal) != len(noisy) or not np.allclose(ideal.times, noisy.times, rtol=0, atol=1e-12):
        raise GridMismatchError("series are on different time grids")
    return np.abs(ideal.ms_values - noisy.ms_values)

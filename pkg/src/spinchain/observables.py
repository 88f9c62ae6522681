"""Staggered magnetization, basis probabilities and shot emulation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatchError,
    EmptyCountsError,
    SiteOutOfRangeError,
    SpinChainError,
)
from .seeding import generator
from .states import DensityMatrix, StateVector


def basis_probabilities(state: StateVector | DensityMatrix) -> np.ndarray:
    if isinstance(state, DensityMatrix):
        return np.clip(np.diag(state.elements).real, 0.0, None)
    return np.abs(state.amplitudes) ** 2


def _num_qubits(probs: np.ndarray) -> int:
    n = probs.shape[-1]
    if n < 2 or n & (n - 1):
        raise DimensionMismatchError(f"probability vector of length {n}")
    return n.bit_length() - 1


def z_expectations(probs: np.ndarray) -> np.ndarray:
    """Per-site <Z_k> = P(bit 0) - P(bit 1). Accepts a trailing axis of 2**m probabilities."""
    probs = np.asarray(probs, dtype=float)
    m = _num_qubits(probs)
    t = probs.reshape(probs.shape[:-1] + (2,) * m)
    out = []
    for k in range(m):
        marg = np.moveaxis(t, probs.ndim - 1 + k, -1)
        marg = marg.reshape(marg.shape[: probs.ndim - 1] + (-1, 2)).sum(axis=-2)
        out.append(marg[..., 0] - marg[..., 1])
    return np.stack(out, axis=-1)


def staggered_weights(m: int) -> np.ndarray:
    """(-1)^k / m for sites k = 1..m; site 1 carries the minus sign."""
    return np.array([(-1) ** k for k in range(1, m + 1)], dtype=float) / m


def ms_from_probabilities(probs: np.ndarray) -> np.ndarray:
    """Staggered magnetization for one probability vector or a stack of them."""
    z = z_expectations(probs)
    return z @ staggered_weights(z.shape[-1])


def staggered_magnetization(state: StateVector | DensityMatrix) -> float:
    return float(ms_from_probabilities(basis_probabilities(state)))


def marginal_probability(state: StateVector, site: int, outcome: int) -> float:
    m = state.num_qubits
    if not 1 <= site <= m:
        raise SiteOutOfRangeError(f"site {site} outside [1, {m}]")
    if outcome not in (0, 1):
        raise SpinChainError(f"outcome must be 0 or 1, got {outcome}")
    t = basis_probabilities(state).reshape((2,) * m)
    return float(np.take(t, outcome, axis=site - 1).sum())


def bitstrings(m: int) -> list[str]:
    return [format(i, f"0{m}b") for i in range(2**m)]


@dataclass(frozen=True)
class ShotCounts:
    shots: int
    counts: dict[str, int]

    def __post_init__(self):
        if sum(self.counts.values()) != self.shots:
            raise SpinChainError("counts do not sum to the shot total")


def sample_probabilities(probs: np.ndarray, shots: int, seed: int) -> ShotCounts:
    """Draw ``shots`` outcomes from a basis-probability vector by inverse CDF."""
    if shots < 1:
        raise SpinChainError(f"shots must be >= 1, got {shots}")
    probs = np.asarray(probs, dtype=float)
    m = _num_qubits(probs)
    cdf = np.cumsum(probs)
    cdf /= cdf[-1]
    idx = np.searchsorted(cdf, generator(seed).random(shots), side="right")
    idx = np.minimum(idx, probs.size - 1)
    hist = np.bincount(idx, minlength=probs.size)
    labels = bitstrings(m)
    return ShotCounts(int(shots), {labels[i]: int(c) for i, c in enumerate(hist) if c})


def sample_shots(state: StateVector | DensityMatrix, shots: int, seed: int) -> ShotCounts:
    return sample_probabilities(basis_probabilities(state), shots, seed)


def ms_from_counts(counts: ShotCounts) -> float:
    """Post-process measured bitstrings: bit 0 -> +1, bit 1 -> -1, then stagger."""
    if not counts.counts or counts.shots == 0:
        raise EmptyCountsError("no shots recorded")
    total = 0.0
    for bits, c in counts.counts.items():
        m = len(bits)
        value = sum((-1) ** k * (1 if b == "0" else -1) for k, b in enumerate(bits, 1)) / m
        total += c * value
    return total / counts.shots


@dataclass(frozen=True, eq=False)
class ObservableSeries:
    """Time series of M_s and the full basis-probability vector."""

    times: np.ndarray
    ms_values: np.ndarray
    probabilities: np.ndarray

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        ms = np.asarray(self.ms_values, dtype=float)
        probs = np.atleast_2d(np.asarray(self.probabilities, dtype=float))
        if not (len(times) == len(ms) == len(probs)):
            raise DimensionMismatchError("series arrays differ in length")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "ms_values", ms)
        object.__setattr__(self, "probabilities", probs)

    @classmethod
    def from_probabilities(cls, times, probabilities) -> ObservableSeries:
        probs = np.asarray(probabilities, dtype=float)
        return cls(times, ms_from_probabilities(probs), probs)

    @classmethod
    def from_states(cls, records) -> ObservableSeries:
        """Build from ``[(t, state), ...]`` as returned by the evolution routines."""
        times = [t for t, _ in records]
        probs = np.array([basis_probabilities(s) for _, s in records])
        return cls.from_probabilities(times, probs)

    def __len__(self) -> int:
        return len(self.times)

    def time_average(self) -> float:
        return float(self.ms_values.mean())

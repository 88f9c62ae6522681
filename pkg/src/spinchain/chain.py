"""Disordered XX chain: parameters, disorder sampling, Hamiltonian, exact dynamics.

    H = -g_xy * sum_bonds (X_a X_b + Y_a Y_b) + sum_k h_k Z_k

with hbar = 1. Open chains have bonds (1,2)..(m-1,m); closed chains add (m,1).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import (
    ClosedChainTooSmallError,
    DimensionMismatchError,
    OddSitesForDomainWallError,
    SpinChainError,
    TooManySitesError,
)
from .seeding import derive_seed, generator
from .states import StateVector, from_bitstring

MAX_DENSE_SITES = 12
MAX_EXACT_SITES = 10


class Boundary(enum.Enum):
    OPEN = "open"
    CLOSED = "closed"


@dataclass(frozen=True)
class DisorderSpec:
    """Uniform on-site disorder on [-bound, bound]."""

    bound: float
    seed: int

    def __post_init__(self):
        if not self.bound >= 0:
            raise SpinChainError(f"disorder bound must be >= 0, got {self.bound}")


@dataclass(frozen=True)
class ChainSpec:
    num_sites: int
    g_xy: float
    fields: tuple[float, ...]
    boundary: Boundary = Boundary.OPEN

    def __post_init__(self):
        object.__setattr__(self, "fields", tuple(float(h) for h in self.fields))
        object.__setattr__(self, "boundary", Boundary(self.boundary))
        if self.num_sites < 2:
            raise SpinChainError(f"chain needs at least 2 sites, got {self.num_sites}")
        if len(self.fields) != self.num_sites:
            raise DimensionMismatchError(f"{len(self.fields)} fields for {self.num_sites} sites")
        if not np.isfinite(self.g_xy) or not np.all(np.isfinite(self.fields)):
            raise SpinChainError("coupling and fields must be finite")
        if self.boundary is Boundary.CLOSED and self.num_sites < 3:
            raise ClosedChainTooSmallError("closed chain requires at least 3 sites")

    @classmethod
    def uniform(cls, num_sites: int, g_xy: float = 1.0, h: float = 0.0, boundary=Boundary.OPEN):
        return cls(num_sites, g_xy, (h,) * num_sites, boundary)

    def bonds(self) -> list[tuple[int, int]]:
        """Bonds as 1-based site pairs; the wrap-around bond (m, 1) comes last."""
        m = self.num_sites
        out = [(k, k + 1) for k in range(1, m)]
        if self.boundary is Boundary.CLOSED:
            out.append((m, 1))
        return out


def sample_disorder(disorder: DisorderSpec, m: int) -> np.ndarray:
    if m < 1:
        raise SpinChainError(f"need m >= 1, got {m}")
    return generator(disorder.seed).uniform(-disorder.bound, disorder.bound, size=m)


def realization_seed(master_seed: int, index: int) -> int:
    """Seed for disorder realization ``index`` (see :func:`derive_seed`)."""
    return derive_seed(master_seed, index)


def _site_bits(m: int) -> np.ndarray:
    """bits[k-1, i] = value of site k in basis index i."""
    idx = np.arange(2**m)
    return np.array([(idx >> (m - k)) & 1 for k in range(1, m + 1)])


def build_hamiltonian(chain: ChainSpec) -> np.ndarray:
    """Dense real-symmetric Hamiltonian in the computational basis."""
    m = chain.num_sites
    if m > MAX_DENSE_SITES:
        raise TooManySitesError(f"dense Hamiltonian limited to {MAX_DENSE_SITES} sites, got {m}")
    dim = 2**m
    bits = _site_bits(m)
    ham = np.zeros((dim, dim))
    z = 1 - 2 * bits
    ham[np.diag_indices(dim)] = np.asarray(chain.fields) @ z
    idx = np.arange(dim)
    # X_a X_b + Y_a Y_b = 2 (|01><10| + |10><01|) on the bond: hop when bits differ.
    for a, b in chain.bonds():
        differ = bits[a - 1] != bits[b - 1]
        mask = (1 << (m - a)) | (1 << (m - b))
        src = idx[differ]
        ham[src ^ mask, src] += -2.0 * chain.g_xy
    return ham


def total_magnetization(m: int) -> np.ndarray:
    """Diagonal of sum_k Z_k."""
    return (1 - 2 * _site_bits(m)).sum(axis=0).astype(float)


class ExactPropagator:
    """e^{-iHt} via one Hermitian eigendecomposition, reused for every t."""

    def __init__(self, chain: ChainSpec):
        if chain.num_sites > MAX_EXACT_SITES:
            raise TooManySitesError(
                f"exact evolution limited to {MAX_EXACT_SITES} sites, got {chain.num_sites}"
            )
        self.chain = chain

    @cached_property
    def hamiltonian(self) -> np.ndarray:
        return build_hamiltonian(self.chain)

    @cached_property
    def _eig(self):
        return np.linalg.eigh(self.hamiltonian)

    def evolve_many(self, psi0: StateVector, times) -> np.ndarray:
        """Amplitudes at each time, shape (len(times), 2**m)."""
        if psi0.num_qubits != self.chain.num_sites:
            raise DimensionMismatchError(
                f"state has {psi0.num_qubits} qubits, chain has {self.chain.num_sites} sites"
            )
        w, v = self._eig
        coeffs = v.T @ psi0.amplitudes
        phases = np.exp(-1j * np.outer(np.asarray(times, dtype=float), w))
        return (phases * coeffs) @ v.T

    def evolve(self, psi0: StateVector, t: float) -> StateVector:
        return StateVector(psi0.num_qubits, self.evolve_many(psi0, [t])[0])

    def energy(self, amps: np.ndarray) -> np.ndarray:
        """<psi|H|psi> for one amplitude vector or a stack of them."""
        amps = np.atleast_2d(amps)
        return np.einsum("ti,ij,tj->t", amps.conj(), self.hamiltonian, amps).real


def exact_evolve(chain: ChainSpec, psi0: StateVector, t: float) -> StateVector:
    if not np.isfinite(t):
        raise SpinChainError(f"time must be finite, got {t}")
    return ExactPropagator(chain).evolve(psi0, t)


def initial_state(kind: str, m: int, bits: str | None = None) -> StateVector:
    """``"neel"`` (site 1 down: 1010...), ``"domain_wall"`` (first half down), or ``"custom"``."""
    kind = kind.lower()
    if m < 1:
        raise SpinChainError(f"need m >= 1, got {m}")
    if kind == "neel":
        return from_bitstring("".join("1" if k % 2 else "0" for k in range(1, m + 1)))
    if kind == "domain_wall":
        if m % 2:
            raise OddSitesForDomainWallError(f"domain wall needs an even site count, got {m}")
        return from_bitstring("1" * (m // 2) + "0" * (m // 2))
    if kind in ("custom", "bitstring"):
        if bits is None or len(bits) != m:
            raise SpinChainError(f"custom initial state needs a {m}-character bitstring")
        return from_bitstring(bits)
    raise SpinChainError(f"unknown initial state {kind!r}")

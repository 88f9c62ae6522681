"""First-order Trotter circuits for the XX chain.

One step applies, in circuit order, the odd-bond layer, the even-bond layer
and the field layer, i.e. the operator product O * Q_even * Q_odd. A closed
chain with an odd number of sites gets a third layer holding only the
wrap-around bond, since (m, 1) touches both of the other layers. Each bond
block implements exp(i theta (XX + YY)) with theta = g_xy * dt, synthesized
either with two CNOTs (magic-basis sandwich) or four (XX and YY exponentials
built separately).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .chain import Boundary, ChainSpec
from .errors import InvalidSitePairError, SpinChainError
from .gates import (
    MAGIC_MATRIX,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    Circuit,
    GateKind,
    op,
    run_ops,
)
from .states import StateVector

XX = np.kron(PAULI_X, PAULI_X)
YY = np.kron(PAULI_Y, PAULI_Y)
ZZ = np.kron(PAULI_Z, PAULI_Z)


class Scheme(enum.Enum):
    NAIVE4 = "naive4"
    OPTIMIZED2 = "optimized2"

    @property
    def cnots_per_block(self) -> int:
        return 4 if self is Scheme.NAIVE4 else 2


@dataclass(frozen=True)
class TrotterPlan:
    dt: float
    n_steps: int
    scheme: Scheme = Scheme.OPTIMIZED2

    def __post_init__(self):
        object.__setattr__(self, "scheme", Scheme(self.scheme))
        if not (np.isfinite(self.dt) and self.dt > 0):
            raise SpinChainError(f"dt must be positive, got {self.dt}")
        if self.n_steps < 1:
            raise SpinChainError(f"n_steps must be >= 1, got {self.n_steps}")

    @property
    def total_time(self) -> float:
        return self.n_steps * self.dt


def xxyy_block_matrix(theta: float) -> np.ndarray:
    """exp(i theta (XX + YY)) by dense matrix exponential."""
    return expm(1j * theta * (XX + YY))


def _check_pair(sites, num_qubits: int | None):
    a, b = (int(s) for s in sites)
    if a == b or min(a, b) < 1:
        raise InvalidSitePairError(f"invalid site pair {sites}")
    if num_qubits is not None and max(a, b) > num_qubits:
        raise InvalidSitePairError(f"site pair {sites} outside a {num_qubits}-qubit register")
    return a, b


def magic_circuit(sites=(1, 2), num_qubits: int | None = None, dagger: bool = False) -> Circuit:
    """Gate-level magic basis change: M = RCNOT (S x H S) up to global phase."""
    a, b = _check_pair(sites, num_qubits)
    n = num_qubits or max(a, b)
    s = np.pi / 2
    if dagger:
        ops = [op("RCNOT", a, b), op("PHASE", a, angle=-s), op("H", b), op("PHASE", b, angle=-s)]
    else:
        ops = [op("PHASE", a, angle=s), op("PHASE", b, angle=s), op("H", b), op("RCNOT", a, b)]
    return Circuit(n, ops)


def magic_sandwich_circuit(lam: float, phi: float, sites=(1, 2), num_qubits: int | None = None) -> Circuit:
    """Unreduced circuit for exp(i(lam XX + phi ZZ)) = M (e^{i phi Z} x e^{i lam Z}) M^dagger."""
    a, b = _check_pair(sites, num_qubits)
    n = num_qubits or max(a, b)
    middle = Circuit(n, [op("RZ", a, angle=-2 * phi), op("RZ", b, angle=-2 * lam)])
    return magic_circuit((a, b), n, dagger=True) + middle + magic_circuit((a, b), n)


def xxyy_block_circuit(theta: float, sites=(1, 2), num_qubits: int | None = None) -> Circuit:
    """Two-CNOT circuit for exp(i theta (XX + YY)) on ``sites``.

    Rx(pi/2) on both qubits turns YY into ZZ, leaving the XX + ZZ sandwich of
    :func:`magic_sandwich_circuit`. Inside the sandwich the phase gates commute
    with Rz and H Rz H = Rx, which leaves one Rz and one Rx between the RCNOTs.
    """
    a, b = _check_pair(sites, num_qubits)
    n = num_qubits or max(a, b)
    q = np.pi / 2
    return Circuit(n, [
        op("RX", a, angle=q), op("RX", b, angle=q),
        op("RCNOT", a, b),
        op("RZ", a, angle=-2 * theta), op("RX", b, angle=-2 * theta),
        op("RCNOT", a, b),
        op("RX", a, angle=-q), op("RX", b, angle=-q),
    ])


def _zz_exponential(theta, a, b):
    # exp(i theta Z_a Z_b) = CNOT Rz_b(-2 theta) CNOT
    return [op("CNOT", a, b), op("RZ", b, angle=-2 * theta), op("CNOT", a, b)]


def xxyy_block_circuit_naive(theta: float, sites=(1, 2), num_qubits: int | None = None) -> Circuit:
    """Four-CNOT circuit: exp(i theta XX) then exp(i theta YY), each a ZZ exponential in a rotated basis."""
    a, b = _check_pair(sites, num_qubits)
    n = num_qubits or max(a, b)
    q = np.pi / 2
    xx = [op("H", a), op("H", b), *_zz_exponential(theta, a, b), op("H", a), op("H", b)]
    yy = [
        op("RX", a, angle=q), op("RX", b, angle=q),
        *_zz_exponential(theta, a, b),
        op("RX", a, angle=-q), op("RX", b, angle=-q),
    ]
    return Circuit(n, xx + yy)


_BLOCK_SYNTH = {
    Scheme.OPTIMIZED2: xxyy_block_circuit,
    Scheme.NAIVE4: xxyy_block_circuit_naive,
}


def field_layer(fields, dt: float) -> Circuit:
    """exp(-i h_k Z_k dt) on every site, i.e. Rz(2 h_k dt)."""
    fields = [float(h) for h in fields]
    return Circuit(len(fields), [op("RZ", k, angle=2 * h * dt) for k, h in enumerate(fields, 1)])


def bond_layers(chain: ChainSpec) -> list[list[tuple[int, int]]]:
    """Site-disjoint bond layers in circuit order: [odd, even] or [odd, even, wrap].

    Bond (k, k+1) is odd or even by k. The wrap-around bond (m, 1) joins the
    even layer for even m and forms its own layer for odd m.
    """
    m = chain.num_sites
    odd = [(k, k + 1) for k in range(1, m, 2)]
    even = [(k, k + 1) for k in range(2, m, 2)]
    if chain.boundary is Boundary.OPEN:
        return [odd, even]
    if m % 2 == 0:
        return [odd, even + [(m, 1)]]
    return [odd, even, [(m, 1)]]


def trotter_step_circuit(chain: ChainSpec, plan: TrotterPlan, angle_offset: float = 0.0) -> Circuit:
    """One Trotter step. ``angle_offset`` perturbs the bond angle (negative controls only)."""
    m = chain.num_sites
    theta = chain.g_xy * plan.dt + angle_offset
    synth = _BLOCK_SYNTH[plan.scheme]
    circ = Circuit(m)
    for layer in bond_layers(chain):
        for bond in layer:
            circ = circ + synth(theta, bond, m)
    return circ + field_layer(chain.fields, plan.dt)


def trotter_evolve(
    chain: ChainSpec,
    psi0: StateVector,
    plan: TrotterPlan,
    record_every: int = 1,
    n_steps: int | None = None,
) -> list[tuple[float, StateVector]]:
    """Repeat the step circuit, recording states at steps 0, r, 2r, ...

    ``n_steps`` overrides ``plan.n_steps`` (0 records the initial state only).
    """
    if record_every < 1:
        raise SpinChainError(f"record_every must be >= 1, got {record_every}")
    steps = plan.n_steps if n_steps is None else int(n_steps)
    ops = trotter_step_circuit(chain, plan).ops
    m = chain.num_sites
    psi = psi0.amplitudes
    out = [(0.0, psi0)]
    for j in range(1, steps + 1):
        psi = run_ops(psi, ops, m)
        if j % record_every == 0:
            out.append((j * plan.dt, StateVector(m, psi)))
    return out


def verify_magic_identity(lam: float, phi: float) -> float:
    """Max deviation between M^dagger N(lam, 0, phi) M and e^{i phi Z} x e^{i lam Z}."""
    n = expm(1j * (lam * XX + phi * ZZ))
    lhs = MAGIC_MATRIX.conj().T @ n @ MAGIC_MATRIX
    rhs = np.kron(np.diag(np.exp([1j * phi, -1j * phi])), np.diag(np.exp([1j * lam, -1j * lam])))
    return float(np.abs(lhs - rhs).max())


def cnot_count(circuit: Circuit) -> int:
    return sum(1 for g in circuit.ops if g.kind in (GateKind.CNOT, GateKind.RCNOT))

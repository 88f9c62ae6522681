"""Circuit-level simulation of disordered XX spin chains."""

from .chain import (
    Boundary, ChainSpec, DisorderSpec, ExactPropagator, build_hamiltonian, exact_evolve,
    initial_state, sample_disorder,
)
from .gates import (
    Circuit, GateKind, GateOp, apply_circuit, apply_gate, circuit_unitary, gate_matrix, op,
    unitaries_equal_up_to_phase,
)
from .noise import Density, Ideal, NoiseModel, Trajectories, deviation_series, noisy_execute
from .observables import (
    ObservableSeries, basis_probabilities, marginal_probability, ms_from_counts, sample_shots,
    staggered_magnetization,
)
from .states import (
    DensityMatrix, StateVector, bloch_coords, from_amplitudes, from_bitstring, inner_product,
    to_density,
)
from .trotter import Scheme, TrotterPlan, cnot_count, trotter_evolve, trotter_step_circuit

__version__ = "0.1.0"

__all__ = [
    "Boundary", "ChainSpec", "DisorderSpec", "ExactPropagator", "build_hamiltonian",
    "exact_evolve", "initial_state", "sample_disorder",
    "Circuit", "GateKind", "GateOp", "apply_circuit", "apply_gate", "circuit_unitary",
    "gate_matrix", "op", "unitaries_equal_up_to_phase",
    "Density", "Ideal", "NoiseModel", "Trajectories", "deviation_series", "noisy_execute",
    "ObservableSeries", "basis_probabilities", "marginal_probability", "ms_from_counts",
    "sample_shots", "staggered_magnetization",
    "DensityMatrix", "StateVector", "bloch_coords", "from_amplitudes", "from_bitstring",
    "inner_product", "to_density",
    "Scheme", "TrotterPlan", "cnot_count", "trotter_evolve", "trotter_step_circuit",
]

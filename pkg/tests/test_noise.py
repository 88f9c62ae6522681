import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from spinchain import noise as noise_mod
from spinchain.chain import ChainSpec, initial_state
from spinchain.errors import BadProbabilityError, GridMismatchError, TooManyQubitsError
from spinchain.gates import Circuit, op
from spinchain.noise import (
    Density,
    Ideal,
    NoiseModel,
    Trajectories,
    apply_depolarizing,
    deviation_series,
    noisy_execute,
    noisy_series,
    pauli_strings,
)
from spinchain.observables import ObservableSeries
from spinchain.states import DensityMatrix, from_amplitudes, from_bitstring, to_density
from spinchain.trotter import Scheme, TrotterPlan, trotter_step_circuit

PAULIS = [oracles.I2, oracles.X, oracles.Y, oracles.Z]


def _random_density(rng, m):
    a = rng.normal(size=(2**m, 2**m)) + 1j * rng.normal(size=(2**m, 2**m))
    rho = a @ a.conj().T
    return DensityMatrix(m, rho / np.trace(rho))


def _depolarizing_oracle(rho, sites, p, m):
    """(1-p) rho + p/(4^k-1) sum over non-identity Pauli strings, built by Kronecker products."""
    out = (1 - p) * rho
    strings = []
    for combo in np.ndindex(*(4,) * len(sites)):
        if not any(combo):
            continue
        full = [oracles.I2] * m
        for s, c in zip(sites, combo):
            full[s - 1] = PAULIS[c]
        mat = full[0]
        for f in full[1:]:
            mat = np.kron(mat, f)
        strings.append(mat)
    for s in strings:
        out = out + p / len(strings) * s @ rho @ s.conj().T
    return out


def test_pauli_strings():
    assert len(pauli_strings(1)) == 3
    assert len(pauli_strings(2)) == 15


def test_depolarizing_examples():
    rho = to_density(from_bitstring("0"))
    np.testing.assert_array_equal(apply_depolarizing(rho, [1], 0.0).elements, rho.elements)
    np.testing.assert_allclose(apply_depolarizing(rho, [1], 1.0).elements, np.diag([1 / 3, 2 / 3]), atol=1e-15)
    with pytest.raises(BadProbabilityError):
        apply_depolarizing(rho, [1], 1.5)
    with pytest.raises(TooManyQubitsError):
        apply_depolarizing(to_density(from_bitstring("0" * 7)), [1], 0.1)


@pytest.mark.parametrize("sites", [[1], [3], [1, 2], [3, 1]])
def test_depolarizing_matches_kronecker_oracle(sites):
    rng = np.random.default_rng(len(sites) * 10 + sites[0])
    rho = _random_density(rng, 3)
    out = apply_depolarizing(rho, sites, 0.27)
    np.testing.assert_allclose(out.elements, _depolarizing_oracle(rho.elements, sites, 0.27, 3), atol=1e-13)


@settings(max_examples=40, deadline=None)
@given(st.floats(0, 1), st.integers(0, 2**32 - 1), st.sampled_from([[1], [2], [1, 2], [2, 3]]))
def test_channel_preserves_trace_and_hermiticity(p, seed, sites):
    rho = _random_density(np.random.default_rng(seed), 3)
    out = apply_depolarizing(rho, sites, p).elements
    assert abs(np.trace(out) - 1) < 1e-12
    assert np.abs(out - out.conj().T).max() < 1e-12


def test_zero_noise_all_modes_match_ideal():
    circ = trotter_step_circuit(ChainSpec(3, 1.0, (0.2, -0.4, 0.9)), TrotterPlan(0.2, 1)).repeat(3)
    psi = initial_state("custom", 3, "101")
    ideal = noisy_execute(circ, psi, NoiseModel(0.0), Ideal()).elements
    for mode in (Density(), Trajectories(50, seed=1)):
        np.testing.assert_allclose(noisy_execute(circ, psi, NoiseModel(0.0), mode).elements, ideal, atol=1e-9)
    # Ideal ignores the noise model entirely
    np.testing.assert_allclose(noisy_execute(circ, psi, NoiseModel(0.3), Ideal()).elements, ideal, atol=1e-12)


def test_density_mode_single_cnot_by_hand():
    psi = from_amplitudes([0, 0, 1, 0])
    out = noisy_execute(Circuit(2, [op("CNOT", 1, 2)]), psi, NoiseModel(0.15), Density()).elements
    ref = _depolarizing_oracle(np.outer(oracles.ket("11"), oracles.ket("11")), [1, 2], 0.15, 2)
    np.testing.assert_allclose(out, ref, atol=1e-14)


def test_trajectories_deterministic_and_chunk_independent(monkeypatch):
    circ = Circuit(2, [op("H", 1), op("CNOT", 1, 2), op("RY", 2, angle=0.3), op("CNOT", 2, 1)])
    psi = from_bitstring("00")
    noise = NoiseModel(0.2, 0.05)
    a = noisy_execute(circ, psi, noise, Trajectories(300, seed=4)).elements
    b = noisy_execute(circ, psi, noise, Trajectories(300, seed=4)).elements
    np.testing.assert_array_equal(a, b)
    monkeypatch.setattr(noise_mod, "_CHUNK_AMPLITUDES", 4 * 7)
    c = noisy_execute(circ, psi, noise, Trajectories(300, seed=4)).elements
    np.testing.assert_allclose(a, c, atol=1e-12)
    d = noisy_execute(circ, psi, noise, Trajectories(300, seed=5)).elements
    assert not np.allclose(a, d)


def test_trajectories_approach_density_mode():
    circ = Circuit(2, [op("H", 1), op("CNOT", 1, 2)])
    psi = from_bitstring("00")
    rho = noisy_execute(circ, psi, NoiseModel(0.1), Density())
    traj = noisy_execute(circ, psi, NoiseModel(0.1), Trajectories(20_000, seed=2))
    assert np.abs(np.diag(rho.elements) - np.diag(traj.elements)).max() < 0.02
    assert traj.is_valid(1e-9)


def test_mode_size_limits():
    psi = from_bitstring("0" * 7)
    with pytest.raises(TooManyQubitsError):
        noisy_execute(Circuit(7), psi, NoiseModel(), Density())
    with pytest.raises(TooManyQubitsError):
        noisy_execute(Circuit(11), from_bitstring("0" * 11), NoiseModel(), Trajectories(1))


def _protocol(scheme, p, mode=Density(), steps=12, dt=0.1):
    chain = ChainSpec.uniform(2)
    step = trotter_step_circuit(chain, TrotterPlan(dt, steps, scheme))
    return noisy_series(step, initial_state("neel", 2), steps, dt, NoiseModel(p), mode)


def test_noise_contracts_staggered_magnetization():
    ideal = _protocol(Scheme.OPTIMIZED2, 0.0, Ideal())
    for scheme in Scheme:
        noisy = _protocol(scheme, 0.01)
        assert np.abs(noisy.ms_values).mean() <= np.abs(ideal.ms_values).mean() + 1e-9
        np.testing.assert_allclose(noisy.probabilities.sum(axis=1), 1, atol=1e-9)


@pytest.mark.parametrize("p", [0.005, 0.01, 0.02])
def test_more_cnots_deviate_more(p):
    ideal = _protocol(Scheme.OPTIMIZED2, 0.0, Ideal())
    naive = deviation_series(ideal, _protocol(Scheme.NAIVE4, p)).mean()
    opt = deviation_series(ideal, _protocol(Scheme.OPTIMIZED2, p)).mean()
    assert naive > opt


def test_deviation_series():
    ideal = _protocol(Scheme.OPTIMIZED2, 0.0, Ideal())
    np.testing.assert_array_equal(deviation_series(ideal, ideal), np.zeros(13))
    zero_noise = _protocol(Scheme.NAIVE4, 0.0)
    assert deviation_series(ideal, zero_noise).max() < 1e-9
    short = ObservableSeries(ideal.times[:5], ideal.ms_values[:5], ideal.probabilities[:5])
    with pytest.raises(GridMismatchError):
        deviation_series(ideal, short)

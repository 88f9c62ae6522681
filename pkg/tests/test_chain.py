import numpy as np
import pytest

import oracles
from spinchain.chain import (
    Boundary,
    ChainSpec,
    DisorderSpec,
    ExactPropagator,
    build_hamiltonian,
    exact_evolve,
    initial_state,
    sample_disorder,
    total_magnetization,
)
from spinchain.errors import (
    ClosedChainTooSmallError,
    OddSitesForDomainWallError,
    TooManySitesError,
)
from spinchain.observables import staggered_magnetization
from spinchain.states import from_amplitudes, from_bitstring


def test_disorder_sampling():
    np.testing.assert_array_equal(sample_disorder(DisorderSpec(0.0, 99), 5), np.zeros(5))
    vals = sample_disorder(DisorderSpec(1.0, 42), 4)
    assert vals.shape == (4,) and np.all(np.abs(vals) <= 1)
    # PCG64 stream, frozen once
    np.testing.assert_array_equal(
        vals, [0.5479120971119267, -0.12224312049589536, 0.7171958398227649, 0.3947360581187278]
    )
    a = sample_disorder(DisorderSpec(0.5, 7), 4)
    b = sample_disorder(DisorderSpec(0.5, 7), 4)
    np.testing.assert_array_equal(a, b)
    with pytest.raises(ValueError):
        DisorderSpec(-1.0, 0)


def test_two_site_hamiltonian_by_hand():
    h = build_hamiltonian(ChainSpec(2, 1.0, (0.0, 0.0)))
    expected = np.zeros((4, 4))
    expected[1, 2] = expected[2, 1] = -2
    np.testing.assert_array_equal(h, expected)


def test_field_only_hamiltonian():
    a, b = 0.3, -1.1
    h = build_hamiltonian(ChainSpec(2, 0.0, (a, b)))
    np.testing.assert_allclose(h, np.diag([a + b, a - b, -a + b, -a - b]))


def test_closed_minus_open_is_wraparound_bond():
    closed = build_hamiltonian(ChainSpec.uniform(3, boundary=Boundary.CLOSED))
    open_ = build_hamiltonian(ChainSpec.uniform(3))
    wrap = -(oracles.site_op(oracles.X, 3, 3) @ oracles.site_op(oracles.X, 1, 3)
             + oracles.site_op(oracles.Y, 3, 3) @ oracles.site_op(oracles.Y, 1, 3))
    np.testing.assert_allclose(closed - open_, wrap.real, atol=1e-14)
    # sites 1 and 3 differ in |0x1> and |1x0>: 2 blocks of hopping
    assert np.count_nonzero(closed - open_) == 4


@pytest.mark.parametrize("m, closed", [(2, False), (3, True), (4, False), (4, True), (5, True)])
def test_hamiltonian_matches_kronecker_oracle(m, closed):
    rng = np.random.default_rng(m)
    fields = rng.uniform(-1, 1, m)
    chain = ChainSpec(m, 0.7, tuple(fields), Boundary.CLOSED if closed else Boundary.OPEN)
    h = build_hamiltonian(chain)
    ref = oracles.hamiltonian(m, 0.7, fields, closed)
    assert np.abs(ref.imag).max() < 1e-14
    np.testing.assert_allclose(h, ref.real, atol=1e-13)
    np.testing.assert_array_equal(h, h.T)


def test_chain_validation():
    with pytest.raises(ClosedChainTooSmallError):
        ChainSpec(2, 1.0, (0, 0), Boundary.CLOSED)
    with pytest.raises(ValueError):
        ChainSpec(3, 1.0, (0, 0))
    with pytest.raises(TooManySitesError):
        build_hamiltonian(ChainSpec.uniform(13))


def test_magnetization_commutes_with_hamiltonian():
    rng = np.random.default_rng(1)
    chain = ChainSpec(5, 1.0, tuple(rng.uniform(-2, 2, 5)), Boundary.CLOSED)
    h = build_hamiltonian(chain)
    mz = np.diag(total_magnetization(5))
    assert np.abs(h @ mz - mz @ h).max() < 1e-12


def test_exact_evolution_two_site_analytic():
    chain = ChainSpec.uniform(2)
    psi0 = from_bitstring("10")
    np.testing.assert_allclose(exact_evolve(chain, psi0, 0.0).amplitudes, psi0.amplitudes, atol=1e-12)
    quarter = exact_evolve(chain, psi0, np.pi / 8)
    p = np.abs(quarter.amplitudes) ** 2
    np.testing.assert_allclose(p, [0, 0.5, 0.5, 0], atol=1e-12)
    assert abs(staggered_magnetization(quarter)) < 1e-12
    flipped = exact_evolve(chain, psi0, np.pi / 4)
    assert abs(abs(flipped.amplitudes[1]) - 1) < 1e-12
    assert staggered_magnetization(flipped) == pytest.approx(-1, abs=1e-12)
    for t in np.linspace(0, 3, 13):
        assert staggered_magnetization(exact_evolve(chain, psi0, t)) == pytest.approx(np.cos(4 * t), abs=1e-12)


def test_exact_evolution_matches_expm_oracle():
    rng = np.random.default_rng(2)
    fields = rng.uniform(-1, 1, 4)
    chain = ChainSpec(4, 1.0, tuple(fields), Boundary.CLOSED)
    psi = from_amplitudes(oracles.random_state(rng, 4))
    ref = oracles.evolve(oracles.hamiltonian(4, 1.0, fields, True), psi.amplitudes, 0.83)
    np.testing.assert_allclose(exact_evolve(chain, psi, 0.83).amplitudes, ref, atol=1e-10)


def test_group_property_energy_and_sector():
    rng = np.random.default_rng(4)
    chain = ChainSpec(4, 1.0, tuple(rng.uniform(-1, 1, 4)))
    prop = ExactPropagator(chain)
    psi = initial_state("neel", 4)
    t1, t2 = 0.4, 1.3
    direct = prop.evolve(psi, t1 + t2)
    composed = prop.evolve(prop.evolve(psi, t1), t2)
    np.testing.assert_allclose(direct.amplitudes, composed.amplitudes, atol=1e-9)
    amps = prop.evolve_many(psi, np.linspace(0, 10, 51))
    energy = prop.energy(amps)
    assert np.ptp(energy) < 1e-9
    sector = total_magnetization(4) == 0
    leak = (np.abs(amps[:, ~sector]) ** 2).sum(axis=1)
    assert leak.max() < 1e-9


def test_initial_states():
    np.testing.assert_array_equal(initial_state("neel", 4).amplitudes, from_bitstring("1010").amplitudes)
    np.testing.assert_array_equal(initial_state("neel", 2).amplitudes, from_bitstring("10").amplitudes)
    np.testing.assert_array_equal(initial_state("domain_wall", 6).amplitudes, from_bitstring("111000").amplitudes)
    np.testing.assert_array_equal(initial_state("custom", 3, "011").amplitudes, from_bitstring("011").amplitudes)
    with pytest.raises(OddSitesForDomainWallError):
        initial_state("domain_wall", 5)

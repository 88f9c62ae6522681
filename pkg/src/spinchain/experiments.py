"""Experiment jobs behind the CLI: evolve, sweep, compare-schemes, verify.

Each job returns a :class:`Table` (header plus rows); :func:`write_csv`
serializes it with shortest round-trip float formatting so identical configs
give byte-identical files.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, replace

import numpy as np
from scipy.linalg import expm

from .chain import (
    Boundary,
    ChainSpec,
    DisorderSpec,
    ExactPropagator,
    initial_state,
    realization_seed,
    sample_disorder,
)
from .config import NAMED_STATES, ExperimentConfig
from .errors import ConfigError
from .gates import (
    CNOT_MATRIX,
    HADAMARD,
    RCNOT_MATRIX,
    MAGIC_MATRIX,
    Circuit,
    GateKind,
    circuit_unitary,
    gate_matrix,
    op,
    phase_distance,
)
from .noise import Density, Ideal, NoiseModel, Trajectories, noisy_series
from .observables import (
    ObservableSeries,
    bitstrings,
    ms_from_counts,
    sample_probabilities,
)
from .seeding import derive_seed, generator
from .trotter import (
    XX,
    ZZ,
    Scheme,
    TrotterPlan,
    cnot_count,
    magic_circuit,
    magic_sandwich_circuit,
    trotter_step_circuit,
    verify_magic_identity,
    xxyy_block_circuit,
    xxyy_block_circuit_naive,
    xxyy_block_matrix,
)
from .states import StateVector

DEFAULT_STEPS = 200
COMPARE_STEPS = 12
PROBABILITY_COLUMN_LIMIT = 4
SCHEME_NAMES = {"naive4": Scheme.NAIVE4, "optimized2": Scheme.OPTIMIZED2}


@dataclass
class Table:
    header: list[str]
    rows: list[list]

    def column(self, name: str) -> np.ndarray:
        j = self.header.index(name)
        return np.array([r[j] for r in self.rows if not isinstance(r[0], str)], dtype=float)


def _fmt(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def write_csv(table: Table, stream=None) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.header)
    for row in table.rows:
        writer.writerow([_fmt(v) for v in row])
    text = buf.getvalue()
    if stream is not None:
        stream.write(text)
    return text


def _steps(config: ExperimentConfig, default: int) -> int:
    return config.n_steps if config.n_steps is not None else default


def _initial(config: ExperimentConfig) -> StateVector:
    if config.initial_state in NAMED_STATES:
        return initial_state(config.initial_state, config.sites)
    return initial_state("custom", config.sites, config.initial_state)


def realization_count(config: ExperimentConfig) -> int:
    """Realizations actually run: one when nothing is random."""
    if config.explicit_fields is not None or config.disorder_bound == 0:
        return 1
    return config.realizations


def realization_chain(config: ExperimentConfig, index: int) -> ChainSpec:
    if config.explicit_fields is not None:
        fields = config.explicit_fields
    else:
        disorder = DisorderSpec(config.disorder_bound, realization_seed(config.seed, index))
        fields = sample_disorder(disorder, config.sites)
    return ChainSpec(config.sites, config.g_xy, tuple(fields), Boundary(config.boundary))


def _noise(config: ExperimentConfig) -> NoiseModel:
    return NoiseModel(config.noise.p2, config.noise.p1)


def _noisy_mode(config: ExperimentConfig, index: int):
    traj = Trajectories(config.trajectories, derive_seed(config.seed, index, 1))
    if config.mode == "trajectories":
        return traj
    if config.mode == "density" or config.sites <= 6:
        return Density()
    return traj


def _plan(config: ExperimentConfig, n_steps: int, scheme: str | None = None) -> TrotterPlan:
    return TrotterPlan(config.dt, n_steps, SCHEME_NAMES[scheme or config.scheme])


def _trotter_series(chain, psi0, plan) -> ObservableSeries:
    step = trotter_step_circuit(chain, plan)
    return noisy_series(step, psi0, plan.n_steps, plan.dt, NoiseModel(0.0, 0.0), Ideal())


def _exact_series(chain, psi0, times) -> ObservableSeries:
    amps = ExactPropagator(chain).evolve_many(psi0, times)
    return ObservableSeries.from_probabilities(times, np.abs(amps) ** 2)


def _primary_series(config, chain, psi0, plan, index) -> ObservableSeries:
    """The series the config's mode asks for: exact, noiseless Trotter, or noisy Trotter."""
    if config.mode == "exact":
        return _exact_series(chain, psi0, np.arange(plan.n_steps + 1) * plan.dt)
    if config.mode == "ideal":
        return _trotter_series(chain, psi0, plan)
    step = trotter_step_circuit(chain, plan)
    return noisy_series(step, psi0, plan.n_steps, plan.dt, _noise(config), _noisy_mode(config, index))


def _shot_ms(config, series: ObservableSeries, index: int) -> np.ndarray:
    return np.array([
        ms_from_counts(sample_probabilities(p, config.shots, derive_seed(config.seed, index, 2, j)))
        for j, p in enumerate(series.probabilities)
    ])


def run_evolve(config: ExperimentConfig) -> Table:
    """M_s(t) from Trotter circuits and the exact oracle, disorder-averaged.

    Probability columns follow the config's mode (exact state for ``exact``,
    noiseless Trotter for ``ideal``, noisy Trotter otherwise).
    """
    n_steps = _steps(config, DEFAULT_STEPS)
    plan = _plan(config, n_steps)
    psi0 = _initial(config)
    times = np.arange(n_steps + 1) * config.dt
    noisy_wanted = config.mode in ("density", "trajectories")
    n_real = realization_count(config)

    ms_trotter = np.zeros(n_steps + 1)
    ms_exact = np.zeros(n_steps + 1)
    ms_noisy = np.zeros(n_steps + 1)
    ms_shots = np.zeros(n_steps + 1)
    probs = np.zeros((n_steps + 1, 2**config.sites))
    for r in range(n_real):
        chain = realization_chain(config, r)
        trotter = _trotter_series(chain, psi0, plan)
        exact = _exact_series(chain, psi0, times)
        ms_trotter += trotter.ms_values
        ms_exact += exact.ms_values
        if config.mode == "exact":
            primary = exact
        elif config.mode == "ideal":
            primary = trotter
        else:
            primary = _primary_series(config, chain, psi0, plan, r)
            ms_noisy += primary.ms_values
        probs += primary.probabilities
        if config.shots:
            ms_shots += _shot_ms(config, primary, r)

    header = ["t", "ms_trotter", "ms_exact"]
    cols = [times, ms_trotter / n_real, ms_exact / n_real]
    if noisy_wanted:
        header.append("ms_noisy")
        cols.append(ms_noisy / n_real)
    if config.shots:
        header.append("ms_shots")
        cols.append(ms_shots / n_real)
    if config.sites <= PROBABILITY_COLUMN_LIMIT:
        header += [f"p_{b}" for b in bitstrings(config.sites)]
        cols += list((probs / n_real).T)
    rows = [list(r) for r in zip(*cols)]
    return Table(header, rows)


def sweep_column(h: float) -> str:
    return f"ms_h={h!r}"


def run_disorder_sweep(config: ExperimentConfig, h_values=None) -> Table:
    """One disorder-averaged M_s column per disorder bound, plus a ``mean`` row."""
    h_values = tuple(h_values if h_values is not None else (config.h_values or ()))
    if not h_values:
        raise ConfigError("h_values: at least one disorder bound is required")
    if config.explicit_fields is not None:
        raise ConfigError("explicit_fields: cannot be combined with a disorder sweep")
    n_steps = _steps(config, DEFAULT_STEPS)
    plan = _plan(config, n_steps)
    psi0 = _initial(config)
    times = np.arange(n_steps + 1) * config.dt
    columns = []
    for h in h_values:
        cfg = replace(config, disorder_bound=float(h), h_values=None)
        n_real = realization_count(cfg)
        acc = np.zeros(n_steps + 1)
        for r in range(n_real):
            acc += _primary_series(cfg, realization_chain(cfg, r), psi0, plan, r).ms_values
        columns.append(acc / n_real)
    header = ["t"] + [sweep_column(h) for h in h_values]
    rows = [[t, *(c[j] for c in columns)] for j, t in enumerate(times)]
    rows.append(["mean", *(float(c.mean()) for c in columns)])
    return Table(header, rows)


def run_compare_schemes(config: ExperimentConfig) -> Table:
    """Noiseless Trotter M_s against both noisy schemes, with cumulative CNOT counts."""
    n_steps = _steps(config, COMPARE_STEPS)
    psi0 = _initial(config)
    noise = _noise(config)
    times = np.arange(n_steps + 1) * config.dt
    n_real = realization_count(config)
    ideal = np.zeros(n_steps + 1)
    noisy = {"naive4": np.zeros(n_steps + 1), "optimized2": np.zeros(n_steps + 1)}
    per_step = {}
    for r in range(n_real):
        chain = realization_chain(config, r)
        ideal += _trotter_series(chain, psi0, _plan(config, n_steps, "optimized2")).ms_values
        for name in noisy:
            plan = _plan(config, n_steps, name)
            step = trotter_step_circuit(chain, plan)
            per_step[name] = cnot_count(step)
            series = noisy_series(step, psi0, n_steps, config.dt, noise, _noisy_mode(config, r))
            noisy[name] += series.ms_values
    header = ["t", "ms_ideal", "ms_naive4_noisy", "ms_opt2_noisy", "cnots_naive4", "cnots_opt2"]
    rows = [
        [t, ideal[j] / n_real, noisy["naive4"][j] / n_real, noisy["optimized2"][j] / n_real,
         j * per_step["naive4"], j * per_step["optimized2"]]
        for j, t in enumerate(times)
    ]
    return Table(header, rows)


@dataclass
class Check:
    name: str
    max_deviation: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.max_deviation < self.tolerance)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name:<40s} max_dev={self.max_deviation:.3e}  tol={self.tolerance:.0e}"


def verification_checks(perturb: float = 0.0, seed: int = 2024) -> list[Check]:
    """Identity suite for the circuit constructions. ``perturb`` shifts every synthesized angle."""
    rng = generator(seed)
    thetas = np.linspace(-np.pi, np.pi, 100)
    checks = []

    pairs = rng.uniform(-np.pi, np.pi, size=(100, 2))
    checks.append(Check(
        "magic-basis diagonalization of XX+ZZ",
        max(verify_magic_identity(lam, phi) for lam, phi in pairs), 1e-12,
    ))
    checks.append(Check(
        "magic sandwich circuit vs exp(i(lXX+pZZ))",
        max(phase_distance(circuit_unitary(magic_sandwich_circuit(lam + perturb, phi)),
                           expm(1j * (lam * XX + phi * ZZ))) for lam, phi in pairs[:20]),
        1e-10,
    ))
    checks.append(Check(
        "magic circuit vs magic matrix",
        max(phase_distance(circuit_unitary(magic_circuit()), MAGIC_MATRIX),
            phase_distance(circuit_unitary(magic_circuit(dagger=True)), MAGIC_MATRIX.conj().T)),
        1e-12,
    ))
    for label, synth, cnots in (
        ("2-CNOT block vs exp(it(XX+YY))", xxyy_block_circuit, 2),
        ("4-CNOT block vs exp(it(XX+YY))", xxyy_block_circuit_naive, 4),
    ):
        circuits = [synth(t + perturb) for t in thetas]
        dev = max(phase_distance(circuit_unitary(c), xxyy_block_matrix(t)) for c, t in zip(circuits, thetas))
        checks.append(Check(label, dev, 1e-10))
        wrong = sum(cnot_count(c) != cnots for c in circuits)
        checks.append(Check(f"{label.split()[0]} block CNOT count == {cnots}", float(wrong), 0.5))

    hh = np.kron(HADAMARD, HADAMARD)
    reversed_cnot = circuit_unitary(Circuit(2, [op("CNOT", 2, 1)]))
    checks.append(Check(
        "CNOT reversal: (HxH) CNOT (HxH) = RCNOT",
        max(np.abs(hh @ CNOT_MATRIX @ hh - RCNOT_MATRIX).max(), np.abs(reversed_cnot - RCNOT_MATRIX).max()),
        1e-12,
    ))
    angles = rng.uniform(-np.pi, np.pi, size=(100, 2))
    comm = max(
        np.abs(gate_matrix(GateKind.RZ, a) @ gate_matrix(GateKind.PHASE, b)
               - gate_matrix(GateKind.PHASE, b) @ gate_matrix(GateKind.RZ, a)).max()
        for a, b in angles
    )
    checks.append(Check("[S(l), Rz(p)] = 0", comm, 1e-12))
    hrh = max(
        np.abs(HADAMARD @ gate_matrix(GateKind.RZ, a) @ HADAMARD - gate_matrix(GateKind.RX, a)).max()
        for a, _ in angles
    )
    checks.append(Check("H Rz(p) H = Rx(p)", hrh, 1e-12))

    chain = ChainSpec.uniform(2, g_xy=1.0)
    dev = 0.0
    for dt in (0.05, 0.3, 1.1):
        for scheme in Scheme:
            u = circuit_unitary(trotter_step_circuit(chain, TrotterPlan(dt, 1, scheme), angle_offset=perturb))
            dev = max(dev, phase_distance(u, expm(-1j * ExactPropagator(chain).hamiltonian * dt)))
    checks.append(Check("single-bond Trotter step is exact", dev, 1e-10))
    return checks


def run_verify(perturb: float = 0.0) -> tuple[str, bool]:
    checks = verification_checks(perturb)
    ok = all(c.passed for c in checks)
    lines = [c.line() for c in checks]
    lines.append(f"{sum(c.passed for c in checks)}/{len(checks)} checks passed")
    return "\n".join(lines) + "\n", ok

"""Experiment configuration: JSON file plus command-line overrides."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

from .errors import ConfigError

BOUNDARIES = ("open", "closed")
SCHEMES = ("naive4", "optimized2")
MODES = ("ideal", "exact", "density", "trajectories")
NAMED_STATES = ("neel", "domain_wall")


@dataclass(frozen=True)
class NoiseConfig:
    p2: float = 0.01
    p1: float = 0.0


@dataclass(frozen=True)
class ExperimentConfig:
    """Parameters for one experiment run.

    ``n_steps=None`` lets each job choose its own default (200 for ``evolve``
    and ``sweep``, 12 for ``compare-schemes``). ``initial_state`` is ``"neel"``,
    ``"domain_wall"`` or a literal bitstring such as ``"1100"``.
    """

    sites: int = 4
    g_xy: float = 1.0
    boundary: str = "open"
    disorder_bound: float = 0.0
    explicit_fields: tuple[float, ...] | None = None
    seed: int = 1234
    realizations: int = 100
    initial_state: str = "neel"
    dt: float = 0.05
    n_steps: int | None = None
    scheme: str = "optimized2"
    mode: str = "ideal"
    noise: NoiseConfig = field(default_factory=NoiseConfig)
    shots: int | None = None
    trajectories: int = 1000
    h_values: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.explicit_fields is not None:
            object.__setattr__(self, "explicit_fields", tuple(float(h) for h in self.explicit_fields))
        if self.h_values is not None:
            object.__setattr__(self, "h_values", tuple(float(h) for h in self.h_values))
        if isinstance(self.noise, dict):
            object.__setattr__(self, "noise", _noise_from_dict(self.noise))
        self.validate()

    def validate(self):
        _int_field("sites", self.sites, minimum=2)
        _int_field("seed", self.seed, minimum=0)
        _int_field("realizations", self.realizations, minimum=1)
        _int_field("trajectories", self.trajectories, minimum=1)
        if self.n_steps is not None:
            _int_field("n_steps", self.n_steps, minimum=1)
        if self.shots is not None:
            _int_field("shots", self.shots, minimum=1)
        _finite("g_xy", self.g_xy)
        _finite("disorder_bound", self.disorder_bound)
        _finite("dt", self.dt)
        _finite("noise.p2", self.noise.p2)
        _finite("noise.p1", self.noise.p1)
        if self.disorder_bound < 0:
            raise ConfigError(f"disorder_bound: must be >= 0, got {self.disorder_bound}")
        if self.dt <= 0:
            raise ConfigError(f"dt: must be > 0, got {self.dt}")
        for name in ("p2", "p1"):
            p = getattr(self.noise, name)
            if not 0 <= p <= 1:
                raise ConfigError(f"noise.{name}: must lie in [0, 1], got {p}")
        _choice("boundary", self.boundary, BOUNDARIES)
        _choice("scheme", self.scheme, SCHEMES)
        _choice("mode", self.mode, MODES)
        if self.explicit_fields is not None:
            if len(self.explicit_fields) != self.sites:
                raise ConfigError(
                    f"explicit_fields: expected {self.sites} values, got {len(self.explicit_fields)}"
                )
            for h in self.explicit_fields:
                _finite("explicit_fields", h)
        if self.h_values is not None:
            if not self.h_values:
                raise ConfigError("h_values: must be nonempty")
            for h in self.h_values:
                _finite("h_values", h)
                if h < 0:
                    raise ConfigError(f"h_values: disorder bounds must be >= 0, got {h}")
        s = self.initial_state
        if s not in NAMED_STATES and (not s or set(s) - {"0", "1"}):
            raise ConfigError(f"initial_state: expected neel, domain_wall or a bitstring, got {s!r}")
        if s not in NAMED_STATES and len(s) != self.sites:
            raise ConfigError(f"initial_state: bitstring length {len(s)} != sites {self.sites}")
        if s == "domain_wall" and self.sites % 2:
            raise ConfigError("initial_state: domain_wall needs an even number of sites")
        if self.boundary == "closed" and self.sites < 3:
            raise ConfigError("boundary: closed chain needs at least 3 sites")

    def to_dict(self) -> dict:
        d = asdict(self)
        for key in ("explicit_fields", "h_values"):
            if d[key] is not None:
                d[key] = list(d[key])
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> ExperimentConfig:
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config field(s): {', '.join(sorted(unknown))}")
        try:
            return cls(**data)
        except TypeError as exc:
            raise ConfigError(str(exc)) from None

    @classmethod
    def from_json(cls, text: str) -> ExperimentConfig:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        return cls.from_dict(data)

    @classmethod
    def load(cls, path: str | Path) -> ExperimentConfig:
        return cls.from_json(Path(path).read_text())

    def with_overrides(self, **overrides) -> ExperimentConfig:
        """Return a copy with non-None overrides applied (``p2``/``p1`` update the noise block)."""
        overrides = {k: v for k, v in overrides.items() if v is not None}
        noise = self.noise
        if "p2" in overrides or "p1" in overrides:
            noise = NoiseConfig(overrides.pop("p2", noise.p2), overrides.pop("p1", noise.p1))
        return replace(self, noise=noise, **overrides)


def _noise_from_dict(d: dict) -> NoiseConfig:
    unknown = set(d) - {"p2", "p1"}
    if unknown:
        raise ConfigError(f"unknown noise field(s): {', '.join(sorted(unknown))}")
    return NoiseConfig(**d)


def _int_field(name, value, minimum):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{name}: expected an integer, got {value!r}")
    if value < minimum:
        raise ConfigError(f"{name}: must be >= {minimum}, got {value}")


def _finite(name, value):
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise ConfigError(f"{name}: expected a finite number, got {value!r}")


def _choice(name, value, options):
    if value not in options:
        raise ConfigError(f"{name}: expected one of {', '.join(options)}, got {value!r}")

"""Experiment configuration: one JSON-serializable object describing a run
(regime, family parameters, grid, time stepping, initial data, models and
outputs), with CLI overrides applied on top of file values."""

from __future__ import annotations

import dataclasses
import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from .coefficients import BoussinesqParameters, FluidRegime

__all__ = ["ExperimentConfig", "InitialDataSpec", "GridSpec", "worker_count",
           "WORKERS_ENV", "KNOWN_MODELS"]

WORKERS_ENV = "BILAYERWAVES_WORKERS"

KNOWN_MODELS = ("kdv_approx", "sym_bouss", "orig_bouss",
                "rigid_lid_bouss", "rigid_lid_kdv")


@dataclass(frozen=True)
class GridSpec:
    length: float = 120.0
    dx: float = 0.01


@dataclass(frozen=True)
class InitialDataSpec:
    """Initial-data family:

    - kind="soliton": per-mode solitary waves with the given amplitudes
      (None picks polarity-corrected magnitude 1 on the fast mode only).
    - kind="bump": interface M/sqrt(1+(kappa x)^2), flat surface, zero
      velocities.
    - kind="rigid_lid": same bump as the interface datum eta0 with v0 = 0,
      usable by both rigid-lid and free-surface models.
    """

    kind: str = "soliton"
    amplitudes: tuple = (1.0, 0.0, 0.0, 0.0)
    amplitude: float = 1.0
    kappa: float = 1.0

    def __post_init__(self):
        if self.kind not in ("soliton", "bump", "rigid_lid"):
            raise ValueError(f"unknown initial data kind {self.kind!r}")
        if self.kind == "soliton" and len(self.amplitudes) != 4:
            raise ValueError("soliton data needs 4 amplitudes")
        if self.kind in ("bump", "rigid_lid") and self.kappa <= 0:
            raise ValueError("kappa must be positive")


@dataclass(frozen=True)
class ExperimentConfig:
    gamma: float = 0.25
    delta: float = 1.0
    epsilon: float = 0.1
    params: BoussinesqParameters = field(default_factory=BoussinesqParameters)
    grid: GridSpec = field(default_factory=GridSpec)
    dt: float = 0.01
    t_end: float = 10.0
    initial_data: InitialDataSpec = field(default_factory=InitialDataSpec)
    models: tuple = ("kdv_approx", "sym_bouss")
    snapshot_times: tuple = (20.0, 40.0)
    outdir: str = "out"
    workers: int | None = None
    horizon_factor: float = 4.0     # bound on t_end * epsilon (O(1/eps) validity)

    def __post_init__(self):
        self.regime()  # validates gamma/delta/epsilon ranges
        if self.dt <= 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.t_end < 0:
            raise ValueError("t_end must be nonnegative")
        if self.t_end * self.epsilon > self.horizon_factor + 1e-12:
            raise ValueError(
                f"t_end*epsilon = {self.t_end * self.epsilon:.3g} exceeds the "
                f"horizon bound {self.horizon_factor} (long-wave validity)"
            )
        for m in self.models:
            if m not in KNOWN_MODELS:
                raise ValueError(f"unknown model {m!r}; known: {KNOWN_MODELS}")

    def regime(self) -> FluidRegime:
        return FluidRegime(self.gamma, self.delta, self.epsilon)

    # -- serialization -----------------------------------------------------

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["params"] = dataclasses.asdict(self.params)
        d["grid"] = dataclasses.asdict(self.grid)
        d["initial_data"] = dataclasses.asdict(self.initial_data)
        for key in ("models", "snapshot_times"):
            d[key] = list(d[key])
        d["initial_data"]["amplitudes"] = list(self.initial_data.amplitudes)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        d = dict(d)
        unknown = set(d) - {f.name for f in dataclasses.fields(cls)}
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        if "params" in d and not isinstance(d["params"], BoussinesqParameters):
            d["params"] = BoussinesqParameters(**d["params"])
        if "grid" in d and not isinstance(d["grid"], GridSpec):
            d["grid"] = GridSpec(**d["grid"])
        if "initial_data" in d and not isinstance(d["initial_data"], InitialDataSpec):
            sub = dict(d["initial_data"])
            if "amplitudes" in sub:
                sub["amplitudes"] = tuple(sub["amplitudes"])
            d["initial_data"] = InitialDataSpec(**sub)
        for key in ("models", "snapshot_times"):
            if key in d:
                d[key] = tuple(d[key])
        return cls(**d)

    @classmethod
    def from_json(cls, path: str | Path) -> "ExperimentConfig":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def save_json(self, path: str | Path):
        Path(path).write_text(json.dumps(self.to_dict(), indent=2) + "\n")

    def replace(self, **kw) -> "ExperimentConfig":
        return dataclasses.replace(self, **kw)


def worker_count(config_workers: int | None = None) -> int:
    """Workers for batch suites: explicit config, else the environment
    variable, else 1 (simulations are individually deterministic either way)."""
    if config_workers is not None:
        return max(1, int(config_workers))
    env = os.environ.get(WORKERS_ENV)
    if env:
        return max(1, int(env))
    return 1

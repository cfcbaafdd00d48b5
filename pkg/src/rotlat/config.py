"""Run configuration: one dataclass, explicit validation, file + flag merging."""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass

DEFAULT_SPACING = 1.0 / math.sqrt(2.0)   # makes the band-bottom effective mass 1 at t=1


class ConfigError(ValueError):
    """Invalid configuration; .field names the offending entry."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


@dataclass
class RunConfig:
    model: str = "hubbard"            # "hubbard" | "continuum"
    nx: int = 100
    ny: int = 100
    spacing: float = DEFAULT_SPACING  # lattice constant d / mesh size h
    t: float = 1.0
    omega: float = 0.1
    bigomega: float = 0.0
    bigomegas: list | None = None     # sweep points (sweep command)
    n_states: int | None = None       # None -> resolved per command
    n_fermions: int | None = None
    state: int = 0                    # state index for single-state outputs
    tol: float = 1e-10
    seed: int = 7
    gap_tol: float = 1e-6
    eps_energy: float = 1e-4
    eps_density: float = 1e-3
    eps_boundary: float = 1e-6
    margin: int = 3
    axis: str = "lattice_size"        # contain command: "mesh" | "lattice_size"
    levels: list | None = None        # contain command refinement levels
    bracket: list | None = None       # contain command bisection bracket [lo, hi]
    bisect_tol: float = 1e-3
    outdir: str = "runs"
    dump_matrix: bool = False

    def validate(self) -> None:
        if self.model not in ("hubbard", "continuum", "discretized-continuum"):
            raise ConfigError("model", f"unknown model {self.model!r}")
        if self.nx < 2 or self.ny < 2:
            raise ConfigError("nx" if self.nx < 2 else "ny",
                              "grid must be at least 2x2")
        if not self.spacing > 0:
            raise ConfigError("spacing", f"must be positive, got {self.spacing}")
        if not self.t > 0:
            raise ConfigError("t", f"must be positive, got {self.t}")
        if self.omega < 0:
            raise ConfigError("omega", f"must be nonnegative, got {self.omega}")
        if self.bigomega < 0:
            raise ConfigError("bigomega", f"must be nonnegative, got {self.bigomega}")
        if self.bigomegas is not None:
            if not self.bigomegas:
                raise ConfigError("bigomegas", "sweep needs at least one value")
            if any(om < 0 for om in self.bigomegas):
                raise ConfigError("bigomegas", "all sweep values must be nonnegative")
        if self.n_states is not None and self.n_states < 1:
            raise ConfigError("n_states", f"must be >= 1, got {self.n_states}")
        if self.n_fermions is not None and self.n_fermions < 1:
            raise ConfigError("n_fermions", f"must be >= 1, got {self.n_fermions}")
        if self.state < 0:
            raise ConfigError("state", f"must be >= 0, got {self.state}")
        if not self.tol > 0:
            raise ConfigError("tol", f"must be positive, got {self.tol}")
        if not self.gap_tol > 0:
            raise ConfigError("gap_tol", f"must be positive, got {self.gap_tol}")
        for name in ("eps_energy", "eps_density", "eps_boundary", "bisect_tol"):
            if not getattr(self, name) > 0:
                raise ConfigError(name, f"must be positive, got {getattr(self, name)}")
        if self.margin < 1:
            raise ConfigError("margin", f"must be >= 1, got {self.margin}")
        if self.axis not in ("mesh", "lattice_size"):
            raise ConfigError("axis", f"must be 'mesh' or 'lattice_size', got {self.axis!r}")
        if self.bracket is not None:
            if len(self.bracket) != 2 or not self.bracket[0] < self.bracket[1]:
                raise ConfigError("bracket", f"needs [lo, hi] with lo < hi, got {self.bracket}")

    def resolved_n_states(self) -> int:
        if self.n_states is not None:
            return self.n_states
        if self.n_fermions is not None:
            return max(12, self.n_fermions + 8)
        return 12

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


_FIELD_NAMES = {f.name for f in dataclasses.fields(RunConfig)}


def load_config_file(path: str) -> dict:
    """Read a config file: JSON object, or one key=value per line (# comments)."""
    with open(path) as fh:
        text = fh.read()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        data = json.loads(text)
        if not isinstance(data, dict):
            raise ConfigError("config", f"{path}: JSON config must be an object")
    else:
        data = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError("config", f"{path}:{lineno}: expected key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            try:
                data[key] = json.loads(value)
            except json.JSONDecodeError:
                data[key] = value
    normalized = {}
    for key, value in data.items():
        name = key.replace("-", "_")
        if name not in _FIELD_NAMES:
            raise ConfigError(name, f"unknown config key in {path}")
        normalized[name] = value
    return normalized


def merge_config(file_values: dict | None, flag_values: dict) -> RunConfig:
    """Defaults < config file < explicitly passed flags."""
    merged = {}
    if file_values:
        merged.update(file_values)
    merged.update({k: v for k, v in flag_values.items() if v is not None})
    try:
        cfg = RunConfig(**merged)
    except TypeError as err:
        raise ConfigError("config", str(err)) from err
    return cfg

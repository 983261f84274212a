import os
from typing import Dict, Any, List, Optional
from dataclasses import dataclass, field, fields

import numpy as np
from dotenv import dotenv_values

from ..config import (
    DEFAULT_AMPLITUDE,
    DEFAULT_CLASS,
    DEFAULT_GRID,
    DEFAULT_STEP,
    DEFAULT_WIDTH,
    OUTPUT_DIR,
    VERIFY_TOL,
)
from ..errors import ConfigError, PreconditionError
from .grid import GridSpec
from .relation import FractionalCoeffs, LinearRelation

COMMANDS = ("classes", "solve", "reconstruct", "verify", "parallel", "classify")
FORMATS = ("obj", "ply", "csv", "field")

# Job-file keys that do not match an attribute name
KEY_ALIASES = {"CLASS": "class_id", "OFFSET": "offsets", "FIELD": "field_path"}

_FLOATS = ("beta", "gamma", "step", "tol", "omega", "amplitude", "width")


def parse_floats(text: str) -> List[float]:
    """'0.1,-0.2, 0.35' -> [0.1, -0.2, 0.35]"""
    try:
        return [float(p) for p in str(text).replace(" ", "").split(",") if p]
    except ValueError:
        raise ConfigError(f"expected comma-separated numbers, got '{text}'")


@dataclass
class JobConfig:
    command: str
    class_id: str = DEFAULT_CLASS
    beta: Optional[float] = None
    gamma: Optional[float] = None
    grid: str = DEFAULT_GRID
    step: float = DEFAULT_STEP
    extent: Optional[str] = None
    tol: float = VERIFY_TOL
    omega: Optional[float] = None
    out: str = OUTPUT_DIR
    format: str = "obj"
    offsets: List[float] = field(default_factory=list)
    relation: Optional[str] = None
    coeffs: Optional[str] = None
    field_path: Optional[str] = None
    amplitude: float = DEFAULT_AMPLITUDE
    width: float = DEFAULT_WIDTH

    @classmethod
    def _convert(cls, name: str, raw: Any) -> Any:
        if raw is None or not isinstance(raw, str):
            return raw
        if name in _FLOATS:
            try:
                return float(raw)
            except ValueError:
                raise ConfigError(f"{name} must be a number, got '{raw}'")
        if name == "offsets":
            return parse_floats(raw)
        return raw

    @classmethod
    def from_sources(cls, file_values: Dict[str, Optional[str]], cli_args: Dict[str, Any]) -> 'JobConfig':
        """Defaults, then job-file keys, then command-line flags"""
        known = {f.name for f in fields(cls)}
        values: Dict[str, Any] = {}
        for key, raw in file_values.items():
            name = KEY_ALIASES.get(key.upper(), key.lower())
            if name not in known or name == "command":
                raise ConfigError(f"unknown job key '{key}'")
            values[name] = cls._convert(name, raw)
        for name, value in cli_args.items():
            if name in known and value is not None:
                values[name] = cls._convert(name, value)
        if "command" not in values:
            raise ConfigError("no command given")
        config = cls(**values)
        config.validate()
        return config

    @classmethod
    def from_file(cls, path: str, cli_args: Dict[str, Any]) -> 'JobConfig':
        if not os.path.isfile(path):
            raise ConfigError(f"job file not found: {path}")
        return cls.from_sources(dotenv_values(path), cli_args)

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command '{self.command}'")
        if self.format not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}, got '{self.format}'")
        for name in _FLOATS:
            value = getattr(self, name)
            if value is not None and not np.isfinite(value):
                raise ConfigError(f"{name} must be finite")
        if self.step <= 0 or self.tol <= 0 or self.width <= 0:
            raise ConfigError("step, tol and width must be positive")
        if self.omega is not None and not 1.0 <= self.omega < 2.0:
            raise ConfigError(f"omega must satisfy 1 <= omega < 2, got {self.omega}")
        self.grid_spec()
        if self.relation is not None and self.coeffs is not None:
            raise ConfigError("give either a relation or fractional coefficients, not both")
        try:
            if self.relation is not None:
                LinearRelation.parse(self.relation)
            if self.coeffs is not None:
                FractionalCoeffs.parse(self.coeffs)
        except ValueError as e:
            raise ConfigError(str(e))
        if not os.access(os.path.dirname(os.path.abspath(self.out)) or ".", os.W_OK):
            raise ConfigError(f"output location is not writable: {self.out}")

    def params(self) -> Optional[Dict[str, float]]:
        """Class parameters given by the job, None for the registry defaults"""
        params = {k: getattr(self, k) for k in ("beta", "gamma") if getattr(self, k) is not None}
        return params or None

    def grid_spec(self) -> GridSpec:
        try:
            base = GridSpec.parse(self.grid, du=self.step)
            if self.extent:
                u0, u1, v0, v1 = parse_floats(self.extent)
                return GridSpec.from_extent(base.n_u, base.n_v, (u0, u1), (v0, v1))
            return GridSpec(base.n_u, base.n_v, 0.0, -0.5 * (base.n_v - 1) * self.step, self.step, self.step)
        except (PreconditionError, ValueError) as e:
            raise ConfigError(f"invalid grid: {e}")

    def to_dict(self) -> Dict[str, Any]:
        return {k: v for k, v in self.__dict__.items() if v is not None}

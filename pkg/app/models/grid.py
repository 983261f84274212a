from typing import Dict, Any, Optional, Tuple
from dataclasses import dataclass, field, replace

import numpy as np

from ..errors import ConfigError, PreconditionError


@dataclass(frozen=True)
class GridSpec:
    n_u: int
    n_v: int
    u0: float = 0.0
    v0: float = 0.0
    du: float = 0.02
    dv: float = 0.02

    def __post_init__(self):
        if self.n_u < 3 or self.n_v < 3:
            raise PreconditionError(f"grid needs at least 3x3 nodes, got {self.n_u}x{self.n_v}")
        if not (self.du > 0 and self.dv > 0):
            raise PreconditionError(f"grid spacings must be positive, got du={self.du}, dv={self.dv}")

    @classmethod
    def parse(cls, text: str, u0: float = 0.0, v0: float = 0.0, du: float = 0.02,
              dv: Optional[float] = None) -> 'GridSpec':
        """Grid from 'NxM' text"""
        try:
            n_u, n_v = (int(p) for p in text.lower().split("x"))
        except ValueError:
            raise ConfigError(f"grid must look like NxM, got '{text}'")
        return cls(n_u, n_v, u0, v0, du, du if dv is None else dv)

    @classmethod
    def from_extent(cls, n_u: int, n_v: int, u_range: Tuple[float, float], v_range: Tuple[float, float]) -> 'GridSpec':
        """Grid with nodes on both ends of each range"""
        du = (u_range[1] - u_range[0]) / (n_u - 1)
        dv = (v_range[1] - v_range[0]) / (n_v - 1)
        return cls(n_u, n_v, u_range[0], v_range[0], du, dv)

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.n_u, self.n_v)

    def axes(self) -> Tuple[np.ndarray, np.ndarray]:
        u = self.u0 + self.du * np.arange(self.n_u)
        v = self.v0 + self.dv * np.arange(self.n_v)
        return u, v

    def mesh(self) -> Tuple[np.ndarray, np.ndarray]:
        u, v = self.axes()
        return np.meshgrid(u, v, indexing="ij")


@dataclass
class GridField:
    """Samples of nu (or lambda) on a uniform (u, v) grid, u along axis 0"""
    values: np.ndarray
    u0: float
    v0: float
    du: float
    dv: float
    nu0: float
    a_const: float = 1.0
    b_const: float = 1.0
    class_id: str = "custom"
    kind: str = "nu"
    edges: str = "exact"  # "extrapolated" when a march filled the v-edges

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 2 or min(self.values.shape) < 3:
            raise PreconditionError(f"field must be a 2D array of at least 3x3, got shape {self.values.shape}")
        if not (self.du > 0 and self.dv > 0):
            raise PreconditionError("field spacings must be positive")
        if self.a_const == 0 or self.b_const == 0:
            raise PreconditionError("constants a and b must be nonzero")
        if self.kind not in ("nu", "lambda"):
            raise PreconditionError(f"unknown field kind '{self.kind}'")
        if self.edges not in ("exact", "extrapolated"):
            raise PreconditionError(f"unknown edge treatment '{self.edges}'")

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'GridField':
        """Create a GridField from a dictionary"""
        return cls(**data)

    def to_dict(self) -> Dict[str, Any]:
        return dict(self.__dict__)

    @classmethod
    def on_grid(cls, grid: GridSpec, values, nu0: float, **kwargs) -> 'GridField':
        return cls(values=values, u0=grid.u0, v0=grid.v0, du=grid.du, dv=grid.dv, nu0=nu0, **kwargs)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.values.shape

    @property
    def grid(self) -> GridSpec:
        return GridSpec(self.shape[0], self.shape[1], self.u0, self.v0, self.du, self.dv)

    def header(self) -> Dict[str, Any]:
        """Everything except the samples"""
        return {k: v for k, v in self.to_dict().items() if k != "values"}

    def with_values(self, values, **changes) -> 'GridField':
        return replace(self, values=np.asarray(values, dtype=float), **changes)


@dataclass
class ResidualReport:
    max_abs: float
    rms: float
    field: np.ndarray
    components: Dict[str, np.ndarray] = field(default_factory=dict)

    @classmethod
    def create(cls, residual: np.ndarray, components: Optional[Dict[str, np.ndarray]] = None) -> 'ResidualReport':
        """Report from an interior residual array; non-finite entries count as infinite.

        Masked entries of a masked array are left out of max_abs and rms.
        """
        if np.ma.isMaskedArray(residual):
            r = residual.astype(float)
            a = np.abs(r.compressed())
        else:
            r = np.asarray(residual, dtype=float)
            a = np.abs(r)
        if a.size == 0:
            return cls(0.0, 0.0, r, dict(components or {}))
        if not np.all(np.isfinite(a)):
            return cls(float("inf"), float("inf"), r, dict(components or {}))
        rms = float(np.sqrt(np.mean(np.square(a.ravel()))))
        return cls(float(a.max()), rms, r, dict(components or {}))

    def to_dict(self) -> Dict[str, Any]:
        return {"max_abs": self.max_abs, "rms": self.rms}


@dataclass
class SolveInfo:
    """Side information returned by the PDE solvers"""
    iterations: int = 0
    update_norm: float = 0.0
    boundary: str = "dirichlet"
    extrapolated_edges: bool = False
    omega: Optional[float] = None

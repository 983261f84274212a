from typing import Dict, Any, Optional, Tuple
from dataclasses import dataclass, field

import numpy as np

from ..errors import PreconditionError, offending_nodes
from .grid import GridField
from .lorentz import MovingFrame


@dataclass
class InvariantFields:
    nu1: np.ndarray
    nu2: np.ndarray
    gamma1: np.ndarray
    gamma2: np.ndarray
    E: np.ndarray
    G: np.ndarray

    def validate(self) -> None:
        """Time-like principal metric and no umbilics"""
        if np.any(self.E >= 0):
            raise PreconditionError("E must be negative at every node", nodes=offending_nodes(self.E >= 0))
        if np.any(self.G <= 0):
            raise PreconditionError("G must be positive at every node", nodes=offending_nodes(self.G <= 0))
        umbilic = self.nu1 == self.nu2
        if np.any(umbilic):
            raise PreconditionError("nu1 - nu2 vanishes (H^2 - K = 0)", nodes=offending_nodes(umbilic))

    @property
    def shape(self) -> Tuple[int, int]:
        return self.nu1.shape

    def arrays(self) -> Dict[str, np.ndarray]:
        return {k: getattr(self, k) for k in ("nu1", "nu2", "gamma1", "gamma2", "E", "G")}


@dataclass
class SurfacePatch:
    """Positions (n, m, 3), frames (n, m, 3, 3) with rows X, Y, l"""
    z: np.ndarray
    frames: np.ndarray
    fields: InvariantFields
    grid: GridField
    renormalizations: int = 0
    seed_index: Tuple[int, int] = (0, 0)
    offset: Optional["ParallelOffset"] = None

    @property
    def shape(self) -> Tuple[int, int]:
        return self.z.shape[:2]

    @property
    def normals(self) -> np.ndarray:
        return self.frames[..., 2, :]

    def frame_at(self, i: int, j: int) -> MovingFrame:
        return MovingFrame.from_matrix(self.frames[i, j])


@dataclass(frozen=True)
class ParallelOffset:
    a: float
    eps: int

    def __post_init__(self):
        if self.a == 0:
            raise PreconditionError("parallel offset must be nonzero")
        if self.eps not in (-1, 1):
            raise PreconditionError(f"eps must be +1 or -1, got {self.eps}")

    @property
    def inverse(self) -> float:
        """Offset that undoes this one"""
        return -self.eps * self.a

    def to_dict(self) -> Dict[str, Any]:
        return {"a": self.a, "eps": self.eps}


@dataclass
class FundamentalForms:
    E: np.ndarray
    F: np.ndarray
    G: np.ndarray
    L: np.ndarray
    M: np.ndarray
    N: np.ndarray
    du: float
    dv: float
    normals: Optional[np.ndarray] = None


@dataclass
class PrincipalLineGeometry:
    kappa1_sq: np.ndarray
    kappa2_sq: np.ndarray
    tau1: np.ndarray
    tau1_alt: np.ndarray
    tau2: np.ndarray
    theta1: np.ndarray
    eps2: np.ndarray


@dataclass
class VerificationReport:
    deviations: Dict[str, float]
    mixed_F: float
    mixed_M: float
    tol: float
    frame_drift: float = 0.0
    extra: Dict[str, Any] = field(default_factory=dict)

    @property
    def max_deviation(self) -> float:
        return max(self.deviations.values()) if self.deviations else 0.0

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.max_deviation) and self.max_deviation <= self.tol)

    def to_dict(self) -> Dict[str, Any]:
        return {
            **{f"dev_{k}": v for k, v in self.deviations.items()},
            "max_deviation": self.max_deviation,
            "mixed_F": self.mixed_F,
            "mixed_M": self.mixed_M,
            "frame_drift": self.frame_drift,
            "tol": self.tol,
            "passed": self.passed,
            **self.extra,
        }

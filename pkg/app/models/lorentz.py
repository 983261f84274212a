from typing import Dict, Any, List
from dataclasses import dataclass, field

import numpy as np

# Signature matrix diag(1, 1, -1)
ETA = np.diag([1.0, 1.0, -1.0])


@dataclass(frozen=True)
class LorentzVec:
    x1: float
    x2: float
    x3: float

    def __post_init__(self):
        if not np.all(np.isfinite([self.x1, self.x2, self.x3])):
            raise ValueError("LorentzVec components must be finite")

    @classmethod
    def from_array(cls, arr) -> 'LorentzVec':
        """Create a LorentzVec from a length-3 array"""
        x = np.asarray(arr, dtype=float).reshape(3)
        return cls(float(x[0]), float(x[1]), float(x[2]))

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'LorentzVec':
        """Create a LorentzVec from a dictionary"""
        return cls(float(data["x1"]), float(data["x2"]), float(data["x3"]))

    def to_dict(self) -> Dict[str, Any]:
        """Convert LorentzVec to dictionary"""
        return {"x1": self.x1, "x2": self.x2, "x3": self.x3}

    def as_array(self) -> np.ndarray:
        return np.array([self.x1, self.x2, self.x3])

    @classmethod
    def basis(cls, k: int) -> 'LorentzVec':
        """Basis vector e_k, k in {1, 2, 3}"""
        arr = np.zeros(3)
        arr[k - 1] = 1.0
        return cls.from_array(arr)


@dataclass(frozen=True)
class MovingFrame:
    X: LorentzVec
    Y: LorentzVec
    l: LorentzVec

    @classmethod
    def from_matrix(cls, F) -> 'MovingFrame':
        """Create a frame from a 3x3 matrix with rows X, Y, l"""
        F = np.asarray(F, dtype=float)
        return cls(LorentzVec.from_array(F[0]), LorentzVec.from_array(F[1]), LorentzVec.from_array(F[2]))

    @classmethod
    def standard(cls) -> 'MovingFrame':
        """Default seed frame X=e3, Y=e1, l=e2"""
        return cls(LorentzVec.basis(3), LorentzVec.basis(1), LorentzVec.basis(2))

    def matrix(self) -> np.ndarray:
        return np.vstack([self.X.as_array(), self.Y.as_array(), self.l.as_array()])

    def to_dict(self) -> Dict[str, Any]:
        return {"X": self.X.to_dict(), "Y": self.Y.to_dict(), "l": self.l.to_dict()}


@dataclass(frozen=True, eq=False)
class Motion:
    L: np.ndarray
    t: LorentzVec = field(default_factory=lambda: LorentzVec(0.0, 0.0, 0.0))

    @classmethod
    def identity(cls) -> 'Motion':
        return cls(np.eye(3))

    @classmethod
    def translation(cls, t) -> 'Motion':
        return cls(np.eye(3), LorentzVec.from_array(t))

    @classmethod
    def boost(cls, rapidity: float, axis: int = 1) -> 'Motion':
        """Boost mixing e_axis (1 or 2) with the time-like e3"""
        L = np.eye(3)
        k = axis - 1
        ch, sh = np.cosh(rapidity), np.sinh(rapidity)
        L[k, k], L[k, 2], L[2, k], L[2, 2] = ch, sh, sh, ch
        return cls(L)

    @classmethod
    def rotation(cls, angle: float) -> 'Motion':
        """Rotation in the space-like (e1, e2) plane"""
        c, s = np.cos(angle), np.sin(angle)
        L = np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
        return cls(L)

    def compose(self, other: 'Motion') -> 'Motion':
        """self after other"""
        L = self.L @ other.L
        t = self.L @ other.t.as_array() + self.t.as_array()
        return Motion(L, LorentzVec.from_array(t))

    def to_dict(self) -> Dict[str, Any]:
        return {"L": np.asarray(self.L).tolist(), "t": self.t.to_dict()}


@dataclass
class FrameReport:
    xx: float
    yy: float
    ll: float
    xy: float
    xl: float
    yl: float
    orientation: float

    @property
    def deviations(self) -> List[float]:
        return [self.xx, self.yy, self.ll, self.xy, self.xl, self.yl]

    @property
    def max_dev(self) -> float:
        return max(abs(d) for d in self.deviations)

    def ok(self, tol: float) -> bool:
        return self.max_dev <= tol and self.orientation > 0

    def to_dict(self) -> Dict[str, Any]:
        return dict(self.__dict__, max_dev=self.max_dev)

from typing import Dict, Any, List, Optional
from dataclasses import dataclass, field

import numpy as np

from ..errors import PreconditionError
from .weingarten import BasicClass


@dataclass(frozen=True)
class LinearRelation:
    """delta K = alpha H + beta H' + gamma, with H' = (nu1 - nu2)/2"""
    alpha: float
    beta: float
    gamma: float
    delta: float

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'LinearRelation':
        return cls(float(data["alpha"]), float(data["beta"]), float(data["gamma"]), float(data["delta"]))

    @classmethod
    def parse(cls, text: str) -> 'LinearRelation':
        """Relation from 'alpha,beta,gamma,delta'"""
        parts = [p for p in text.replace(" ", "").split(",") if p]
        if len(parts) != 4:
            raise ValueError(f"expected four comma-separated numbers, got '{text}'")
        return cls(*(float(p) for p in parts))

    def to_dict(self) -> Dict[str, Any]:
        return {"alpha": self.alpha, "beta": self.beta, "gamma": self.gamma, "delta": self.delta}

    def as_array(self) -> np.ndarray:
        return np.array([self.alpha, self.beta, self.gamma, self.delta])

    @property
    def discriminant(self) -> float:
        """alpha^2 - beta^2 + 4 gamma delta, equal to 4(BC - AD)"""
        return self.alpha ** 2 - self.beta ** 2 + 4.0 * self.gamma * self.delta

    def admissible(self) -> bool:
        umbilic = self.alpha == 0 and self.gamma == 0 and self.delta == 0
        return bool(np.all(np.isfinite(self.as_array()))) and self.discriminant != 0 and not umbilic

    def require_admissible(self) -> None:
        if not np.all(np.isfinite(self.as_array())):
            raise PreconditionError(f"relation coefficients must be finite: {self.to_dict()}")
        if self.alpha == 0 and self.gamma == 0 and self.delta == 0:
            raise PreconditionError("the relation beta H' = 0 describes umbilic points and is excluded")
        if self.discriminant == 0:
            raise PreconditionError(f"relation is not admissible: alpha^2 - beta^2 + 4 gamma delta = 0 for {self.to_dict()}")

    def scaled(self, s: float) -> 'LinearRelation':
        """Relation satisfied by the curvatures s * nu of the homothetic surface"""
        return LinearRelation(s * self.alpha, s * self.beta, s * s * self.gamma, self.delta)

    def normalized(self) -> 'LinearRelation':
        """Projective representative: delta = 1, else alpha = 1, else beta = 1"""
        for pivot in (self.delta, self.alpha, self.beta):
            if pivot != 0:
                return LinearRelation(*(self.as_array() / pivot))
        return self

    def residual(self, K, H, Hp) -> np.ndarray:
        return self.delta * np.asarray(K) - self.alpha * np.asarray(H) - self.beta * np.asarray(Hp) - self.gamma


@dataclass(frozen=True)
class FractionalCoeffs:
    """nu1 = (A nu2 + B)/(C nu2 + D)"""
    A: float
    B: float
    C: float
    D: float

    @classmethod
    def parse(cls, text: str) -> 'FractionalCoeffs':
        parts = [p for p in text.replace(" ", "").split(",") if p]
        if len(parts) != 4:
            raise ValueError(f"expected four comma-separated numbers, got '{text}'")
        return cls(*(float(p) for p in parts))

    def to_dict(self) -> Dict[str, Any]:
        return {"A": self.A, "B": self.B, "C": self.C, "D": self.D}

    def require_admissible(self) -> None:
        if self.B * self.C - self.A * self.D == 0:
            raise PreconditionError(f"BC - AD vanishes for {self.to_dict()}")
        if self.A == self.D and self.B == 0 and self.C == 0:
            raise PreconditionError("the case A = D, B = C = 0 describes umbilic points and is excluded")


@dataclass
class ClassificationResult:
    basic: BasicClass
    params: Dict[str, float]
    offset_a: float
    eps: int
    similarity_scale: float
    case_trace: List[str]
    reduced: LinearRelation
    input: LinearRelation
    notes: List[str] = field(default_factory=list)

    @property
    def index(self) -> int:
        return self.basic.index

    def to_dict(self) -> Dict[str, Any]:
        return {
            "input": self.input.to_dict(),
            "class": self.basic.id,
            "index": self.basic.index,
            "relation": self.basic.relation,
            "params": dict(self.params),
            "offset_a": self.offset_a,
            "eps": self.eps,
            "similarity_scale": self.similarity_scale,
            "case_trace": list(self.case_trace),
            "reduced": self.reduced.to_dict(),
        }

    @classmethod
    def create(cls, basic: BasicClass, rel: LinearRelation, reduced: LinearRelation, trace: List[str],
               offset_a: float = 0.0, eps: int = 1, scale: float = 1.0,
               notes: Optional[List[str]] = None) -> 'ClassificationResult':
        return cls(
            basic=basic,
            params=dict(basic.params),
            offset_a=offset_a,
            eps=eps,
            similarity_scale=scale,
            case_trace=list(trace),
            reduced=reduced,
            input=rel,
            notes=list(notes or []),
        )

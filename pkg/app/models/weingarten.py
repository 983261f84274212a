from typing import Dict, Any, Callable, Optional, Tuple
from dataclasses import dataclass

import numpy as np

from ..errors import PreconditionError

# Operator tags of the natural PDEs
OP_LAPLACE = "Δ"            # w_uu + w_vv
OP_WAVE = "Δ̄"               # w_uu - w_vv
OP_LAPLACE_STAR = "Δ*"      # w_uu + (1/w)_vv
OP_WAVE_STAR = "Δ̄*"         # w_uu - (1/w)_vv
OPERATORS = (OP_LAPLACE, OP_WAVE, OP_LAPLACE_STAR, OP_WAVE_STAR)

Fn = Callable[[Any], Any]


@dataclass
class WeingartenPair:
    """Principal curvatures nu1 = f(nu), nu2 = g(nu) on an open interval"""
    f: Fn
    df: Fn
    d2f: Fn
    g: Fn
    dg: Fn
    d2g: Fn
    domain: Tuple[float, float]
    nu0: float
    label: str = "custom"
    I: Optional[Fn] = None  # closed-form antiderivatives, zero at nu0
    J: Optional[Fn] = None

    @property
    def sign(self) -> int:
        """Sign of f - g on the domain"""
        return int(np.sign(self.f(self.nu0) - self.g(self.nu0)))

    def contains(self, nu) -> np.ndarray:
        lo, hi = self.domain
        nu = np.asarray(nu, dtype=float)
        return (nu > lo) & (nu < hi) & np.isfinite(nu)

    def sample(self, n: int) -> np.ndarray:
        """Interior samples of the domain; infinite ends are clipped around nu0"""
        lo, hi = self.domain
        a = lo if np.isfinite(lo) else self.nu0 - 10.0 * max(1.0, abs(self.nu0))
        b = hi if np.isfinite(hi) else self.nu0 + 10.0 * max(1.0, abs(self.nu0))
        return np.linspace(a, b, n + 2)[1:-1]

    def check_domain(self, n: int = 257) -> None:
        """Sampled check of (f - g) f' g' != 0 with constant sign of f - g"""
        if not self.contains(self.nu0):
            raise PreconditionError(f"nu0={self.nu0} outside domain {self.domain}")
        nu = self.sample(n)
        gap = self.f(nu) - self.g(nu)
        product = gap * self.df(nu) * self.dg(nu)
        if np.any(~np.isfinite(product)) or np.any(product == 0):
            raise PreconditionError(f"{self.label}: (f-g) f' g' vanishes on {self.domain}")
        if np.any(np.sign(gap) != self.sign):
            raise PreconditionError(f"{self.label}: f - g changes sign on {self.domain}")

    def to_dict(self) -> Dict[str, Any]:
        return {"label": self.label, "domain": list(self.domain), "nu0": self.nu0, "sign": self.sign}


@dataclass
class Potentials:
    I: Fn
    J: Fn
    dI: Fn
    dJ: Fn
    method: str  # closed_form | quadrature


@dataclass
class Substitution:
    """Invertible change of variable between lambda and nu"""
    name: str
    to_lambda: Fn
    to_nu: Fn


@dataclass
class NaturalPdeDescriptor:
    class_id: str
    operator: str
    dependent: str      # text of the transformed variable w
    reciprocal: str     # text of 1/w
    to_w: Fn            # lambda -> w
    from_w: Fn          # w -> lambda
    rhs: Fn             # right-hand side as a function of lambda
    rhs_text: str

    def __post_init__(self):
        if self.operator not in OPERATORS:
            raise ValueError(f"unknown operator tag {self.operator}")

    @property
    def starred(self) -> bool:
        return self.operator in (OP_LAPLACE_STAR, OP_WAVE_STAR)

    @property
    def character(self) -> str:
        # the starred wave operator linearizes to w_uu + w^-2 w_vv
        if self.operator in (OP_LAPLACE, OP_WAVE_STAR):
            return "elliptic"
        return "hyperbolic"

    def rhs_w(self, w):
        return self.rhs(self.from_w(w))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "class": self.class_id,
            "operator": self.operator,
            "dependent": self.dependent,
            "rhs": self.rhs_text,
            "character": self.character,
        }


@dataclass
class BasicClass:
    id: str
    index: int
    params: Dict[str, float]
    relation: str
    convention: str
    substitution: Substitution
    pde: NaturalPdeDescriptor
    nu0: float
    a_const: float
    b_const: float
    domain: Tuple[float, float]
    notes: str = ""

    @property
    def lambda0(self) -> float:
        return float(self.substitution.to_lambda(self.nu0))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "id": self.id,
            "index": self.index,
            "params": dict(self.params),
            "relation": self.relation,
            "convention": self.convention,
            "substitution": self.substitution.name,
            "domain": list(self.domain),
            "nu0": self.nu0,
            "a_const": self.a_const,
            "b_const": self.b_const,
            "pde": self.pde.to_dict(),
        }

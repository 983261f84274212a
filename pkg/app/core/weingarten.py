"""Registry of Weingarten pairs: the ten basic classes, linear fractional
pairs and the potentials I, J used by the metric of natural parameters."""
import logging
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy.integrate import quad, solve_ivp

from ..config import QUAD_RTOL, DOMAIN_SAMPLES
from ..errors import NumericalError, PreconditionError
from ..models.weingarten import (
    BasicClass,
    NaturalPdeDescriptor,
    Potentials,
    Substitution,
    WeingartenPair,
    OP_LAPLACE,
    OP_WAVE,
    OP_LAPLACE_STAR,
    OP_WAVE_STAR,
)

logger = logging.getLogger(__name__)

CLASS_IDS = (
    "H0",
    "CMC_HALF",
    "HPRIME1",
    "H_BETA_HPRIME_GT1",
    "H_BETA_HPRIME_LT1",
    "H_BETA_HPRIME_PLUS1_GT1",
    "H_BETA_HPRIME_PLUS1_LT1",
    "K_MINUS1",
    "K_2HPRIME",
    "K_BETA_HPRIME_GAMMA",
)

# Parameters used when a class is listed without explicit values
DEFAULT_PARAMS = {
    "H_BETA_HPRIME_GT1": {"beta": 2.0},
    "H_BETA_HPRIME_LT1": {"beta": 0.5},
    "H_BETA_HPRIME_PLUS1_GT1": {"beta": 2.0},
    "H_BETA_HPRIME_PLUS1_LT1": {"beta": 0.5},
    "K_BETA_HPRIME_GAMMA": {"beta": 1.0, "gamma": -1.0},
}

def _const(c):
    return lambda nu: np.full_like(np.asarray(nu, dtype=float), c)


def _identity(x):
    return np.asarray(x, dtype=float)


def _exp_dependent(class_id: str, rhs, rhs_text: str, operator: str = OP_WAVE_STAR) -> NaturalPdeDescriptor:
    return NaturalPdeDescriptor(
        class_id=class_id, operator=operator, dependent="e^λ", reciprocal="e^-λ",
        to_w=np.exp, from_w=np.log, rhs=rhs, rhs_text=rhs_text,
    )


def _power_dependent(class_id: str, var: str, beta: float, operator: str, rhs, rhs_text: str) -> NaturalPdeDescriptor:
    return NaturalPdeDescriptor(
        class_id=class_id, operator=operator,
        dependent=f"{var}^{beta:g}", reciprocal=f"{var}^{-beta:g}",
        to_w=lambda lam: np.power(lam, beta),
        from_w=lambda w: np.power(w, 1.0 / beta),
        rhs=rhs, rhs_text=rhs_text,
    )


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise PreconditionError(message)


class WeingartenRegistry:
    """Builds the basic classes and their pairs by id"""

    def __init__(self):
        self._builders = {
            "H0": self._h0,
            "CMC_HALF": self._cmc_half,
            "HPRIME1": self._hprime1,
            "H_BETA_HPRIME_GT1": lambda p: self._h_beta_hprime(p, greater=True),
            "H_BETA_HPRIME_LT1": lambda p: self._h_beta_hprime(p, greater=False),
            "H_BETA_HPRIME_PLUS1_GT1": lambda p: self._h_beta_hprime_plus1(p, greater=True),
            "H_BETA_HPRIME_PLUS1_LT1": lambda p: self._h_beta_hprime_plus1(p, greater=False),
            "K_MINUS1": self._k_minus1,
            "K_2HPRIME": self._k_2hprime,
            "K_BETA_HPRIME_GAMMA": self._k_beta_hprime_gamma,
        }

    def make_basic_class(self, class_id: str, params: Optional[Dict[str, float]] = None) -> Tuple[BasicClass, WeingartenPair]:
        """Representative pair and natural PDE of a basic class"""
        if class_id not in self._builders:
            raise PreconditionError(f"unknown basic class '{class_id}'")
        if params is None:
            params = DEFAULT_PARAMS.get(class_id, {})
        basic, pair = self._builders[class_id](dict(params))
        pair.check_domain(DOMAIN_SAMPLES)
        return basic, pair

    def catalog(self) -> List[BasicClass]:
        """All ten classes with default parameters"""
        return [self.make_basic_class(cid)[0] for cid in CLASS_IDS]

    # (1) H = 0
    def _h0(self, params):
        nu0 = 0.5
        pair = WeingartenPair(
            f=_identity, df=_const(1.0), d2f=_const(0.0),
            g=lambda nu: -np.asarray(nu, dtype=float), dg=_const(-1.0), d2g=_const(0.0),
            domain=(0.0, np.inf), nu0=nu0, label="H0",
            I=lambda nu: 0.5 * np.log(np.asarray(nu) / nu0),
            J=lambda nu: 0.5 * np.log(np.asarray(nu) / nu0),
        )
        pde = NaturalPdeDescriptor(
            class_id="H0", operator=OP_WAVE, dependent="λ", reciprocal="1/λ",
            to_w=_identity, from_w=_identity, rhs=np.exp, rhs_text="e^λ",
        )
        sub = Substitution("ν = e^λ", to_lambda=np.log, to_nu=np.exp)
        basic = BasicClass(
            id="H0", index=1, params={}, relation="H = 0", convention="ν₁ = ν, ν₂ = −ν",
            substitution=sub, pde=pde, nu0=nu0, a_const=1.0, b_const=1.0, domain=pair.domain,
        )
        return basic, pair

    # (2) H = 1/2
    def _cmc_half(self, params):
        nu0 = 0.0

        def potential(nu):
            return 0.5 * np.log(np.abs((2.0 * np.asarray(nu) - 1.0) / (2.0 * nu0 - 1.0)))

        pair = WeingartenPair(
            f=lambda nu: 1.0 - np.asarray(nu, dtype=float), df=_const(-1.0), d2f=_const(0.0),
            g=_identity, dg=_const(1.0), d2g=_const(0.0),
            domain=(-np.inf, 0.5), nu0=nu0, label="CMC_HALF", I=potential, J=potential,
        )
        pde = NaturalPdeDescriptor(
            class_id="CMC_HALF", operator=OP_WAVE, dependent="λ", reciprocal="1/λ",
            to_w=_identity, from_w=_identity, rhs=np.sinh, rhs_text="sinh λ",
        )
        sub = Substitution(
            "ν = (1 − e^λ)/2",
            to_lambda=lambda nu: np.log(1.0 - 2.0 * np.asarray(nu)),
            to_nu=lambda lam: 0.5 * (1.0 - np.exp(lam)),
        )
        basic = BasicClass(
            id="CMC_HALF", index=2, params={}, relation="H = 1/2", convention="ν₁ = 1 − ν, ν₂ = ν",
            substitution=sub, pde=pde, nu0=nu0, a_const=1.0, b_const=1.0, domain=pair.domain,
        )
        return basic, pair

    # (3) H' = 1
    def _hprime1(self, params):
        nu0 = 0.0
        pair = WeingartenPair(
            f=lambda nu: np.asarray(nu, dtype=float) + 2.0, df=_const(1.0), d2f=_const(0.0),
            g=_identity, dg=_const(1.0), d2g=_const(0.0),
            domain=(-np.inf, np.inf), nu0=nu0, label="HPRIME1",
            I=lambda nu: 0.5 * (np.asarray(nu) - nu0),
            J=lambda nu: -0.5 * (np.asarray(nu) - nu0),
        )
        pde = _exp_dependent("HPRIME1", lambda lam: 2.0 * lam * (lam + 2.0), "2λ(λ + 2)")
        sub = Substitution("ν = λ", to_lambda=_identity, to_nu=_identity)
        basic = BasicClass(
            id="HPRIME1", index=3, params={}, relation="H′ = 1", convention="ν₁ = ν + 2, ν₂ = ν",
            substitution=sub, pde=pde, nu0=nu0, a_const=1.0, b_const=1.0, domain=pair.domain,
        )
        return basic, pair

    # (4), (5) H = beta H'
    def _h_beta_hprime(self, params, greater: bool):
        beta = float(params.get("beta", np.nan))
        class_id = "H_BETA_HPRIME_GT1" if greater else "H_BETA_HPRIME_LT1"
        if greater:
            _require(np.isfinite(beta) and beta * beta > 1.0, f"{class_id} requires beta^2 > 1, got beta={beta}")
            b_const = np.sqrt((beta - 1.0) / (beta + 1.0))
            operator = OP_WAVE_STAR
        else:
            _require(np.isfinite(beta) and beta * beta < 1.0 and beta != 0.0,
                     f"{class_id} requires beta^2 < 1 and beta != 0, got beta={beta}")
            b_const = np.sqrt((1.0 - beta) / (1.0 + beta))
            operator = OP_LAPLACE_STAR
        c = (beta + 1.0) / (beta - 1.0)
        k = 2.0 * beta * (beta + 1.0) / (beta - 1.0) ** 2
        nu0 = 1.0
        pair = WeingartenPair(
            f=lambda nu: c * np.asarray(nu, dtype=float), df=_const(c), d2f=_const(0.0),
            g=_identity, dg=_const(1.0), d2g=_const(0.0),
            domain=(0.0, np.inf), nu0=nu0, label=class_id,
            I=lambda nu: 0.5 * (beta + 1.0) * np.log(np.asarray(nu) / nu0),
            J=lambda nu: -0.5 * (beta - 1.0) * np.log(np.asarray(nu) / nu0),
        )
        pde = _power_dependent(class_id, "ν", beta, operator, lambda lam: k * np.asarray(lam), f"{k:.12g} ν")
        sub = Substitution("λ = ν", to_lambda=_identity, to_nu=_identity)
        basic = BasicClass(
            id=class_id, index=4 if greater else 5, params={"beta": beta},
            relation=f"H = {beta:g} H′", convention="ν₁ = ν(β+1)/(β−1), ν₂ = ν",
            substitution=sub, pde=pde, nu0=nu0, a_const=1.0, b_const=float(b_const), domain=pair.domain,
            notes="f − g has the sign of β − 1",
        )
        return basic, pair

    # (6), (7) H = beta H' + 1
    def _h_beta_hprime_plus1(self, params, greater: bool):
        beta = float(params.get("beta", np.nan))
        class_id = "H_BETA_HPRIME_PLUS1_GT1" if greater else "H_BETA_HPRIME_PLUS1_LT1"
        if greater:
            _require(np.isfinite(beta) and beta * beta > 1.0, f"{class_id} requires beta^2 > 1, got beta={beta}")
            b_const = np.sqrt((beta - 1.0) / (beta + 1.0))
            operator = OP_WAVE_STAR
        else:
            _require(np.isfinite(beta) and beta * beta < 1.0 and beta != 0.0,
                     f"{class_id} requires beta^2 < 1 and beta != 0, got beta={beta}")
            b_const = np.sqrt((1.0 - beta) / (1.0 + beta))
            operator = OP_LAPLACE_STAR
        slope = -(1.0 + beta) / (1.0 - beta)
        nu0 = 0.5 * (beta + 1.0)
        domain = (1.0, np.inf) if beta > 1.0 else (-np.inf, 1.0)

        def lam_of(nu):
            return 2.0 * (1.0 - np.asarray(nu, dtype=float)) / (1.0 - beta)

        def rhs(lam):
            lam = np.asarray(lam, dtype=float)
            return beta * ((beta - 1.0) * lam + 2.0) * ((beta + 1.0) * lam + 2.0) / (2.0 * (beta - 1.0) * lam)

        pair = WeingartenPair(
            f=lambda nu: (2.0 - (1.0 + beta) * np.asarray(nu, dtype=float)) / (1.0 - beta),
            df=_const(slope), d2f=_const(0.0),
            g=_identity, dg=_const(1.0), d2g=_const(0.0),
            domain=domain, nu0=nu0, label=class_id,
            I=lambda nu: 0.5 * (1.0 + beta) * np.log(lam_of(nu)),
            J=lambda nu: 0.5 * (1.0 - beta) * np.log(lam_of(nu)),
        )
        pde = _power_dependent(
            class_id, "λ", beta, operator, rhs,
            f"β((β−1)λ + 2)((β+1)λ + 2) / (2(β−1)λ), β={beta:g}",
        )
        sub = Substitution(
            "λ = 2(1 − ν)/(1 − β)", to_lambda=lam_of,
            to_nu=lambda lam: 0.5 * ((beta - 1.0) * np.asarray(lam, dtype=float) + 2.0),
        )
        basic = BasicClass(
            id=class_id, index=6 if greater else 7, params={"beta": beta},
            relation=f"H = {beta:g} H′ + 1", convention="ν₁ = (2 − (1+β)ν)/(1−β), ν₂ = ν",
            substitution=sub, pde=pde, nu0=nu0, a_const=1.0, b_const=float(b_const), domain=domain,
        )
        return basic, pair

    # (8) K = -1
    def _k_minus1(self, params):
        nu0 = 1.0

        def I(nu):
            nu = np.asarray(nu, dtype=float)
            return 0.5 * np.log((1.0 + nu * nu) / (1.0 + nu0 * nu0))

        pair = WeingartenPair(
            f=_identity, df=_const(1.0), d2f=_const(0.0),
            g=lambda nu: -1.0 / np.asarray(nu, dtype=float),
            dg=lambda nu: 1.0 / np.asarray(nu, dtype=float) ** 2,
            d2g=lambda nu: -2.0 / np.asarray(nu, dtype=float) ** 3,
            domain=(0.0, np.inf), nu0=nu0, label="K_MINUS1",
            I=I, J=lambda nu: I(nu) - np.log(np.asarray(nu, dtype=float) / nu0),
        )
        pde = NaturalPdeDescriptor(
            class_id="K_MINUS1", operator=OP_LAPLACE, dependent="λ", reciprocal="1/λ",
            to_w=_identity, from_w=_identity, rhs=lambda lam: -np.sin(lam), rhs_text="−sin λ",
        )
        sub = Substitution(
            "ν = tan(λ/2)",
            to_lambda=lambda nu: 2.0 * np.arctan(nu),
            to_nu=lambda lam: np.tan(0.5 * np.asarray(lam, dtype=float)),
        )
        root2 = float(np.sqrt(2.0))
        basic = BasicClass(
            id="K_MINUS1", index=8, params={}, relation="K = −1", convention="ν₁ = ν, ν₂ = −1/ν",
            substitution=sub, pde=pde, nu0=nu0, a_const=root2, b_const=root2, domain=pair.domain,
        )
        return basic, pair

    # (9) K = 2H'
    def _k_2hprime(self, params):
        nu0 = 2.0

        def r(nu):
            return 1.0 / (np.asarray(nu, dtype=float) - 1.0)

        pair = WeingartenPair(
            f=lambda nu: np.asarray(nu, dtype=float) - 1.0, df=_const(1.0), d2f=_const(0.0),
            g=lambda nu: 1.0 - 1.0 / np.asarray(nu, dtype=float),
            dg=lambda nu: 1.0 / np.asarray(nu, dtype=float) ** 2,
            d2g=lambda nu: -2.0 / np.asarray(nu, dtype=float) ** 3,
            domain=(1.0, np.inf), nu0=nu0, label="K_2HPRIME",
            I=lambda nu: -(r(nu) - 1.0) - np.log(r(nu)),
            J=lambda nu: (r(nu) - 1.0) - np.log(0.5 * (r(nu) + 1.0)),
        )
        pde = _exp_dependent("K_2HPRIME", lambda lam: np.full_like(np.asarray(lam, dtype=float), 2.0), "2")
        sub = Substitution(
            "ν = (λ − 4)/(λ − 2)",
            to_lambda=lambda nu: 2.0 * (np.asarray(nu, dtype=float) - 2.0) / (np.asarray(nu, dtype=float) - 1.0),
            to_nu=lambda lam: (np.asarray(lam, dtype=float) - 4.0) / (np.asarray(lam, dtype=float) - 2.0),
        )
        basic = BasicClass(
            id="K_2HPRIME", index=9, params={}, relation="K = 2H′", convention="ν₁ = ν − 1, ν₂ = (ν − 1)/ν",
            substitution=sub, pde=pde, nu0=nu0, a_const=1.0, b_const=0.5, domain=pair.domain,
        )
        return basic, pair

    # (10) K = beta H' + gamma, gamma < 0
    def _k_beta_hprime_gamma(self, params):
        beta = float(params.get("beta", np.nan))
        gamma = float(params.get("gamma", np.nan))
        _require(np.isfinite(beta) and beta != 0.0, f"K_BETA_HPRIME_GAMMA requires beta != 0, got {beta}")
        _require(np.isfinite(gamma) and gamma < 0.0, f"K_BETA_HPRIME_GAMMA requires gamma < 0, got {gamma}")
        root = np.sqrt(-gamma)
        disc = beta * beta - 4.0 * gamma
        nu0 = 0.5 * beta
        domain = (0.0, np.inf) if beta > 0 else (-np.inf, 0.0)

        def lam_of(nu):
            return np.asarray(nu, dtype=float) - 0.5 * beta

        def arc(lam):
            return np.arctan(np.asarray(lam, dtype=float) / root) / root

        def log_q(lam):
            lam = np.asarray(lam, dtype=float)
            return 0.5 * np.log((lam * lam - gamma) / (-gamma))

        def rhs(lam):
            lam = np.asarray(lam, dtype=float)
            return -0.5 * beta * gamma * lam * (beta * lam + 2.0 * gamma) / (lam * lam - gamma)

        pair = WeingartenPair(
            f=lambda nu: lam_of(nu), df=_const(1.0), d2f=_const(0.0),
            g=lambda nu: (beta * lam_of(nu) + 2.0 * gamma) / (2.0 * np.asarray(nu, dtype=float)),
            dg=lambda nu: disc / (4.0 * np.asarray(nu, dtype=float) ** 2),
            d2g=lambda nu: -disc / (2.0 * np.asarray(nu, dtype=float) ** 3),
            domain=domain, nu0=nu0, label="K_BETA_HPRIME_GAMMA",
            I=lambda nu: log_q(lam_of(nu)) + 0.5 * beta * arc(lam_of(nu)),
            J=lambda nu: (-np.log(np.abs(np.asarray(nu, dtype=float) / nu0))
                          + log_q(lam_of(nu)) - 0.5 * beta * arc(lam_of(nu))),
        )
        pde = NaturalPdeDescriptor(
            class_id="K_BETA_HPRIME_GAMMA", operator=OP_WAVE_STAR,
            dependent="e^(βℐ)", reciprocal="e^(−βℐ)",
            to_w=lambda lam: np.exp(beta * arc(lam)),
            from_w=lambda w: root * np.tan(root * np.log(w) / beta),
            rhs=rhs, rhs_text=f"−(βγ/2) λ(βλ + 2γ)/(λ² − γ), β={beta:g}, γ={gamma:g}",
        )
        sub = Substitution("λ = ν − β/2", to_lambda=lam_of, to_nu=lambda lam: np.asarray(lam, dtype=float) + 0.5 * beta)
        basic = BasicClass(
            id="K_BETA_HPRIME_GAMMA", index=10, params={"beta": beta, "gamma": gamma},
            relation=f"K = {beta:g} H′ + ({gamma:g})",
            convention="ν₁ = ν − β/2, ν₂ = (β(ν − β/2) + 2γ)/(2ν)",
            substitution=sub, pde=pde, nu0=nu0,
            a_const=float(2.0 / np.sqrt(disc)), b_const=float(2.0 / abs(beta)), domain=domain,
            notes="ℐ = arctan(λ/√−γ)/√−γ",
        )
        return basic, pair


def linear_fractional_pair(A: float, B: float, C: float, D: float,
                           domain: Tuple[float, float], nu0: Optional[float] = None) -> WeingartenPair:
    """g(nu) = nu, f(nu) = (A nu + B)/(C nu + D)"""
    det = B * C - A * D
    if det == 0.0:
        raise PreconditionError("linear fractional pair requires BC - AD != 0")
    if A == D and B == 0.0 and C == 0.0:
        raise PreconditionError("the case A = D, B = C = 0 is excluded")
    lo, hi = domain
    if not lo < hi:
        raise PreconditionError(f"empty domain {domain}")
    if C != 0.0:
        pole = -D / C
        if lo < pole < hi:
            raise PreconditionError(f"pole nu={pole:g} of the fraction inside {domain}")
    if nu0 is None:
        nu0 = 0.5 * (lo + hi) if np.isfinite(lo) and np.isfinite(hi) else (lo + 1.0 if np.isfinite(lo) else hi - 1.0)

    def den(nu):
        return C * np.asarray(nu, dtype=float) + D

    pair = WeingartenPair(
        f=lambda nu: (A * np.asarray(nu, dtype=float) + B) / den(nu),
        df=lambda nu: -det / den(nu) ** 2,
        d2f=lambda nu: 2.0 * C * det / den(nu) ** 3,
        g=_identity, dg=lambda nu: np.ones_like(np.asarray(nu, dtype=float)), d2g=lambda nu: np.zeros_like(np.asarray(nu, dtype=float)),
        domain=(float(lo), float(hi)), nu0=float(nu0), label=f"LF({A:g},{B:g},{C:g},{D:g})",
    )
    pair.check_domain(DOMAIN_SAMPLES)
    return pair


def lemma_residual(A: float, B: float, C: float, D: float, nu) -> np.ndarray:
    """delta K - alpha H - beta H' - gamma for g = nu, f = (A nu + B)/(C nu + D)"""
    nu = np.asarray(nu, dtype=float)
    f = (A * nu + B) / (C * nu + D)
    alpha, beta, gamma, delta = A - D, -(A + D), B, C
    K, H, Hp = f * nu, 0.5 * (f + nu), 0.5 * (f - nu)
    return delta * K - alpha * H - beta * Hp - gamma


class _QuadraturePotential:
    """I and J from nu0 by adaptive quadrature"""

    def __init__(self, pair: WeingartenPair):
        self.pair = pair

    def dI(self, nu):
        p = self.pair
        return p.df(nu) / (p.f(nu) - p.g(nu))

    def dJ(self, nu):
        p = self.pair
        return p.dg(nu) / (p.g(nu) - p.f(nu))

    def _scalar(self, integrand, nu: float) -> float:
        value, abserr, info, *warning = quad(integrand, self.pair.nu0, nu, epsrel=QUAD_RTOL, epsabs=1e-14,
                                             limit=200, full_output=1)
        if warning:
            raise NumericalError(f"quadrature did not converge at nu={nu}: {warning[0]}")
        return value

    def _batch(self, nu: np.ndarray) -> np.ndarray:
        """Both potentials at many points through one dense ODE solve per side of nu0"""
        nu0 = self.pair.nu0
        values, inverse = np.unique(nu.ravel(), return_inverse=True)
        out = np.zeros((values.size, 2))

        def rhs(t, y):
            return [self.dI(t), self.dJ(t)]

        for side in (values > nu0, values < nu0):
            if not np.any(side):
                continue
            pts = values[side]
            if pts[0] < nu0:
                pts = pts[::-1]
            sol = solve_ivp(rhs, (nu0, pts[-1]), [0.0, 0.0], method="DOP853", t_eval=pts,
                            rtol=QUAD_RTOL, atol=1e-13)
            if not sol.success:
                raise NumericalError(f"potential integration failed: {sol.message}")
            res = sol.y.T
            if values[side][0] < nu0:
                res = res[::-1]
            out[side] = res
        return out[inverse].reshape(nu.shape + (2,))

    def evaluate(self, nu, which: int):
        arr = np.asarray(nu, dtype=float)
        if not np.all(self.pair.contains(arr)):
            raise PreconditionError(f"potential requested outside domain {self.pair.domain}")
        if arr.ndim == 0:
            integrand = self.dI if which == 0 else self.dJ
            return self._scalar(integrand, float(arr))
        return self._batch(arr)[..., which]


def potentials(pair: WeingartenPair) -> Potentials:
    quadrature = _QuadraturePotential(pair)
    if pair.I is not None and pair.J is not None:
        return Potentials(I=pair.I, J=pair.J, dI=quadrature.dI, dJ=quadrature.dJ, method="closed_form")
    logger.info("Using quadrature potentials for %s", pair.label)
    return Potentials(
        I=lambda nu: quadrature.evaluate(nu, 0),
        J=lambda nu: quadrature.evaluate(nu, 1),
        dI=quadrature.dI,
        dJ=quadrature.dJ,
        method="quadrature",
    )


def quadrature_potentials(pair: WeingartenPair) -> Potentials:
    """Quadrature path even when a closed form exists"""
    stripped = WeingartenPair(
        f=pair.f, df=pair.df, d2f=pair.d2f, g=pair.g, dg=pair.dg, d2g=pair.d2g,
        domain=pair.domain, nu0=pair.nu0, label=pair.label,
    )
    return potentials(stripped)


# Create a singleton instance
registry = WeingartenRegistry()


def make_basic_class(class_id: str, params: Optional[Dict[str, float]] = None) -> Tuple[BasicClass, WeingartenPair]:
    return registry.make_basic_class(class_id, params)

"""Linear curvature relations delta K = alpha H + beta H' + gamma.

Every admissible relation reduces, through a parallel offset and a
homothety, to one of the ten basic classes of the registry. Case labels
follow the decision tree: I.* for delta = 0, II.* for delta != 0.
"""
import logging
from typing import List, Optional, Tuple

import numpy as np

from ..errors import PreconditionError
from ..models.relation import ClassificationResult, FractionalCoeffs, LinearRelation
from ..models.weingarten import NaturalPdeDescriptor, WeingartenPair
from .parallel import parallel_sign, parallel_weingarten
from .weingarten import make_basic_class

logger = logging.getLogger(__name__)

ZERO_TOL = 1e-12


def coeffs_to_relation(fc: FractionalCoeffs) -> LinearRelation:
    fc.require_admissible()
    rel = LinearRelation(fc.A - fc.D, -(fc.A + fc.D), fc.B, fc.C)
    rel.require_admissible()
    return rel


def relation_to_coeffs(rel: LinearRelation) -> FractionalCoeffs:
    rel.require_admissible()
    fc = FractionalCoeffs(
        A=0.5 * (rel.alpha - rel.beta),
        B=rel.gamma,
        C=rel.delta,
        D=-0.5 * (rel.alpha + rel.beta),
    )
    fc.require_admissible()
    return fc


def basic_relation(class_id: str, params: Optional[dict] = None) -> LinearRelation:
    """Canonical relation of a basic class"""
    params = params or {}
    beta = params.get("beta")
    gamma = params.get("gamma")
    table = {
        "H0": (1.0, 0.0, 0.0, 0.0),
        "CMC_HALF": (1.0, 0.0, -0.5, 0.0),
        "HPRIME1": (0.0, 1.0, -1.0, 0.0),
        "K_MINUS1": (0.0, 0.0, -1.0, 1.0),
        "K_2HPRIME": (0.0, 2.0, 0.0, 1.0),
    }
    if class_id in table:
        return LinearRelation(*table[class_id])
    if class_id in ("H_BETA_HPRIME_GT1", "H_BETA_HPRIME_LT1"):
        return LinearRelation(1.0, -beta, 0.0, 0.0)
    if class_id in ("H_BETA_HPRIME_PLUS1_GT1", "H_BETA_HPRIME_PLUS1_LT1"):
        return LinearRelation(1.0, -beta, -1.0, 0.0)
    if class_id == "K_BETA_HPRIME_GAMMA":
        return LinearRelation(0.0, beta, gamma, 1.0)
    raise PreconditionError(f"unknown basic class '{class_id}'")


def reduced_relation(rel: LinearRelation, a: float, eps: int = 1) -> LinearRelation:
    """Relation satisfied by the parallel surface at distance a.

    (delta - a alpha - a^2 gamma) K = eps (alpha + 2 a gamma) H + eps beta H' + gamma
    """
    if eps not in (-1, 1):
        raise PreconditionError(f"eps must be +1 or -1, got {eps}")
    return LinearRelation(
        alpha=eps * (rel.alpha + 2.0 * a * rel.gamma),
        beta=eps * rel.beta,
        gamma=rel.gamma,
        delta=rel.delta - a * rel.alpha - a * a * rel.gamma,
    )


def _offset_roots(alpha: float, gamma: float) -> List[float]:
    """Roots of gamma a^2 + alpha a - 1 = 0, smaller |a| first"""
    if gamma == 0:
        return [1.0 / alpha]
    root = np.sqrt(alpha * alpha + 4.0 * gamma)
    q = -0.5 * (alpha + (1.0 if alpha >= 0 else -1.0) * root)
    return sorted([q / gamma, -1.0 / q], key=abs)


class _Classifier:
    def __init__(self, rel: LinearRelation, pair: Optional[WeingartenPair], tol: float):
        self.rel = rel
        self.pair = pair
        self.tol = tol
        self.trace: List[str] = []
        self.notes: List[str] = []

    def zero(self, x: float, ref: LinearRelation) -> bool:
        return abs(x) <= self.tol * float(np.max(np.abs(ref.as_array())))

    def _eps(self, a: float) -> int:
        if a == 0 or self.pair is None:
            return 1
        return parallel_sign(self.pair, a)

    def _result(self, class_id: str, params: dict, reduced: LinearRelation, a: float, eps: int,
                scale: float) -> ClassificationResult:
        basic, _ = make_basic_class(class_id, params or None)
        return ClassificationResult.create(basic, self.rel, reduced, self.trace, offset_a=a, eps=eps,
                                           scale=float(scale), notes=self.notes)

    def run(self) -> ClassificationResult:
        rel = self.rel
        if self.zero(rel.delta, rel):
            return self.case_one(LinearRelation(rel.alpha, rel.beta, rel.gamma, 0.0), 0.0, 1)
        return self.case_two(rel.normalized())

    def case_one(self, rel: LinearRelation, a: float, eps: int) -> ClassificationResult:
        """0 = alpha H + beta H' + gamma"""
        alpha, beta, gamma = rel.alpha, rel.beta, rel.gamma
        if self.zero(alpha, rel):
            if self.zero(gamma, rel):
                raise PreconditionError("the relation beta H' = 0 describes umbilic points and is excluded")
            self.trace.append("I.1")
            return self._result("HPRIME1", {}, rel, a, eps, -beta / gamma)
        if self.zero(gamma, rel):
            b = -beta / alpha
            if self.zero(beta, rel):
                self.trace.append("I.2.3")
                return self._result("H0", {}, rel, a, eps, 1.0)
            if b * b == 1.0:
                raise PreconditionError("H = +-H' is not admissible")
            if b * b > 1.0:
                self.trace.append("I.2.1")
                return self._result("H_BETA_HPRIME_GT1", {"beta": b}, rel, a, eps, 1.0)
            self.trace.append("I.2.2")
            return self._result("H_BETA_HPRIME_LT1", {"beta": b}, rel, a, eps, 1.0)
        if self.zero(beta, rel):
            self.trace.append("I.3")
            return self._result("CMC_HALF", {}, rel, a, eps, -alpha / (2.0 * gamma))
        b = -beta / alpha
        if b * b == 1.0:
            raise PreconditionError("H = +-H' + c is not admissible")
        self.trace.append("I.4.1" if b * b > 1.0 else "I.4.2")
        class_id = "H_BETA_HPRIME_PLUS1_GT1" if b * b > 1.0 else "H_BETA_HPRIME_PLUS1_LT1"
        return self._result(class_id, {"beta": b}, rel, a, eps, -alpha / gamma)

    def case_two(self, rel: LinearRelation) -> ClassificationResult:
        """K = alpha H + beta H' + gamma"""
        alpha, beta, gamma = rel.alpha, rel.beta, rel.gamma
        if self.zero(alpha, rel) and self.zero(gamma, rel):
            self.trace.append("II.5")
            return self._result("K_2HPRIME", {}, rel, 0.0, 1, 2.0 / beta)

        if alpha * alpha + 4.0 * gamma < 0:
            a = -alpha / (2.0 * gamma) + 0.0
            eps = self._eps(a)
            reduced = reduced_relation(rel, a, eps)
            kappa = reduced.delta
            b, g = reduced.beta / kappa, gamma / kappa
            if self.zero(beta, rel):
                self.trace.append("II.7.1")
                return self._result("K_MINUS1", {}, reduced, a, eps, 1.0 / np.sqrt(-g))
            self.trace.append("II.7.2")
            return self._result("K_BETA_HPRIME_GAMMA", {"beta": b, "gamma": g}, reduced, a, eps, 1.0)

        self.trace.append("II.6")
        a = self._pick_root(_offset_roots(alpha, gamma))
        eps = self._eps(a)
        self.trace.append(f"eps={eps:+d}")
        reduced = reduced_relation(rel, a, eps)
        return self.case_one(LinearRelation(reduced.alpha, reduced.beta, reduced.gamma, 0.0), a, eps)

    def _pick_root(self, roots: List[float]) -> float:
        if self.pair is None or len(roots) == 1:
            return roots[0]
        try:
            parallel_weingarten(self.pair, roots[0])
            return roots[0]
        except PreconditionError as e:
            logger.info("Offset a=%g is singular for %s (%s); trying a=%g", roots[0], self.pair.label, e, roots[1])
            self.notes.append(f"offset {roots[0]:.6g} singular, used {roots[1]:.6g}")
            parallel_weingarten(self.pair, roots[1])
            return roots[1]


def classify(rel: LinearRelation, pair: Optional[WeingartenPair] = None,
             tol: float = ZERO_TOL) -> ClassificationResult:
    """Basic class, reducing offset and homothety factor of an admissible relation.

    With a pair, eps is read from the actual parallel pair and a singular
    case-6 root falls back to the other one.
    """
    rel.require_admissible()
    return _Classifier(rel, pair, tol).run()


def reduction_residual(result: ClassificationResult) -> float:
    """Projective distance between the reduced, rescaled input and the basic relation"""
    r = reduced_relation(result.input.normalized(), result.offset_a, result.eps)
    r = r.scaled(result.similarity_scale).as_array()
    b = basic_relation(result.basic.id, result.params).as_array()
    r, b = r / np.linalg.norm(r), b / np.linalg.norm(b)
    return float(min(np.linalg.norm(r - b), np.linalg.norm(r + b)))


def natural_pde_of(result: ClassificationResult) -> NaturalPdeDescriptor:
    return result.basic.pde


def fit_linear_relation(K, H, Hp) -> Tuple[LinearRelation, float]:
    """Least-squares relation through samples of K, H, H' and its RMS residual"""
    K, H, Hp = (np.ravel(np.asarray(x, dtype=float)) for x in (K, H, Hp))
    if not (K.size == H.size == Hp.size) or K.size < 4:
        raise PreconditionError("fitting a relation needs at least four matching samples")
    M = np.column_stack([K, -H, -Hp, -np.ones_like(K)])
    _, sing, vt = np.linalg.svd(M, full_matrices=False)
    v = vt[-1]
    v = v / v[np.argmax(np.abs(v))]
    rel = LinearRelation(alpha=float(v[1]), beta=float(v[2]), gamma=float(v[3]), delta=float(v[0]))
    rms = float(np.sqrt(np.mean(rel.residual(K, H, Hp) ** 2)))
    return rel, rms

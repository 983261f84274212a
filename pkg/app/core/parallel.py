"""Parallel surfaces z + a l and the transformation of their invariants.

With p_i = 1 - a nu_i and eps = sign(p_1 p_2) the offset surface has
principal curvatures eps nu_i / p_i and stays in natural parameters.
"""
import logging
from typing import Any, Dict, Iterable, List, Optional, Tuple

import numpy as np
from scipy.optimize import brentq

from ..config import DOMAIN_SAMPLES, OFFSET_TOL, RESIDUAL_MARGIN
from ..errors import PreconditionError, offending_nodes
from ..models.grid import GridField, ResidualReport
from ..models.lorentz import Motion
from ..models.surface import InvariantFields, ParallelOffset, SurfacePatch
from ..models.weingarten import WeingartenPair
from ..utils.stencils import interior
from .minkowski import apply_motion, motion_between
from .natural_pde import check_field, residual_curvature_form
from .reconstruction import metric_from_nu
from .surface_invariants import check_natural_criterion
from .weingarten import potentials

logger = logging.getLogger(__name__)


def _scalar_or_array(x):
    x = np.asarray(x, dtype=float)
    return float(x) if x.ndim == 0 else x


def _offset_sign(p1: np.ndarray, p2: np.ndarray) -> int:
    """eps shared by every node; singular or mixed-sign nodes are rejected"""
    singular = (np.abs(p1) <= OFFSET_TOL) | (np.abs(p2) <= OFFSET_TOL)
    if np.any(singular):
        raise PreconditionError("singular parallel offset: (1 - a nu1)(1 - a nu2) = 0",
                                nodes=offending_nodes(np.atleast_2d(singular)))
    signs = np.sign(p1 * p2)
    eps = int(np.ravel(signs)[0])
    if np.any(signs != eps):
        raise PreconditionError("sign of (1 - a nu1)(1 - a nu2) changes across the patch",
                                nodes=offending_nodes(np.atleast_2d(signs != eps)))
    return eps


def parallel_curvatures(nu1, nu2, a: float):
    """(nu1_bar, nu2_bar, eps) of the surface at distance a"""
    nu1 = np.asarray(nu1, dtype=float)
    nu2 = np.asarray(nu2, dtype=float)
    p1, p2 = 1.0 - a * nu1, 1.0 - a * nu2
    eps = _offset_sign(p1, p2)
    return _scalar_or_array(eps * nu1 / p1), _scalar_or_array(eps * nu2 / p2), eps


def inverse_parallel_curvatures(nu_bar, a: float, eps: int):
    """nu = eps nu_bar / (1 + a eps nu_bar)"""
    if eps not in (-1, 1):
        raise PreconditionError(f"eps must be +1 or -1, got {eps}")
    nu_bar = np.asarray(nu_bar, dtype=float)
    den = 1.0 + a * eps * nu_bar
    if np.any(np.abs(den) <= OFFSET_TOL):
        raise PreconditionError("1 + a eps nu_bar vanishes")
    return _scalar_or_array(eps * nu_bar / den)


def parallel_KHH(K_bar, H_bar, Hp_bar, a: float, eps: int):
    """K, H, H' of the original surface from the invariants of its parallel surface"""
    K_bar = np.asarray(K_bar, dtype=float)
    H_bar = np.asarray(H_bar, dtype=float)
    Hp_bar = np.asarray(Hp_bar, dtype=float)
    den = 1.0 + 2.0 * a * eps * H_bar + a * a * K_bar
    if np.any(np.abs(den) <= OFFSET_TOL):
        raise PreconditionError("1 + 2 a eps H + a^2 K vanishes")
    return (
        _scalar_or_array(K_bar / den),
        _scalar_or_array((eps * H_bar + a * K_bar) / den),
        _scalar_or_array(eps * Hp_bar / den),
    )


def offset_patch(patch: SurfacePatch, a: float) -> SurfacePatch:
    """Parallel patch z + a l with frames and invariants transformed node-wise"""
    if a == 0:
        raise PreconditionError("parallel offset must be nonzero")
    f = patch.fields
    p1, p2 = 1.0 - a * f.nu1, 1.0 - a * f.nu2
    eps = _offset_sign(p1, p2)
    s1, s2 = np.sign(p1), np.sign(p2)

    frames = patch.frames.copy()
    frames[..., 0, :] *= s1[..., None]
    frames[..., 1, :] *= s2[..., None]
    frames[..., 2, :] *= eps
    fields = InvariantFields(
        nu1=eps * f.nu1 / p1,
        nu2=eps * f.nu2 / p2,
        gamma1=s2 * f.gamma1 / p1,
        gamma2=s1 * f.gamma2 / p2,
        E=p1 ** 2 * f.E,
        G=p2 ** 2 * f.G,
    )
    return SurfacePatch(
        z=patch.z + a * patch.normals,
        frames=frames,
        fields=fields,
        grid=patch.grid,
        renormalizations=patch.renormalizations,
        seed_index=patch.seed_index,
        offset=ParallelOffset(float(a), eps),
    )


def parallel_sign(pair: WeingartenPair, a: float) -> int:
    """eps of the parallel pair, read at nu0"""
    pf0 = 1.0 - a * float(pair.f(pair.nu0))
    pg0 = 1.0 - a * float(pair.g(pair.nu0))
    if abs(pf0) <= OFFSET_TOL or abs(pg0) <= OFFSET_TOL:
        raise PreconditionError(f"offset a={a:g} is singular at nu0={pair.nu0:g}")
    return int(np.sign(pf0 * pg0))


def _edge(pair: WeingartenPair, a: float, end: float, direction: int) -> float:
    """Last point from nu0 towards end where 1 - af and 1 - ag keep their sign"""
    nu0 = pair.nu0
    if np.isfinite(end):
        steps = np.linspace(0.0, 1.0, DOMAIN_SAMPLES)[1:-1]
        pts = nu0 + (end - nu0) * steps
    else:
        pts = nu0 + direction * max(1.0, abs(nu0)) * np.logspace(-6, 6, DOMAIN_SAMPLES)
    pts = np.concatenate([[nu0], pts])

    def pf(nu):
        return 1.0 - a * pair.f(nu)

    def pg(nu):
        return 1.0 - a * pair.g(nu)

    vf, vg = pf(pts), pg(pts)
    bad = (np.sign(vf) != np.sign(vf[0])) | (np.sign(vg) != np.sign(vg[0])) | ~np.isfinite(vf) | ~np.isfinite(vg)
    if not np.any(bad):
        return end
    k = int(np.argmax(bad))
    lo, hi = pts[k - 1], pts[k]
    roots = []
    for fn, vals in ((pf, vf), (pg, vg)):
        if np.isfinite(vals[k]) and np.sign(vals[k]) != np.sign(vals[0]):
            roots.append(brentq(fn, lo, hi, xtol=1e-14))
    if not roots:
        return float(lo)
    return float(min(roots, key=lambda r: abs(r - nu0)))


def parallel_weingarten(pair: WeingartenPair, a: float) -> WeingartenPair:
    """Weingarten pair of the parallel surface, with closed-form potentials shifted by log|1 - af|"""
    if a == 0:
        raise PreconditionError("parallel offset must be nonzero")
    eps = parallel_sign(pair, a)
    nu0 = pair.nu0
    pf0 = 1.0 - a * float(pair.f(nu0))
    pg0 = 1.0 - a * float(pair.g(nu0))
    lo, hi = pair.domain
    domain = (_edge(pair, a, lo, -1), _edge(pair, a, hi, +1))
    if domain != tuple(pair.domain):
        logger.info("Parallel pair at a=%g lives on %s (was %s)", a, domain, pair.domain)
    pot = potentials(pair)

    def pf(nu):
        return 1.0 - a * pair.f(nu)

    def pg(nu):
        return 1.0 - a * pair.g(nu)

    bar = WeingartenPair(
        f=lambda nu: eps * pair.f(nu) / pf(nu),
        df=lambda nu: eps * pair.df(nu) / pf(nu) ** 2,
        d2f=lambda nu: eps * (pair.d2f(nu) * pf(nu) + 2.0 * a * pair.df(nu) ** 2) / pf(nu) ** 3,
        g=lambda nu: eps * pair.g(nu) / pg(nu),
        dg=lambda nu: eps * pair.dg(nu) / pg(nu) ** 2,
        d2g=lambda nu: eps * (pair.d2g(nu) * pg(nu) + 2.0 * a * pair.dg(nu) ** 2) / pg(nu) ** 3,
        domain=domain,
        nu0=nu0,
        label=f"{pair.label}|a={a:g}",
        I=lambda nu: pot.I(nu) - np.log(np.abs(pf(nu) / pf0)),
        J=lambda nu: pot.J(nu) - np.log(np.abs(pg(nu) / pg0)),
    )
    bar.check_domain(DOMAIN_SAMPLES)
    return bar


def parallel_constants(pair: WeingartenPair, a: float, a_const: float = 1.0,
                       b_const: float = 1.0) -> Tuple[float, float]:
    parallel_sign(pair, a)
    pf0 = 1.0 - a * float(pair.f(pair.nu0))
    pg0 = 1.0 - a * float(pair.g(pair.nu0))
    return a_const / abs(pf0), b_const / abs(pg0)


def parallel_field(pair: WeingartenPair, field: GridField, a: float) -> GridField:
    """The same nu samples read with the constants of the parallel surface"""
    a_bar, b_bar = parallel_constants(pair, a, field.a_const, field.b_const)
    return field.with_values(field.values, a_const=a_bar, b_const=b_bar, class_id=f"{field.class_id}|a={a:g}")


def verify_parallel_pde(pair: WeingartenPair, field: GridField, a: float,
                        margin: int = RESIDUAL_MARGIN) -> ResidualReport:
    """Parallel residual against eps * residual / ((1 - af)(1 - ag))^2, relative to max|fg(f - g)|"""
    bar = parallel_weingarten(pair, a)
    eps = parallel_sign(pair, a)
    bar_field = parallel_field(pair, field, a)
    check_field(bar, bar_field)
    original = residual_curvature_form(pair, field, margin)
    parallel = residual_curvature_form(bar, bar_field, margin)

    nu = interior(field.values, margin)
    scale = ((1.0 - a * pair.f(nu)) * (1.0 - a * pair.g(nu))) ** 2
    predicted = eps * original.field / scale
    fb, gb = bar.f(nu), bar.g(nu)
    ref = max(float(np.max(np.abs(fb * gb * (fb - gb)))), np.finfo(float).tiny)
    return ResidualReport.create(
        (parallel.field - predicted) / ref,
        {"parallel": parallel.field, "original": original.field, "predicted": predicted},
    )


def natural_invariance(pair: WeingartenPair, field: GridField, a: float) -> Dict[str, Any]:
    """sqrt(-EG)(f - g) before and after the offset"""
    bar = parallel_weingarten(pair, a)
    bar_field = parallel_field(pair, field, a)
    nu = field.values
    E, G = metric_from_nu(pair, field)
    Eb, Gb = metric_from_nu(bar, bar_field)
    c = np.sqrt(-E * G) * (pair.f(nu) - pair.g(nu))
    cb = np.sqrt(-Eb * Gb) * (bar.f(nu) - bar.g(nu))
    return {
        "max_rel": float(np.max(np.abs(cb - c)) / np.max(np.abs(c))),
        "original": check_natural_criterion(E, G, pair.f(nu), pair.g(nu)),
        "parallel": check_natural_criterion(Eb, Gb, bar.f(nu), bar.g(nu)),
    }


def align_patches(p: SurfacePatch, q: SurfacePatch, node: Tuple[int, int] = (0, 0)) -> Tuple[Motion, float]:
    """Motion matching q's framed point at node onto p's, and the worst position gap after it"""
    if p.shape != q.shape:
        raise PreconditionError(f"patches differ in shape: {p.shape} vs {q.shape}")
    i, j = node
    m = motion_between(q.frame_at(i, j), q.z[i, j], p.frame_at(i, j), p.z[i, j])
    moved = apply_motion(m, q.z)
    return m, float(np.max(np.linalg.norm(moved - p.z, axis=-1)))


def parallel_family(patch: SurfacePatch, offsets: Iterable[float], pair: Optional[WeingartenPair] = None,
                    field: Optional[GridField] = None) -> Tuple[List[Dict[str, Any]], Dict[float, SurfacePatch]]:
    """Sweep over offsets: one row per a, singular offsets reported rather than raised"""
    rows: List[Dict[str, Any]] = []
    patches: Dict[float, SurfacePatch] = {}
    for a in offsets:
        a = float(a)
        row: Dict[str, Any] = {"a": a, "eps": "", "status": "ok", "max_residual": "",
                               "criterion_mean": "", "criterion_spread": ""}
        try:
            bar = offset_patch(patch, a)
        except PreconditionError as e:
            logger.warning("Offset a=%g skipped: %s", a, e)
            row["status"] = "singular"
            rows.append(row)
            continue
        f = bar.fields
        mean, spread = check_natural_criterion(f.E, f.G, f.nu1, f.nu2)
        row.update(eps=bar.offset.eps, criterion_mean=mean, criterion_spread=spread)
        if pair is not None and field is not None:
            try:
                row["max_residual"] = residual_curvature_form(parallel_weingarten(pair, a),
                                                              parallel_field(pair, field, a)).max_abs
            except PreconditionError as e:
                logger.warning("No parallel residual at a=%g: %s", a, e)
        rows.append(row)
        patches[a] = bar
    return rows, patches

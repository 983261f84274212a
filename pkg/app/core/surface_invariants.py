import logging
from typing import Optional, Tuple

import numpy as np

from ..config import KAPPA2_TOL, NET_TOL, RESIDUAL_MARGIN
from ..errors import PreconditionError, offending_nodes
from ..models.grid import ResidualReport
from ..models.surface import FundamentalForms, InvariantFields, PrincipalLineGeometry, SurfacePatch
from ..utils.stencils import d1, d2, d11, interior
from .minkowski import lorentz_cross, lorentz_dot

logger = logging.getLogger(__name__)


def fundamental_forms(z: np.ndarray, du: float, dv: float, normals: Optional[np.ndarray] = None) -> FundamentalForms:
    """First and second fundamental forms of a grid of positions (n, m, 3)"""
    z = np.asarray(z, dtype=float)
    if z.ndim != 3 or z.shape[2] != 3 or min(z.shape[:2]) < 3:
        raise PreconditionError(f"positions must have shape (n, m, 3) with n, m >= 3, got {z.shape}")
    if not np.all(np.isfinite(z)):
        raise PreconditionError("positions must be finite", nodes=offending_nodes(~np.all(np.isfinite(z), axis=-1)))
    z_u, z_v = d1(z, du, 0), d1(z, dv, 1)
    z_uu, z_vv, z_uv = d2(z, du, 0), d2(z, dv, 1), d11(z, du, dv)

    if normals is None:
        c = lorentz_cross(z_u, z_v)
        norm_sq = lorentz_dot(c, c)
        scale = np.abs(lorentz_dot(z_u, z_u) * lorentz_dot(z_v, z_v))
        degenerate = norm_sq <= 1e-12 * np.maximum(scale, 1e-300)
        if np.any(degenerate):
            raise PreconditionError("degenerate tangent plane", nodes=offending_nodes(degenerate))
        normals = c / np.sqrt(norm_sq)[..., None]

    return FundamentalForms(
        E=lorentz_dot(z_u, z_u),
        F=lorentz_dot(z_u, z_v),
        G=lorentz_dot(z_v, z_v),
        L=lorentz_dot(normals, z_uu),
        M=lorentz_dot(normals, z_uv),
        N=lorentz_dot(normals, z_vv),
        du=du,
        dv=dv,
        normals=normals,
    )


def principal_data(forms: FundamentalForms, net_tol: float = NET_TOL) -> InvariantFields:
    """nu1 = L/E, nu2 = N/G and the principal geodesic curvatures"""
    E, G = forms.E, forms.G
    if np.any(E >= 0) or np.any(G <= 0):
        raise PreconditionError("principal data needs E < 0 < G", nodes=offending_nodes((E >= 0) | (G <= 0)))
    scale = np.sqrt(-E * G)
    mixed_F = float(np.max(np.abs(forms.F)) / np.max(scale))
    mixed_M = float(np.max(np.abs(forms.M)) / np.max(np.abs(forms.L) + np.abs(forms.N) + scale))
    if mixed_F > net_tol or mixed_M > net_tol:
        raise PreconditionError(
            f"coordinates are not a principal net (|F| {mixed_F:.2e}, |M| {mixed_M:.2e}, tol {net_tol:.1e})",
            details={"mixed_F": mixed_F, "mixed_M": mixed_M},
        )
    E_v = d1(E, forms.dv, 1)
    G_u = d1(G, forms.du, 0)
    return InvariantFields(
        nu1=forms.L / E,
        nu2=forms.N / G,
        gamma1=E_v / (2.0 * E * np.sqrt(G)),
        gamma2=-G_u / (2.0 * G * np.sqrt(-E)),
        E=E,
        G=G,
    )


def patch_invariants(patch: SurfacePatch, net_tol: float = NET_TOL) -> InvariantFields:
    """Invariants recovered from the positions of a patch alone"""
    forms = fundamental_forms(patch.z, patch.grid.du, patch.grid.dv)
    return principal_data(forms, net_tol)


def curvature_invariants(nu1, nu2, signed: bool = False):
    """K, H, H' and the mask of nodes where H^2 - K = 0"""
    nu1 = np.asarray(nu1, dtype=float)
    nu2 = np.asarray(nu2, dtype=float)
    K = nu1 * nu2
    H = 0.5 * (nu1 + nu2)
    Hp = 0.5 * (nu1 - nu2) if signed else 0.5 * np.abs(nu1 - nu2)
    flagged = nu1 == nu2
    if np.any(flagged):
        logger.warning("H' = 0 at %d node(s)", int(np.count_nonzero(flagged)))
    return K, H, Hp, flagged


def _gap(fields: InvariantFields) -> np.ndarray:
    gap = fields.nu1 - fields.nu2
    if np.any(gap == 0):
        raise PreconditionError("nu1 - nu2 vanishes", nodes=offending_nodes(gap == 0))
    return gap


def check_codazzi(fields: InvariantFields, du: float, dv: float, margin: int = RESIDUAL_MARGIN,
                  exclude: Optional[np.ndarray] = None) -> ResidualReport:
    gap = _gap(fields)
    r1 = fields.gamma1 + d1(fields.nu1, dv, 1) / (np.sqrt(fields.G) * gap)
    r2 = fields.gamma2 + d1(fields.nu2, du, 0) / (np.sqrt(-fields.E) * gap)
    r1, r2 = interior(r1, margin, exclude), interior(r2, margin, exclude)
    return ResidualReport.create(np.ma.maximum(np.abs(r1), np.abs(r2)), {"gamma1": r1, "gamma2": r2})


def check_gauss(fields: InvariantFields, du: float, dv: float, margin: int = 2,
                exclude: Optional[np.ndarray] = None) -> ResidualReport:
    """(gamma2)_u / sqrt(-E) + (gamma1)_v / sqrt(G) + gamma1^2 - gamma2^2 + nu1 nu2

    gamma is already a difference of nu, so the two outer rings of nodes
    carry nested one-sided stencils and the default margin drops them.
    """
    res = (
        d1(fields.gamma2, du, 0) / np.sqrt(-fields.E)
        + d1(fields.gamma1, dv, 1) / np.sqrt(fields.G)
        + fields.gamma1 ** 2
        - fields.gamma2 ** 2
        + fields.nu1 * fields.nu2
    )
    return ResidualReport.create(interior(res, margin, exclude))


def strong_regularity(fields: InvariantFields, du: float, dv: float) -> np.ndarray:
    """Nodes where (nu1 - nu2) gamma1 (nu1)_v < 0 and (nu1 - nu2) gamma2 (nu2)_u < 0"""
    gap = fields.nu1 - fields.nu2
    first = gap * fields.gamma1 * d1(fields.nu1, dv, 1)
    second = gap * fields.gamma2 * d1(fields.nu2, du, 0)
    return (first < 0) & (second < 0)


def check_natural_criterion(E, G, nu1, nu2) -> Tuple[float, float]:
    """Mean and relative spread of sqrt(-EG)(nu1 - nu2)"""
    c = np.sqrt(-np.asarray(E) * np.asarray(G)) * (np.asarray(nu1) - np.asarray(nu2))
    mean = float(np.mean(c))
    if mean == 0.0:
        return 0.0, float("inf")
    return mean, float(np.max(np.abs(c - mean)) / abs(mean))


def principal_line_geometry(fields: InvariantFields, du: float, dv: float, kappa2_tol: float = KAPPA2_TOL,
                            exclude: Optional[np.ndarray] = None) -> PrincipalLineGeometry:
    """Curvatures and torsions of the principal lines; torsions are NaN on `exclude`"""
    nu1, nu2, g1, g2 = fields.nu1, fields.nu2, fields.gamma1, fields.gamma2
    root_E = np.sqrt(-fields.E)
    root_G = np.sqrt(fields.G)

    kappa1_sq = nu1 ** 2 + g1 ** 2
    theta1 = np.unwrap(np.arctan2(g1, nu1), axis=0)
    tau1 = d1(theta1, du, 0) / root_E
    with np.errstate(divide="ignore", invalid="ignore"):
        tau1_alt = (nu1 * d1(g1, du, 0) - g1 * d1(nu1, du, 0)) / (root_E * kappa1_sq)
    tau1_alt = np.where(kappa1_sq > 0, tau1_alt, np.nan)

    gap2 = nu2 ** 2 - g2 ** 2
    defined = np.abs(gap2) > kappa2_tol
    eps2 = np.where(defined, np.sign(gap2), 0.0)
    kappa2_sq = eps2 * gap2
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(nu2 != 0, g2 / nu2, np.nan)
        tau2 = -eps2 * (nu2 ** 2 / kappa2_sq) * d1(ratio, dv, 1) / root_G
    tau2 = np.where(defined & (nu2 != 0), tau2, np.nan)
    if exclude is not None:
        tau1, tau1_alt, tau2 = (np.where(exclude, np.nan, t) for t in (tau1, tau1_alt, tau2))

    return PrincipalLineGeometry(
        kappa1_sq=kappa1_sq,
        kappa2_sq=kappa2_sq,
        tau1=tau1,
        tau1_alt=tau1_alt,
        tau2=tau2,
        theta1=theta1,
        eps2=eps2,
    )

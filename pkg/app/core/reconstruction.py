"""Surface reconstruction from a solution of the natural PDE.

The metric and the invariants come in closed form from nu; the frame
(X, Y, l) is then integrated with RK4, first along one coordinate line
through the seed and then along all lines of the other family at once.
"""
import logging
from typing import Dict, Optional, Tuple, Union

import numpy as np
from scipy.interpolate import CubicSpline

from ..config import (
    DRIFT_ABORT,
    PATCH_FRAME_TOL,
    RENORM_THRESHOLD,
    SEED_FRAME_TOL,
    VERIFY_TOL,
)
from ..errors import NumericalError, PreconditionError
from ..models.grid import GridField, ResidualReport
from ..models.lorentz import LorentzVec, Motion, MovingFrame
from ..models.surface import InvariantFields, SurfacePatch, VerificationReport
from ..models.weingarten import WeingartenPair
from ..utils.stencils import d1, interior
from .minkowski import (
    apply_motion,
    apply_motion_frame,
    check_frame,
    frame_drift,
    metric_gram_schmidt,
)
from .natural_pde import check_field, edge_influence, potential_fields
from .surface_invariants import fundamental_forms, principal_data
from .weingarten import potentials

logger = logging.getLogger(__name__)

ORDERS = ("v_first", "u_first")


def metric_from_nu(pair: WeingartenPair, field: GridField) -> Tuple[np.ndarray, np.ndarray]:
    """E = -a^-2 exp(-2I(nu)), G = b^-2 exp(-2J(nu))"""
    nu = check_field(pair, field)
    I, J = potential_fields(pair, nu)
    E = -np.exp(-2.0 * I) / field.a_const ** 2
    G = np.exp(-2.0 * J) / field.b_const ** 2
    return E, G


def invariants_from_nu(pair: WeingartenPair, field: GridField, form: str = "potential") -> InvariantFields:
    """Principal and geodesic curvatures of the surface carried by nu.

    form="potential" uses gamma1 = -b e^J I_v, gamma2 = a e^I J_u;
    form="curvature" spells out f', g' and f - g.
    """
    nu = check_field(pair, field)
    pot = potentials(pair)
    I, J = potential_fields(pair, nu, pot)
    a, b = abs(field.a_const), abs(field.b_const)
    E = -np.exp(-2.0 * I) / a ** 2
    G = np.exp(-2.0 * J) / b ** 2
    nu_u = d1(nu, field.du, 0)
    nu_v = d1(nu, field.dv, 1)
    f, g = pair.f(nu), pair.g(nu)
    if form == "potential":
        gamma1 = -b * np.exp(J) * pot.dI(nu) * nu_v
        gamma2 = a * np.exp(I) * pot.dJ(nu) * nu_u
    elif form == "curvature":
        gap = f - g
        gamma1 = np.exp(J) * (-b * pair.df(nu) / gap) * nu_v
        gamma2 = np.exp(I) * (-a * pair.dg(nu) / gap) * nu_u
    else:
        raise PreconditionError(f"unknown form '{form}'")
    return InvariantFields(nu1=f, nu2=g, gamma1=gamma1, gamma2=gamma2, E=E, G=G)


def _generators(fields: InvariantFields):
    """Per-node right-hand sides of F_u = A_u F and F_v = A_v F"""
    shape = fields.shape
    su = np.sqrt(-fields.E)
    sv = np.sqrt(fields.G)
    Au = np.zeros(shape + (3, 3))
    Au[..., 0, 1] = Au[..., 1, 0] = fields.gamma1
    Au[..., 0, 2] = Au[..., 2, 0] = -fields.nu1
    Au *= su[..., None, None]
    Av = np.zeros(shape + (3, 3))
    Av[..., 0, 1] = Av[..., 1, 0] = -fields.gamma2
    Av[..., 1, 2] = fields.nu2
    Av[..., 2, 1] = -fields.nu2
    Av *= sv[..., None, None]
    return Au, su, Av, sv


class _LineIntegrator:
    """RK4 along axis 0 for a batch of lines with shared step h"""

    def __init__(self, A: np.ndarray, s: np.ndarray, h: float, row: int,
                 renorm_threshold: float, drift_abort: float):
        n = A.shape[0]
        t = h * np.arange(n)
        self.n = n
        self.h = h
        self.row = row
        self.A = A
        self.s = s
        self.renorm_threshold = renorm_threshold
        self.drift_abort = drift_abort
        self.renormalizations = 0
        self._A_spline = CubicSpline(t, A.reshape(n, -1), axis=0)
        self._s_spline = CubicSpline(t, s, axis=0)
        self._batch_shape = A.shape[1:]

    def _mid(self, k: int, direction: int):
        t_mid = self.h * (k + 0.5 * direction)
        A_mid = self._A_spline(t_mid).reshape(self._batch_shape)
        return A_mid, self._s_spline(t_mid)

    def _step(self, F, z, k: int, direction: int):
        h = direction * self.h
        A0, s0 = self.A[k], self.s[k]
        A1, s1 = self.A[k + direction], self.s[k + direction]
        Am, sm = self._mid(k, direction)
        row = self.row

        def deriv(A, s, Fk):
            return np.einsum("bij,bjk->bik", A, Fk), s[:, None] * Fk[:, row, :]

        k1F, k1z = deriv(A0, s0, F)
        k2F, k2z = deriv(Am, sm, F + 0.5 * h * k1F)
        k3F, k3z = deriv(Am, sm, F + 0.5 * h * k2F)
        k4F, k4z = deriv(A1, s1, F + h * k3F)
        F_new = F + h * (k1F + 2.0 * k2F + 2.0 * k3F + k4F) / 6.0
        z_new = z + h * (k1z + 2.0 * k2z + 2.0 * k3z + k4z) / 6.0
        return self._control(F_new, k + direction), z_new

    def _control(self, F, k: int):
        if not np.all(np.isfinite(F)):
            raise NumericalError(f"non-finite frame at step {k}")
        drift = frame_drift(F)
        worst = float(np.max(drift))
        if worst > self.drift_abort:
            bad = np.flatnonzero(drift > self.drift_abort)
            raise NumericalError(f"frame drift {worst:.3e} exceeds {self.drift_abort:g} at step {k}",
                                 nodes=[(k, int(b)) for b in bad], details={"drift": worst})
        fix = drift > self.renorm_threshold
        if np.any(fix):
            F = F.copy()
            F[fix] = metric_gram_schmidt(F[fix])
            count = int(np.count_nonzero(fix))
            self.renormalizations += count
            logger.debug("Renormalized %d frame(s) at step %d (drift %.2e)", count, k, worst)
        return F

    def run(self, F0: np.ndarray, z0: np.ndarray, start: int):
        F = np.empty((self.n,) + F0.shape)
        z = np.empty((self.n,) + z0.shape)
        F[start], z[start] = F0, z0
        for k in range(start, self.n - 1):
            F[k + 1], z[k + 1] = self._step(F[k], z[k], k, +1)
        for k in range(start, 0, -1):
            F[k - 1], z[k - 1] = self._step(F[k], z[k], k, -1)
        return F, z


def _seed(seed_z, seed_frame) -> Tuple[np.ndarray, MovingFrame]:
    frame = seed_frame or MovingFrame.standard()
    report = check_frame(frame, SEED_FRAME_TOL)
    if not report.ok(SEED_FRAME_TOL):
        raise PreconditionError(f"seed frame is not a positive orthonormal frame (deviation {report.max_dev:.2e})")
    z0 = np.zeros(3) if seed_z is None else (seed_z.as_array() if isinstance(seed_z, LorentzVec) else np.asarray(seed_z, dtype=float))
    return z0, frame


def integrate_frame(fields: InvariantFields, grid: GridField, seed_z: Union[LorentzVec, np.ndarray, None] = None,
                    seed_frame: Optional[MovingFrame] = None, order: str = "v_first",
                    seed_index: Tuple[int, int] = (0, 0), renorm_threshold: float = RENORM_THRESHOLD,
                    drift_abort: float = DRIFT_ABORT) -> SurfacePatch:
    """Integrate X, Y, l and z over the grid from a seed node"""
    if order not in ORDERS:
        raise PreconditionError(f"unknown integration order '{order}'")
    fields.validate()
    if fields.shape != grid.shape:
        raise PreconditionError(f"invariant fields {fields.shape} do not match grid {grid.shape}")
    i0, j0 = seed_index
    n, m = fields.shape
    if not (0 <= i0 < n and 0 <= j0 < m):
        raise PreconditionError(f"seed index {seed_index} outside the grid")
    z0, frame = _seed(seed_z, seed_frame)
    F0 = frame.matrix()
    Au, su, Av, sv = _generators(fields)

    if order == "v_first":
        first = _LineIntegrator(Av[i0][:, None], sv[i0][:, None], grid.dv, 1, renorm_threshold, drift_abort)
        F_line, z_line = first.run(F0[None], z0[None], j0)
        second = _LineIntegrator(Au, su, grid.du, 0, renorm_threshold, drift_abort)
        frames, z = second.run(F_line[:, 0], z_line[:, 0], i0)
    else:
        first = _LineIntegrator(Au[:, j0][:, None], su[:, j0][:, None], grid.du, 0, renorm_threshold, drift_abort)
        F_line, z_line = first.run(F0[None], z0[None], i0)
        second = _LineIntegrator(np.swapaxes(Av, 0, 1), sv.T, grid.dv, 1, renorm_threshold, drift_abort)
        frames_t, z_t = second.run(F_line[:, 0], z_line[:, 0], j0)
        frames, z = np.swapaxes(frames_t, 0, 1), np.swapaxes(z_t, 0, 1)

    renorms = first.renormalizations + second.renormalizations
    if renorms:
        logger.info("Frame integration renormalized %d frame(s)", renorms)
    drift = float(np.max(frame_drift(frames)))
    if drift > PATCH_FRAME_TOL:
        logger.warning("Frame drift %.2e exceeds the patch budget %.1e", drift, PATCH_FRAME_TOL)
    return SurfacePatch(z=z, frames=frames, fields=fields, grid=grid, renormalizations=renorms,
                        seed_index=(i0, j0))


def reconstruct(pair: WeingartenPair, field: GridField, seed_z=None, seed_frame: Optional[MovingFrame] = None,
                seed_index: Tuple[int, int] = (0, 0), order: str = "v_first") -> SurfacePatch:
    fields = invariants_from_nu(pair, field)
    return integrate_frame(fields, field, seed_z, seed_frame, order=order, seed_index=seed_index)


def two_path_discrepancy(fields: InvariantFields, grid: GridField, seed_z=None,
                         seed_frame: Optional[MovingFrame] = None) -> Dict[str, float]:
    """Gap between v-first and u-first integration from the (0, 0) seed"""
    p = integrate_frame(fields, grid, seed_z, seed_frame, order="v_first")
    q = integrate_frame(fields, grid, seed_z, seed_frame, order="u_first")
    gap = np.linalg.norm(p.z - q.z, axis=-1)
    return {"corner": float(gap[-1, -1]), "max": float(gap.max())}


def apply_motion_patch(m: Motion, patch: SurfacePatch) -> SurfacePatch:
    return SurfacePatch(
        z=apply_motion(m, patch.z),
        frames=apply_motion_frame(m, patch.frames),
        fields=patch.fields,
        grid=patch.grid,
        renormalizations=patch.renormalizations,
        seed_index=patch.seed_index,
    )


def rodrigues_residual(patch: SurfacePatch, margin: int = 1) -> ResidualReport:
    """l_u + nu1 z_u and l_v + nu2 z_v"""
    du, dv = patch.grid.du, patch.grid.dv
    l = patch.normals
    ru = d1(l, du, 0) + patch.fields.nu1[..., None] * d1(patch.z, du, 0)
    rv = d1(l, dv, 1) + patch.fields.nu2[..., None] * d1(patch.z, dv, 1)
    ru = interior(np.linalg.norm(ru, axis=-1), margin)
    rv = interior(np.linalg.norm(rv, axis=-1), margin)
    return ResidualReport.create(np.maximum(ru, rv), {"u": ru, "v": rv})


def verify_bonnet(patch: SurfacePatch, pair: WeingartenPair, tol: float = VERIFY_TOL,
                  margin: int = 2, exclude: Optional[np.ndarray] = None) -> VerificationReport:
    """Compare invariants recovered from positions with the prescribed ones.

    Recovered curvatures reach three nodes into the field, so nodes within
    that reach of extrapolated edge values are left out, as are nodes set
    in `exclude`.
    """
    forms = fundamental_forms(patch.z, patch.grid.du, patch.grid.dv)
    edges = edge_influence(patch.grid, reach=3)
    if edges is not None:
        exclude = edges if exclude is None else exclude | edges
    if exclude is not None and np.all(interior(exclude, margin)):
        logger.warning("No node of the %dx%d patch is left to compare", *patch.shape)
    recovered = principal_data(forms, net_tol=np.inf)
    nu = patch.grid.values
    prescribed = {
        "nu1": pair.f(nu),
        "nu2": pair.g(nu),
        "gamma1": patch.fields.gamma1,
        "gamma2": patch.fields.gamma2,
    }
    deviations = {
        name: ResidualReport.create(interior(getattr(recovered, name) - target, margin, exclude)).max_abs
        for name, target in prescribed.items()
    }
    scale = np.sqrt(-forms.E * forms.G)
    mixed_F = ResidualReport.create(interior(forms.F, margin, exclude)).max_abs / float(np.max(scale))
    mixed_M = ResidualReport.create(interior(forms.M, margin, exclude)).max_abs
    return VerificationReport(
        deviations=deviations,
        mixed_F=mixed_F,
        mixed_M=mixed_M,
        tol=tol,
        frame_drift=float(np.max(frame_drift(patch.frames))),
    )

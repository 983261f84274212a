"""Natural PDE of time-like Weingarten surfaces: residuals and solvers.

Fields hold nu (or lambda) with u along axis 0 and v along axis 1.
Residuals are LHS - RHS and are reported on interior nodes only.
"""
import logging
from typing import Callable, Optional, Tuple, Union

import numpy as np

from ..config import (
    BLOWUP_CAP,
    ELLIPTIC_MAX_ITER,
    ELLIPTIC_TOL,
    EXP_CAP,
    RESIDUAL_MARGIN,
)
from ..errors import NumericalError, PreconditionError, offending_nodes
from ..models.grid import GridField, GridSpec, ResidualReport, SolveInfo
from ..models.weingarten import (
    BasicClass,
    NaturalPdeDescriptor,
    Potentials,
    WeingartenPair,
    OP_LAPLACE,
    OP_LAPLACE_STAR,
)
from ..utils.stencils import d1, d2, interior, laplace_parts
from .weingarten import potentials

logger = logging.getLogger(__name__)

VARIANTS = ("euclidean", "spacelike", "timelike")


def check_field(pair: WeingartenPair, field: GridField) -> np.ndarray:
    """Samples of a nu-field, validated against the pair"""
    if field.kind != "nu":
        raise PreconditionError("expected a nu-field; convert lambda samples with nu_field_from_lambda")
    nu = field.values
    outside = ~pair.contains(nu)
    if np.any(outside):
        raise PreconditionError(f"samples outside the domain {pair.domain} of {pair.label}",
                                nodes=offending_nodes(outside))
    gap_sign = np.sign(pair.f(nu) - pair.g(nu))
    if np.any(gap_sign != pair.sign):
        raise PreconditionError("f - g changes sign inside the grid", nodes=offending_nodes(gap_sign != pair.sign))
    return nu


def edge_influence(field: GridField, reach: int = 1) -> Optional[np.ndarray]:
    """Nodes whose stencil of radius `reach` sees extrapolated v-edge values.

    A leapfrog march carries each extrapolated edge one column inward per
    row, so row k is clean on columns k .. n_v - 1 - k. Fields with exact
    edges give None.
    """
    if field.edges != "extrapolated":
        return None
    n_u, n_v = field.shape
    k = np.arange(n_u)[:, None]
    j = np.arange(n_v)[None, :]
    width = k + 2 * reach
    return (j < width) | (j > n_v - 1 - width)


def potential_fields(pair: WeingartenPair, nu: np.ndarray, pot: Optional[Potentials] = None) -> Tuple[np.ndarray, np.ndarray]:
    pot = pot or potentials(pair)
    I = np.asarray(pot.I(nu), dtype=float)
    J = np.asarray(pot.J(nu), dtype=float)
    too_big = (np.abs(I) > EXP_CAP) | (np.abs(J) > EXP_CAP) | ~np.isfinite(I) | ~np.isfinite(J)
    if np.any(too_big):
        raise NumericalError(f"potentials exceed the exponent cap {EXP_CAP}", nodes=offending_nodes(too_big))
    return I, J


def second_potentials(pair: WeingartenPair, nu: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """I''(nu) and J''(nu)"""
    f, g = pair.f(nu), pair.g(nu)
    df, dg = pair.df(nu), pair.dg(nu)
    ddI = (pair.d2f(nu) * (f - g) - df * (df - dg)) / (f - g) ** 2
    ddJ = (pair.d2g(nu) * (g - f) - dg * (dg - df)) / (g - f) ** 2
    return ddI, ddJ


def _nu_derivatives(nu: np.ndarray, du: float, dv: float):
    return d1(nu, du, 0), d1(nu, dv, 1), d2(nu, du, 0), d2(nu, dv, 1)


def _curvature_terms(pair: WeingartenPair, field: GridField):
    nu = check_field(pair, field)
    I, J = potential_fields(pair, nu)
    nu_u, nu_v, nu_uu, nu_vv = _nu_derivatives(nu, field.du, field.dv)
    f, g = pair.f(nu), pair.g(nu)
    df, dg = pair.df(nu), pair.dg(nu)
    T1 = field.a_const ** 2 * np.exp(2.0 * I) * (dg * nu_uu + (pair.d2g(nu) - 2.0 * dg ** 2 / (g - f)) * nu_u ** 2)
    T2 = field.b_const ** 2 * np.exp(2.0 * J) * (df * nu_vv + (pair.d2f(nu) - 2.0 * df ** 2 / (f - g)) * nu_v ** 2)
    return T1, T2, f, g


def _potential_terms(pair: WeingartenPair, field: GridField, stencil: str):
    nu = check_field(pair, field)
    pot = potentials(pair)
    I, J = potential_fields(pair, nu, pot)
    du, dv = field.du, field.dv
    if stencil == "field":
        I_u, J_u, I_v, J_v = d1(I, du, 0), d1(J, du, 0), d1(I, dv, 1), d1(J, dv, 1)
        J_uu, I_vv = d2(J, du, 0), d2(I, dv, 1)
    elif stencil == "chain":
        nu_u, nu_v, nu_uu, nu_vv = _nu_derivatives(nu, du, dv)
        dI, dJ = pot.dI(nu), pot.dJ(nu)
        ddI, ddJ = second_potentials(pair, nu)
        I_u, J_u, I_v, J_v = dI * nu_u, dJ * nu_u, dI * nu_v, dJ * nu_v
        J_uu = ddJ * nu_u ** 2 + dJ * nu_uu
        I_vv = ddI * nu_v ** 2 + dI * nu_vv
    else:
        raise PreconditionError(f"unknown stencil '{stencil}'")
    A = field.a_const ** 2 * np.exp(2.0 * I) * (J_uu + I_u * J_u - J_u ** 2)
    B = field.b_const ** 2 * np.exp(2.0 * J) * (I_vv + I_v * J_v - I_v ** 2)
    return A, B, pair.f(nu) * pair.g(nu)


def residual_curvature_form(pair: WeingartenPair, field: GridField, margin: int = RESIDUAL_MARGIN) -> ResidualReport:
    """a^2 e^{2I}[g' nu_uu + (g'' - 2g'^2/(g-f)) nu_u^2] + b^2 e^{2J}[f' nu_vv + ...] - fg(f-g)"""
    T1, T2, f, g = _curvature_terms(pair, field)
    exclude = edge_influence(field)
    rhs = f * g * (f - g)
    parts = {"uu": T1, "vv": T2, "rhs": rhs}
    return ResidualReport.create(interior(T1 + T2 - rhs, margin, exclude),
                                 {k: interior(v, margin, exclude) for k, v in parts.items()})


def residual_potential_form(pair: WeingartenPair, field: GridField, stencil: str = "field",
                            margin: int = RESIDUAL_MARGIN) -> ResidualReport:
    """a^2 e^{2I}(J_uu + I_u J_u - J_u^2) - b^2 e^{2J}(I_vv + I_v J_v - I_v^2) + fg

    Equals -residual_curvature_form / (f - g); with stencil="chain" the
    identity holds node-wise up to rounding.
    """
    A, B, fg = _potential_terms(pair, field, stencil)
    return ResidualReport.create(interior(A - B + fg, margin, edge_influence(field)))


def residual_variant(variant: str, pair: WeingartenPair, field: GridField, stencil: str = "field",
                     form: str = "potential", margin: int = RESIDUAL_MARGIN) -> ResidualReport:
    """Natural PDE with the sign pattern of Euclidean, space-like or time-like surfaces"""
    if variant not in VARIANTS:
        raise PreconditionError(f"unknown variant '{variant}', expected one of {VARIANTS}")
    if form == "potential":
        A, B, fg = _potential_terms(pair, field, stencil)
        res = {
            "euclidean": A + B - fg,
            "spacelike": A + B + fg,
            "timelike": A - B + fg,
        }[variant]
    elif form == "curvature":
        T1, T2, f, g = _curvature_terms(pair, field)
        rhs = f * g * (f - g)
        res = {
            "euclidean": T1 - T2 + rhs,
            "spacelike": T1 - T2 - rhs,
            "timelike": T1 + T2 - rhs,
        }[variant]
    else:
        raise PreconditionError(f"unknown form '{form}'")
    return ResidualReport.create(interior(res, margin, edge_influence(field)))


def natural_ode_residual(pair: WeingartenPair, field: GridField, margin: int = RESIDUAL_MARGIN) -> ResidualReport:
    """a^2 e^{2I}(J_uu + I_u J_u - J_u^2) + fg along u for a v-independent field"""
    A, _, fg = _potential_terms(pair, field, "chain")
    column = field.shape[1] // 2
    res = (A + fg)[:, column]
    return ResidualReport.create(res[margin:len(res) - margin] if margin else res)


# --- change of variables ------------------------------------------------------

def nu_field_from_lambda(basic: BasicClass, field: GridField) -> GridField:
    if field.kind == "nu":
        return field
    nu = basic.substitution.to_nu(field.values)
    return field.with_values(nu, kind="nu", nu0=basic.nu0, a_const=basic.a_const,
                             b_const=basic.b_const, class_id=basic.id)


def lambda_field_from_nu(basic: BasicClass, field: GridField) -> GridField:
    if field.kind == "lambda":
        return field
    lam = basic.substitution.to_lambda(field.values)
    return field.with_values(lam, kind="lambda", class_id=basic.id)


def class_residual(basic: BasicClass, field: GridField) -> ResidualReport:
    """LHS - RHS of the basic class PDE, in its dependent variable"""
    lam = lambda_field_from_nu(basic, field).values
    desc = basic.pde
    w = desc.to_w(lam)
    q = 1.0 / w if desc.starred else w
    w_uu, _ = laplace_parts(w, field.du, field.dv)
    _, q_vv = laplace_parts(q, field.du, field.dv)
    sign = 1.0 if desc.operator in (OP_LAPLACE, OP_LAPLACE_STAR) else -1.0
    res = w_uu + sign * q_vv - desc.rhs(lam[1:-1, 1:-1])
    exclude = edge_influence(field)
    return ResidualReport.create(res if exclude is None else np.ma.masked_array(res, mask=interior(exclude)))


# --- solvers ------------------------------------------------------------------

def _resolve(target: Union[BasicClass, NaturalPdeDescriptor]):
    if isinstance(target, BasicClass):
        return target.pde, {"nu0": target.nu0, "class_id": target.id}
    return target, {"nu0": 0.0, "class_id": target.class_id}


def _derivative(fn: Callable, x: np.ndarray) -> np.ndarray:
    h = 1e-6 * np.maximum(1.0, np.abs(x))
    return (fn(x + h) - fn(x - h)) / (2.0 * h)


def _lambda_checked(desc: NaturalPdeDescriptor, w: np.ndarray, cap: float, row: int, u_value: float) -> np.ndarray:
    where = f"at u={u_value:g}"
    if desc.starred and np.any(w <= 0):
        raise NumericalError(f"dependent variable {desc.dependent} left (0, inf) {where}",
                             nodes=[(row, int(j)) for j in np.flatnonzero(w <= 0)])
    lam = desc.from_w(w)
    bad = ~np.isfinite(lam) | (np.abs(lam) > cap)
    if np.any(bad):
        raise NumericalError(f"blow-up: |λ| exceeded {cap} {where}",
                             nodes=[(row, int(j)) for j in np.flatnonzero(bad)])
    return lam


def _cfl_checked(w: np.ndarray, du: float, dv: float, row: int, u_value: float) -> None:
    """du <= dv min(w) on one row of a starred march"""
    slow = du > dv * w * (1.0 + 1e-12)
    if np.any(slow):
        raise NumericalError(
            f"CFL restriction violated at u={u_value:g}: du={du:g} > dv min(w)={dv * float(np.min(w)):g}",
            nodes=[(row, int(j)) for j in np.flatnonzero(slow)],
        )


def solve_hyperbolic(target: Union[BasicClass, NaturalPdeDescriptor], init_lambda, init_lambda_u,
                     grid: GridSpec, boundary: Optional[Callable] = None, cap: float = BLOWUP_CAP,
                     return_info: bool = False):
    """Leapfrog march in u for w_uu - w_vv = rhs or w_uu + (1/w)_vv = rhs.

    boundary(u, v_edges) returns lambda on the two v-edges; without it the
    edge columns are extrapolated linearly and flagged in the returned info.
    """
    desc, meta = _resolve(target)
    if desc.character != "hyperbolic":
        raise PreconditionError(f"operator {desc.operator} is elliptic; use solve_elliptic")
    lam0 = np.asarray(init_lambda, dtype=float)
    lam_u0 = np.asarray(init_lambda_u, dtype=float)
    if lam0.shape != (grid.n_v,) or lam_u0.shape != (grid.n_v,):
        raise PreconditionError(f"initial data must have {grid.n_v} samples along v")
    if not (np.all(np.isfinite(lam0)) and np.all(np.isfinite(lam_u0))):
        raise PreconditionError("initial data must be finite")

    du, dv = grid.du, grid.dv
    u, v = grid.axes()
    starred = desc.starred
    w0 = desc.to_w(lam0)
    if starred and np.any(w0 <= 0):
        raise PreconditionError(f"initial {desc.dependent} must be positive")
    speed = 1.0 / np.min(w0) if starred else 1.0
    if du * speed > dv * (1.0 + 1e-12):
        raise PreconditionError(f"CFL restriction violated: du={du:g} > dv/speed={dv / speed:g}")
    w_u0 = _derivative(desc.to_w, lam0) * lam_u0

    def accel(w):
        q = 1.0 / w if starred else w
        q_vv = (q[2:] - 2.0 * q[1:-1] + q[:-2]) / (dv * dv)
        return (-q_vv if starred else q_vv) + desc.rhs_w(w[1:-1])

    def edges(w_new, k):
        if boundary is None:
            w_new[0] = 2.0 * w_new[1] - w_new[2]
            w_new[-1] = 2.0 * w_new[-2] - w_new[-3]
        else:
            lam_edges = np.asarray(boundary(u[k], np.array([v[0], v[-1]])), dtype=float)
            w_new[0], w_new[-1] = desc.to_w(lam_edges)
        return w_new

    W = np.empty(grid.shape)
    L = np.empty(grid.shape)
    W[0] = w0
    L[0] = lam0
    w1 = w0.copy()
    w1[1:-1] = w0[1:-1] + du * w_u0[1:-1] + 0.5 * du * du * accel(w0)
    W[1] = edges(w1, 1)
    L[1] = _lambda_checked(desc, W[1], cap, 1, u[1])
    if starred:
        _cfl_checked(W[1], du, dv, 1, u[1])
    for k in range(1, grid.n_u - 1):
        w_next = W[k].copy()
        w_next[1:-1] = 2.0 * W[k, 1:-1] - W[k - 1, 1:-1] + du * du * accel(W[k])
        W[k + 1] = edges(w_next, k + 1)
        L[k + 1] = _lambda_checked(desc, W[k + 1], cap, k + 1, u[k + 1])
        if starred:
            _cfl_checked(W[k + 1], du, dv, k + 1, u[k + 1])

    info = SolveInfo(iterations=grid.n_u - 1, boundary="extrapolated" if boundary is None else "dirichlet",
                     extrapolated_edges=boundary is None)
    if boundary is None:
        logger.info("Hyperbolic march used linear extrapolation on the v-edges")
    field = GridField.on_grid(grid, L, nu0=meta["nu0"], class_id=meta["class_id"], kind="lambda",
                              edges="extrapolated" if boundary is None else "exact")
    return (field, info) if return_info else field


def default_omega(grid: GridSpec) -> float:
    n = max(grid.n_u, grid.n_v) - 1
    return 2.0 / (1.0 + np.sin(np.pi / n))


def _on_grid(data, grid: GridSpec) -> np.ndarray:
    if data is None:
        return np.zeros(grid.shape)
    if callable(data):
        U, V = grid.mesh()
        return np.asarray(data(U, V), dtype=float) * np.ones(grid.shape)
    return np.asarray(data, dtype=float) * np.ones(grid.shape)


def solve_elliptic(target: Union[BasicClass, NaturalPdeDescriptor], boundary, grid: GridSpec,
                   omega: Optional[float] = None, source=None, tol: float = ELLIPTIC_TOL,
                   max_iter: int = ELLIPTIC_MAX_ITER, return_info: bool = False):
    """Red-black Newton-SOR for w_uu + w_vv = rhs + s or w_uu - (1/w)_vv = rhs + s.

    boundary is lambda on the grid (scalar, array or callable(U, V)); its
    edge values are held fixed and its interior is the initial guess.
    """
    desc, meta = _resolve(target)
    if desc.character != "elliptic":
        raise PreconditionError(f"operator {desc.operator} is hyperbolic; use solve_hyperbolic")
    if omega is None:
        omega = default_omega(grid)
    if not 1.0 <= omega < 2.0:
        raise PreconditionError(f"relaxation factor must satisfy 1 <= omega < 2, got {omega}")

    lam = _on_grid(boundary, grid)
    if not np.all(np.isfinite(lam)):
        raise PreconditionError("boundary data must be finite")
    src = _on_grid(source, grid)[1:-1, 1:-1]
    starred = desc.starred
    w = desc.to_w(lam)
    if starred and np.any(w <= 0):
        raise PreconditionError(f"{desc.dependent} must be positive on the boundary and initial guess")

    du2, dv2 = grid.du ** 2, grid.dv ** 2
    I, J = np.meshgrid(np.arange(1, grid.n_u - 1), np.arange(1, grid.n_v - 1), indexing="ij")
    colors = [((I + J) % 2) == c for c in (0, 1)]

    update = np.inf
    it = 0
    while it < max_iter:
        it += 1
        update = 0.0
        for mask in colors:
            wc = w[1:-1, 1:-1]
            w_uu = (w[2:, 1:-1] - 2.0 * wc + w[:-2, 1:-1]) / du2
            if starred:
                q = 1.0 / w
                residual = w_uu - (q[1:-1, 2:] - 2.0 * q[1:-1, 1:-1] + q[1:-1, :-2]) / dv2
                jac = -2.0 / du2 - 2.0 / (wc * wc * dv2)
            else:
                residual = w_uu + (w[1:-1, 2:] - 2.0 * wc + w[1:-1, :-2]) / dv2
                jac = -2.0 / du2 - 2.0 / dv2
            residual = residual - desc.rhs_w(wc) - src
            jac = jac - _derivative(desc.rhs_w, wc)
            step = np.where(mask, -omega * residual / jac, 0.0)
            w[1:-1, 1:-1] = wc + step
            update = max(update, float(np.max(np.abs(step))))
        if not np.isfinite(update):
            raise NumericalError(f"relaxation diverged after {it} sweeps")
        if starred and np.any(w <= 0):
            raise NumericalError(f"{desc.dependent} left (0, inf) after {it} sweeps",
                                 nodes=offending_nodes(w <= 0))
        if update < tol:
            break
    else:
        raise NumericalError(f"relaxation did not converge in {max_iter} sweeps (update {update:.3e})",
                             details={"update": update})

    logger.info("Elliptic solve converged in %d sweeps (omega=%.4f, update=%.2e)", it, omega, update)
    info = SolveInfo(iterations=it, update_norm=update, omega=omega)
    field = GridField.on_grid(grid, desc.from_w(w), nu0=meta["nu0"], class_id=meta["class_id"], kind="lambda")
    return (field, info) if return_info else field


def solve_natural_ode(pair: WeingartenPair, nu_at_u0: float, dnu_at_u0: float, grid: GridSpec,
                      a_const: float = 1.0, b_const: float = 1.0) -> GridField:
    """RK4 for the gamma_1 = 0 reduction, tiled along v.

    J' nu'' = -fg / (a^2 e^{2I}) - (J'' + I' J' - J'^2) nu'^2
    """
    if dnu_at_u0 == 0:
        raise PreconditionError("the natural ODE needs nu_u != 0 at u0")
    if not pair.contains(nu_at_u0):
        raise PreconditionError(f"initial nu={nu_at_u0} outside domain {pair.domain}")
    pot = potentials(pair)
    a2 = a_const ** 2

    def rhs(y):
        nu, p = y
        if not pair.contains(nu):
            raise NumericalError(f"solution left the domain {pair.domain} (nu={nu:.6g})")
        I = float(pot.I(nu))
        dI, dJ = float(pot.dI(nu)), float(pot.dJ(nu))
        _, ddJ = second_potentials(pair, nu)
        fg = float(pair.f(nu) * pair.g(nu))
        acc = (-fg / (a2 * np.exp(2.0 * I)) - (float(ddJ) + dI * dJ - dJ * dJ) * p * p) / dJ
        return np.array([p, acc])

    h = grid.du
    out = np.empty(grid.n_u)
    y = np.array([float(nu_at_u0), float(dnu_at_u0)])
    out[0] = y[0]
    sign = np.sign(y[1])
    for k in range(1, grid.n_u):
        k1 = rhs(y)
        k2 = rhs(y + 0.5 * h * k1)
        k3 = rhs(y + 0.5 * h * k2)
        k4 = rhs(y + h * k3)
        y = y + h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0
        if np.sign(y[1]) != sign:
            u_k = grid.u0 + k * h
            raise NumericalError(f"nu_u reached 0 near u={u_k:.6g}: strong regularity lost", nodes=[(k, 0)])
        if not pair.contains(y[0]):
            raise NumericalError(f"solution left the domain {pair.domain} at u={grid.u0 + k * h:.6g}")
        out[k] = y[0]

    values = np.repeat(out[:, None], grid.n_v, axis=1)
    return GridField.on_grid(grid, values, nu0=pair.nu0, a_const=a_const, b_const=b_const,
                             class_id=pair.label, kind="nu")

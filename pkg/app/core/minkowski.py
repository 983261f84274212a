"""Linear algebra of Minkowski 3-space with signature (+, +, -).

Functions accept either LorentzVec values or numpy arrays whose last axis
has length 3, so the same code serves single vectors and whole grids.
"""
import logging

import numpy as np

from ..config import MOTION_TOL
from ..errors import PreconditionError, NumericalError
from ..models.lorentz import ETA, FrameReport, LorentzVec, Motion, MovingFrame

logger = logging.getLogger(__name__)

_SIGN = np.array([1.0, 1.0, -1.0])


def _arr(v) -> np.ndarray:
    return v.as_array() if isinstance(v, LorentzVec) else np.asarray(v, dtype=float)


def lorentz_dot(a, b):
    """<a, b> = a1 b1 + a2 b2 - a3 b3"""
    x, y = _arr(a), _arr(b)
    out = np.sum(x * y * _SIGN, axis=-1)
    return float(out) if np.ndim(out) == 0 else out


def lorentz_cross(a, b):
    """eta (a x b): metric-orthogonal to a and b, [a b c] positively oriented"""
    c = np.cross(_arr(a), _arr(b)) * _SIGN
    if isinstance(a, LorentzVec) and isinstance(b, LorentzVec):
        return LorentzVec.from_array(c)
    return c


def frame_drift(F: np.ndarray) -> np.ndarray:
    """Largest deviation from orthonormality for frames of shape (..., 3, 3)"""
    G = np.einsum("...ik,k,...jk->...ij", F, _SIGN, F)
    target = np.diag([-1.0, 1.0, 1.0])
    return np.max(np.abs(G - target), axis=(-2, -1))


def check_frame(frame: MovingFrame, tol: float) -> FrameReport:
    if tol <= 0:
        raise PreconditionError(f"frame tolerance must be positive, got {tol}")
    X, Y, l = frame.X, frame.Y, frame.l
    return FrameReport(
        xx=lorentz_dot(X, X) + 1.0,
        yy=lorentz_dot(Y, Y) - 1.0,
        ll=lorentz_dot(l, l) - 1.0,
        xy=lorentz_dot(X, Y),
        xl=lorentz_dot(X, l),
        yl=lorentz_dot(Y, l),
        orientation=float(np.sign(np.linalg.det(frame.matrix().T))),
    )


def _dots(a, b) -> np.ndarray:
    return np.asarray(lorentz_dot(a, b))[..., None]


def metric_gram_schmidt(F: np.ndarray) -> np.ndarray:
    """Re-orthonormalize frames (rows X, Y, l) in the Lorentz metric"""
    F = np.array(F, dtype=float, copy=True)
    X, Y, l = F[..., 0, :], F[..., 1, :], F[..., 2, :]
    X = X / np.sqrt(-_dots(X, X))
    Y = Y + _dots(Y, X) * X
    Y = Y / np.sqrt(_dots(Y, Y))
    l = l + _dots(l, X) * X - _dots(l, Y) * Y
    l = l / np.sqrt(_dots(l, l))
    F[..., 0, :], F[..., 1, :], F[..., 2, :] = X, Y, l
    return F


def validate_motion(m: Motion, tol: float = MOTION_TOL) -> None:
    L = np.asarray(m.L, dtype=float)
    if L.shape != (3, 3) or not np.all(np.isfinite(L)):
        raise PreconditionError("motion matrix must be a finite 3x3 array")
    dev = np.max(np.abs(L.T @ ETA @ L - ETA))
    scale = max(1.0, float(np.max(np.abs(L))) ** 2)
    if dev > tol * scale:
        raise PreconditionError(f"motion does not preserve the metric (deviation {dev:.3e})")
    if np.linalg.det(L) <= 0:
        raise PreconditionError("motion must have determinant +1")


def apply_motion(m: Motion, p):
    validate_motion(m)
    out = _arr(p) @ np.asarray(m.L).T + m.t.as_array()
    return LorentzVec.from_array(out) if isinstance(p, LorentzVec) else out


def apply_motion_frame(m: Motion, f):
    """Frame vectors transform by L only; works on a MovingFrame or (..., 3, 3) rows"""
    validate_motion(m)
    if isinstance(f, MovingFrame):
        return MovingFrame.from_matrix(f.matrix() @ np.asarray(m.L).T)
    return np.asarray(f) @ np.asarray(m.L).T


def motion_between(frame_a: MovingFrame, z_a, frame_b: MovingFrame, z_b) -> Motion:
    """The motion carrying (z_a, frame_a) onto (z_b, frame_b)"""
    A = frame_a.matrix().T
    B = frame_b.matrix().T
    try:
        L = B @ np.linalg.inv(A)
    except np.linalg.LinAlgError as e:
        raise NumericalError(f"singular frame in motion_between: {e}")
    t = _arr(z_b) - L @ _arr(z_a)
    return Motion(L, LorentzVec.from_array(t))

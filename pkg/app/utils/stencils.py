"""Second-order finite differences on uniform grids.

Interior nodes use central stencils; the two edge nodes use one-sided
second-order stencils so arrays keep their shape.
"""
from typing import Optional

import numpy as np


def d1(a: np.ndarray, h: float, axis: int) -> np.ndarray:
    return np.gradient(a, h, axis=axis, edge_order=2)


def d2(a: np.ndarray, h: float, axis: int) -> np.ndarray:
    a = np.moveaxis(np.asarray(a, dtype=float), axis, 0)
    out = np.empty_like(a)
    out[1:-1] = (a[2:] - 2.0 * a[1:-1] + a[:-2]) / (h * h)
    if a.shape[0] >= 4:
        out[0] = (2.0 * a[0] - 5.0 * a[1] + 4.0 * a[2] - a[3]) / (h * h)
        out[-1] = (2.0 * a[-1] - 5.0 * a[-2] + 4.0 * a[-3] - a[-4]) / (h * h)
    else:
        out[0] = out[1]
        out[-1] = out[-2]
    return np.moveaxis(out, 0, axis)


def d11(a: np.ndarray, du: float, dv: float) -> np.ndarray:
    """Mixed derivative along axes 0 and 1"""
    return d1(d1(a, du, 0), dv, 1)


def interior(a: np.ndarray, margin: int = 1, exclude: Optional[np.ndarray] = None) -> np.ndarray:
    """Drop `margin` nodes on every side; nodes set in `exclude` come back masked"""
    if margin > 0:
        a = a[margin:-margin, margin:-margin]
        if exclude is not None:
            exclude = exclude[margin:-margin, margin:-margin]
    if exclude is None:
        return a
    return np.ma.masked_array(a, mask=exclude)


def laplace_parts(a: np.ndarray, du: float, dv: float):
    """Central second differences on interior nodes only"""
    uu = (a[2:, 1:-1] - 2.0 * a[1:-1, 1:-1] + a[:-2, 1:-1]) / (du * du)
    vv = (a[1:-1, 2:] - 2.0 * a[1:-1, 1:-1] + a[1:-1, :-2]) / (dv * dv)
    return uu, vv

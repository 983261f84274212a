import numpy as np
import pytest

from app.core.natural_pde import nu_field_from_lambda, solve_hyperbolic
from app.core.weingarten import make_basic_class
from app.models.grid import GridSpec


@pytest.fixture
def cmc():
    return make_basic_class("CMC_HALF")


@pytest.fixture
def sinh_gordon_field(cmc):
    """nu-field of H = 1/2 marched in u from lambda = amplitude * exp(-v^2 / width)"""
    basic, _ = cmc

    def build(h, u_len=0.3, v_half=1.0, amplitude=0.1, width=0.1):
        n_u = int(round(u_len / h)) + 1
        n_v = int(round(2.0 * v_half / h)) + 1
        grid = GridSpec(n_u, n_v, 0.0, -v_half, h, h)
        _, v = grid.axes()
        lam = solve_hyperbolic(basic, amplitude * np.exp(-v ** 2 / width), np.zeros_like(v), grid)
        return nu_field_from_lambda(basic, lam)

    return build


@pytest.fixture
def perturb():
    def apply(field, size=1e-2, k=5.0):
        U, V = field.grid.mesh()
        return field.with_values(field.values + size * np.sin(k * U) * np.sin(k * V))

    return apply


@pytest.fixture
def outside():
    """Nodes of a field outside the window 0 <= u <= u_max, |v| <= v_max"""
    def mask(field, u_max=0.2, v_max=0.5):
        U, V = field.grid.mesh()
        return (U > u_max + 1e-9) | (np.abs(V) > v_max + 1e-9)

    return mask

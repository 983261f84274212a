import numpy as np
import pytest

from app.core.natural_pde import edge_influence, solve_natural_ode
from app.core.reconstruction import invariants_from_nu, reconstruct
from app.core.surface_invariants import (
    check_codazzi,
    check_gauss,
    check_natural_criterion,
    curvature_invariants,
    fundamental_forms,
    patch_invariants,
    principal_data,
    principal_line_geometry,
    strong_regularity,
)
from app.errors import PreconditionError
from app.models.grid import GridField, GridSpec
from app.utils.stencils import d1


def plane(shear=0.0):
    u = 0.1 * np.arange(6)
    U, V = np.meshgrid(u, u, indexing="ij")
    return np.stack([V + shear * U, np.zeros_like(U), U], axis=-1)


def test_timelike_plane_forms():
    forms = fundamental_forms(plane(), 0.1, 0.1)
    assert np.allclose(forms.E, -1.0)
    assert np.allclose(forms.F, 0.0)
    assert np.allclose(forms.G, 1.0)
    assert np.allclose(forms.L, 0.0) and np.allclose(forms.N, 0.0)


def test_non_principal_net_is_rejected():
    forms = fundamental_forms(plane(shear=0.5), 0.1, 0.1)
    with pytest.raises(PreconditionError, match="principal net"):
        principal_data(forms)


def test_degenerate_positions_are_rejected():
    z = plane()
    z[..., 2] = 0.0
    with pytest.raises(PreconditionError):
        fundamental_forms(z, 0.1, 0.1)


def test_curvature_invariants_flag_umbilics():
    K, H, Hp, flagged = curvature_invariants([2.0, 1.0], [1.0, 1.0])
    assert np.allclose(K, [2.0, 1.0])
    assert np.allclose(H, [1.5, 1.0])
    assert np.allclose(Hp, [0.5, 0.0])
    assert flagged.tolist() == [False, True]


def test_gauss_and_codazzi_separate_solutions(cmc, sinh_gordon_field, perturb):
    _, pair = cmc
    h = 0.01
    field = sinh_gordon_field(h, width=0.5)
    exclude = edge_influence(field, reach=2)
    clean = invariants_from_nu(pair, field)
    noisy = invariants_from_nu(pair, perturb(field))
    gauss_clean = check_gauss(clean, h, h, exclude=exclude).max_abs
    assert gauss_clean <= h ** 2
    assert check_gauss(noisy, h, h, exclude=exclude).max_abs >= 100.0 * gauss_clean
    # gamma comes from the same stencil as the Codazzi check
    assert check_codazzi(clean, h, h).max_abs < 1e-10


def test_gauss_residual_converges_at_second_order(cmc, sinh_gordon_field, outside):
    _, pair = cmc
    residuals = []
    for h in (0.04, 0.02, 0.01):
        field = sinh_gordon_field(h, width=0.5)
        fields = invariants_from_nu(pair, field)
        exclude = edge_influence(field, reach=2) | outside(field)
        residuals.append(check_gauss(fields, h, h, exclude=exclude).max_abs)
    orders = np.log2(np.array(residuals[:-1]) / np.array(residuals[1:]))
    assert np.all(orders >= 1.8), orders


def test_gauss_margin_drops_nested_edge_stencils(cmc, sinh_gordon_field):
    _, pair = cmc
    h = 0.02
    field = sinh_gordon_field(h, width=0.5)
    fields = invariants_from_nu(pair, field)
    exclude = edge_influence(field, reach=2)
    report = check_gauss(fields, h, h, exclude=exclude)
    assert report.field.shape == (field.shape[0] - 4, field.shape[1] - 4)
    assert report.max_abs < check_gauss(fields, h, h, margin=1).max_abs


def test_natural_criterion_is_constant(cmc, sinh_gordon_field):
    _, pair = cmc
    fields = invariants_from_nu(pair, sinh_gordon_field(0.02))
    mean, spread = check_natural_criterion(fields.E, fields.G, fields.nu1, fields.nu2)
    assert np.isclose(mean, 1.0)
    assert spread < 1e-12


def test_principal_line_curvature_identity(cmc, sinh_gordon_field):
    _, pair = cmc
    fields = invariants_from_nu(pair, sinh_gordon_field(0.02))
    geo = principal_line_geometry(fields, 0.02, 0.02)
    assert np.max(np.abs(geo.kappa1_sq - fields.nu1 ** 2 - fields.gamma1 ** 2)) <= 1e-12


def test_torsion_two_ways(cmc, sinh_gordon_field, outside):
    _, pair = cmc
    gaps = []
    for h in (0.04, 0.02, 0.01):
        field = sinh_gordon_field(h, width=0.5)
        fields = invariants_from_nu(pair, field)
        geo = principal_line_geometry(fields, h, h, exclude=edge_influence(field) | outside(field))
        gaps.append(np.nanmax(np.abs(geo.tau1 - geo.tau1_alt)[1:-1, 1:-1]))
    orders = np.log2(np.array(gaps[:-1]) / np.array(gaps[1:]))
    assert np.all(orders >= 1.8), orders


def test_torsions_are_blank_on_excluded_nodes(cmc, sinh_gordon_field):
    _, pair = cmc
    field = sinh_gordon_field(0.04)
    exclude = edge_influence(field)
    geo = principal_line_geometry(invariants_from_nu(pair, field), 0.04, 0.04, exclude=exclude)
    assert np.all(np.isnan(geo.tau1[exclude]))
    assert np.all(np.isnan(geo.tau1_alt[exclude]))
    assert np.all(np.isfinite(geo.tau1[~exclude]))


def test_straight_first_family_has_no_torsion(cmc):
    _, pair = cmc
    field = solve_natural_ode(pair, -0.1, 0.3, GridSpec(41, 9, du=0.01, dv=0.01))
    fields = invariants_from_nu(pair, field)
    geo = principal_line_geometry(fields, 0.01, 0.01)
    assert np.max(np.abs(fields.gamma1)) <= 1e-8
    assert np.max(np.abs(geo.tau1)) <= 1e-8


def test_invariants_from_positions_alone(cmc):
    _, pair = cmc
    grid = GridSpec(32, 32, du=0.02, dv=0.02)
    patch = reconstruct(pair, GridField.on_grid(grid, np.zeros(grid.shape), nu0=pair.nu0))
    fields = patch_invariants(patch)
    assert np.allclose(fields.nu1[1:-1, 1:-1], 1.0, atol=1e-3)
    assert np.allclose(fields.nu2[1:-1, 1:-1], 0.0, atol=1e-3)


def test_strong_regularity(cmc, sinh_gordon_field):
    _, pair = cmc
    grid = GridSpec(8, 8)
    flat = invariants_from_nu(pair, GridField.on_grid(grid, np.zeros(grid.shape), nu0=pair.nu0))
    assert not np.any(strong_regularity(flat, 0.02, 0.02))

    h = 0.02
    fields = invariants_from_nu(pair, sinh_gordon_field(h, width=0.5))
    mask = strong_regularity(fields, h, h)
    moving = (np.abs(d1(fields.nu1, h, 1)) > 1e-8) & (np.abs(d1(fields.nu2, h, 0)) > 1e-8)
    assert np.any(mask)
    assert np.all(mask[1:-1, 1:-1][moving[1:-1, 1:-1]])

import numpy as np
import pytest

from app.core.natural_pde import (
    VARIANTS,
    class_residual,
    edge_influence,
    lambda_field_from_nu,
    natural_ode_residual,
    nu_field_from_lambda,
    residual_curvature_form,
    residual_potential_form,
    residual_variant,
    solve_elliptic,
    solve_hyperbolic,
    solve_natural_ode,
)
from app.core.weingarten import CLASS_IDS, make_basic_class
from app.errors import NumericalError, PreconditionError
from app.models.grid import GridField, GridSpec
from app.utils.stencils import interior


def liouville(u, v):
    """lambda = ln(8 phi' psi' / (phi + psi)^2) with phi = e^(xi/2), psi = eta + 3"""
    xi, eta = u + v, u - v
    phi, psi = np.exp(0.5 * xi), eta + 3.0
    return np.log(8.0 * 0.5 * phi / (phi + psi) ** 2)


def liouville_u(u, v):
    xi, eta = u + v, u - v
    phi, psi = np.exp(0.5 * xi), eta + 3.0
    return 0.5 - 2.0 * (0.5 * phi) / (phi + psi) - 2.0 / (phi + psi)


def liouville_error(n):
    basic, _ = make_basic_class("H0")
    grid = GridSpec.from_extent(n, n, (0.0, 0.5), (-0.5, 0.5))
    u, v = grid.axes()
    lam = solve_hyperbolic(basic, liouville(u[0], v), liouville_u(u[0], v), grid,
                           boundary=lambda uk, edges: liouville(uk, edges))
    U, V = grid.mesh()
    return float(np.max(np.abs(lam.values - liouville(U, V))))


def test_liouville_march_matches_closed_form():
    assert liouville_error(200) <= 1e-3


def test_liouville_march_is_second_order():
    coarse, fine = liouville_error(51), liouville_error(101)
    assert np.log2(coarse / fine) >= 1.8


def sin_laplace_error(n):
    basic, _ = make_basic_class("K_MINUS1")
    grid = GridSpec.from_extent(n, n, (0.0, np.pi), (0.0, np.pi))
    U, V = grid.mesh()
    exact = 0.3 * np.sin(U) * np.sin(V)
    source = -0.6 * np.sin(U) * np.sin(V) + np.sin(exact)
    lam = solve_elliptic(basic.pde, 0.0, grid, source=source)
    return float(np.max(np.abs(lam.values - exact)))


def test_manufactured_sin_laplace():
    assert sin_laplace_error(128) <= 1e-4


def test_sin_laplace_is_second_order():
    coarse, fine = sin_laplace_error(33), sin_laplace_error(65)
    assert np.log2(coarse / fine) >= 1.8


def test_solvers_reject_wrong_character():
    grid = GridSpec(8, 8)
    elliptic, _ = make_basic_class("K_MINUS1")
    hyperbolic, _ = make_basic_class("CMC_HALF")
    with pytest.raises(PreconditionError):
        solve_hyperbolic(elliptic, np.zeros(8), np.zeros(8), grid)
    with pytest.raises(PreconditionError):
        solve_elliptic(hyperbolic, 0.0, grid)


def test_hyperbolic_cfl_violation():
    basic, _ = make_basic_class("CMC_HALF")
    grid = GridSpec(8, 8, du=0.02, dv=0.01)
    with pytest.raises(PreconditionError, match="CFL"):
        solve_hyperbolic(basic, np.zeros(8), np.zeros(8), grid)


def test_cfl_is_rechecked_while_marching():
    basic, _ = make_basic_class("H_BETA_HPRIME_LT1", {"beta": 0.5})
    grid = GridSpec(20, 11, du=0.1, dv=0.1)
    # w = sqrt(lambda) starts at 1 and falls, so du = dv is too long a step after one row
    with pytest.raises(NumericalError, match="CFL") as err:
        solve_hyperbolic(basic, np.ones(11), np.full(11, -2.0), grid)
    assert err.value.nodes[0][0] == 1


def test_hyperbolic_blow_up_reports_row():
    basic, _ = make_basic_class("CMC_HALF")
    grid = GridSpec(200, 11, du=0.05, dv=0.05)
    with pytest.raises(NumericalError) as err:
        solve_hyperbolic(basic, np.full(11, 3.0), np.full(11, 5.0), grid, cap=10.0)
    assert err.value.nodes and err.value.nodes[0][0] > 0


def test_extrapolated_edges_are_flagged():
    basic, _ = make_basic_class("CMC_HALF")
    grid = GridSpec(5, 9)
    field, info = solve_hyperbolic(basic, np.zeros(9), np.zeros(9), grid, return_info=True)
    assert info.extrapolated_edges
    assert field.edges == "extrapolated"
    assert np.all(field.values == 0.0)


def test_trivial_sinh_gordon_solution_stays_zero():
    basic, pair = make_basic_class("CMC_HALF")
    grid = GridSpec(16, 16)
    lam = solve_hyperbolic(basic, np.zeros(16), np.zeros(16), grid)
    nu = nu_field_from_lambda(basic, lam)
    assert np.all(nu.values == 0.0)
    assert residual_curvature_form(pair, nu).max_abs < 1e-14


def test_two_residual_forms_agree_node_wise(cmc):
    _, pair = cmc
    grid = GridSpec(20, 24)
    U, V = grid.mesh()
    nu = 0.5 * (1.0 - np.exp(0.1 * np.sin(3.0 * U) * np.cos(2.0 * V)))
    field = GridField.on_grid(grid, nu, nu0=pair.nu0)
    curvature = residual_curvature_form(pair, field)
    potential = residual_potential_form(pair, field, stencil="chain")
    gap = interior(pair.f(nu) - pair.g(nu))
    assert np.allclose(potential.field, -curvature.field / gap, rtol=1e-8, atol=1e-10)


def test_solution_residual_is_small_and_perturbation_is_not(cmc, sinh_gordon_field, perturb):
    _, pair = cmc
    field = sinh_gordon_field(0.01, width=0.5)
    clean = residual_curvature_form(pair, field).max_abs
    noisy = residual_curvature_form(pair, perturb(field)).max_abs
    assert clean <= 10.0 * 0.01 ** 2
    assert noisy >= 10.0 * clean


def test_class_residual_on_solution(cmc, sinh_gordon_field):
    basic, _ = cmc
    field = sinh_gordon_field(0.02)
    assert class_residual(basic, field).max_abs < 1e-8


def test_timelike_variant_is_potential_form(cmc, sinh_gordon_field):
    _, pair = cmc
    field = sinh_gordon_field(0.02)
    a = residual_variant("timelike", pair, field).max_abs
    b = residual_potential_form(pair, field).max_abs
    assert a == b
    with pytest.raises(PreconditionError):
        residual_variant("riemannian", pair, field)


def test_out_of_domain_field_is_rejected(cmc):
    _, pair = cmc
    grid = GridSpec(5, 5)
    field = GridField.on_grid(grid, np.full(grid.shape, 0.75), nu0=pair.nu0)
    with pytest.raises(PreconditionError) as err:
        residual_curvature_form(pair, field)
    assert len(err.value.nodes) == 25


def test_lambda_and_nu_fields_convert_back(cmc, sinh_gordon_field):
    basic, _ = cmc
    field = sinh_gordon_field(0.02)
    lam = lambda_field_from_nu(basic, field)
    assert lam.kind == "lambda"
    assert np.allclose(nu_field_from_lambda(basic, lam).values, field.values, atol=1e-15)


def test_natural_ode_gives_v_independent_solution(cmc):
    _, pair = cmc
    grid = GridSpec(51, 7, du=0.01, dv=0.01)
    field = solve_natural_ode(pair, -0.1, 0.3, grid)
    assert np.all(field.values == field.values[:, :1])
    assert natural_ode_residual(pair, field).max_abs < 1e-3


def test_natural_ode_needs_moving_start(cmc):
    _, pair = cmc
    with pytest.raises(PreconditionError):
        solve_natural_ode(pair, -0.1, 0.0, GridSpec(5, 5))


def test_extrapolated_edges_stay_inside_their_cone():
    basic, _ = make_basic_class("H0")
    grid = GridSpec.from_extent(21, 41, (0.0, 0.5), (-1.0, 1.0))
    u, v = grid.axes()
    init, init_u = liouville(u[0], v), liouville_u(u[0], v)
    exact = solve_hyperbolic(basic, init, init_u, grid, boundary=lambda uk, edges: liouville(uk, edges))
    marched = solve_hyperbolic(basic, init, init_u, grid)
    assert exact.edges == "exact" and edge_influence(exact) is None
    clean = ~edge_influence(marched, reach=0)
    assert np.array_equal(marched.values[clean], exact.values[clean])
    assert not np.allclose(marched.values[~clean], exact.values[~clean], rtol=0.0, atol=1e-12)


@pytest.mark.parametrize("class_id", CLASS_IDS)
def test_every_basic_class_solution_satisfies_curvature_form(class_id):
    basic, pair = make_basic_class(class_id)
    lam0 = basic.lambda0
    if basic.pde.character == "hyperbolic":
        grid = GridSpec(11, 49, 0.0, -0.5, 0.5 / 48, 1.0 / 48)
        _, v = grid.axes()
        lam = solve_hyperbolic(basic, lam0 + 0.05 * np.exp(-v ** 2 / 0.25), np.zeros_like(v), grid)
    else:
        grid = GridSpec.from_extent(33, 33, (-0.25, 0.25), (-0.25, 0.25))
        lam = solve_elliptic(basic, lambda U, V: lam0 + 0.05 * np.exp(-(U ** 2 + V ** 2) / 0.0625), grid)
    report = residual_curvature_form(pair, nu_field_from_lambda(basic, lam), margin=2)
    scale = max(float(np.max(np.abs(part))) for part in report.components.values())
    assert scale > 0.0
    assert report.max_abs <= 1e-2 * scale


def profile_field(pair, along, seed):
    """CMC field that varies along one coordinate only"""
    rng = np.random.default_rng(seed)
    grid = GridSpec(18, 22, du=0.05, dv=0.05)
    U, V = grid.mesh()
    s = U if along == "u" else V
    c, k, phi = rng.uniform(0.05, 0.2), rng.uniform(1.0, 4.0), rng.uniform(0.0, 2.0 * np.pi)
    return GridField.on_grid(grid, 0.5 * (1.0 - np.exp(c * np.sin(k * s + phi))), nu0=pair.nu0)


def variants(pair, field, form):
    return {name: residual_variant(name, pair, field, form=form).field for name in VARIANTS}


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_potential_variants_flip_the_expected_signs(cmc, seed):
    _, pair = cmc
    for along in ("u", "v"):
        field = profile_field(pair, along, seed)
        fg = interior(pair.f(field.values) * pair.g(field.values))
        r = variants(pair, field, "potential")
        assert np.allclose(r["euclidean"] - r["spacelike"], -2.0 * fg, rtol=1e-12, atol=1e-14)
        if along == "u":
            # B vanishes: space-like and time-like coincide
            assert np.allclose(r["spacelike"], r["timelike"], rtol=1e-12, atol=1e-14)
            assert np.allclose(r["euclidean"], r["timelike"] - 2.0 * fg, rtol=1e-12, atol=1e-14)
        else:
            # A vanishes: the B terms enter with opposite signs
            assert np.allclose(r["spacelike"] + r["timelike"], 2.0 * fg, rtol=1e-12, atol=1e-14)
            assert np.allclose(r["euclidean"] + r["timelike"], 0.0, atol=1e-14)
            assert np.max(np.abs(r["timelike"] - fg)) > 1e-6


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_curvature_variants_flip_the_expected_signs(cmc, seed):
    _, pair = cmc
    for along in ("u", "v"):
        field = profile_field(pair, along, seed)
        f, g = pair.f(field.values), pair.g(field.values)
        rhs = interior(f * g * (f - g))
        r = variants(pair, field, "curvature")
        assert np.allclose(r["euclidean"] - r["spacelike"], 2.0 * rhs, rtol=1e-12, atol=1e-14)
        assert np.allclose(r["timelike"], residual_curvature_form(pair, field).field, rtol=1e-12, atol=1e-14)
        if along == "u":
            assert np.allclose(r["spacelike"], r["timelike"], rtol=1e-12, atol=1e-14)
        else:
            assert np.allclose(r["euclidean"] + r["timelike"], 0.0, atol=1e-14)
            assert np.allclose(r["spacelike"] + r["timelike"], -2.0 * rhs, rtol=1e-12, atol=1e-14)

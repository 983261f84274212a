import numpy as np
import pytest

from app.core.parallel import (
    align_patches,
    inverse_parallel_curvatures,
    natural_invariance,
    offset_patch,
    parallel_curvatures,
    parallel_family,
    parallel_KHH,
    parallel_constants,
    parallel_sign,
    parallel_weingarten,
    verify_parallel_pde,
)
from app.core.reconstruction import reconstruct, rodrigues_residual
from app.core.surface_invariants import curvature_invariants
from app.core.weingarten import linear_fractional_pair
from app.errors import PreconditionError
from app.models.grid import GridField, GridSpec
from app.models.surface import ParallelOffset

OFFSETS = (0.1, -0.2, 0.35)


def test_parallel_curvatures_example():
    nu1, nu2, eps = parallel_curvatures(2.0, 1.0, 0.25)
    assert eps == 1
    assert np.isclose(nu1, 4.0) and np.isclose(nu2, 4.0 / 3.0)


def test_opposite_side_flips_orientation():
    nu1, nu2, eps = parallel_curvatures(3.0, -1.0, 0.5)
    assert eps == -1
    assert np.isclose(nu1, 6.0) and np.isclose(nu2, 2.0 / 3.0)


def test_singular_offset():
    with pytest.raises(PreconditionError, match="singular"):
        parallel_curvatures(2.0, 1.0, 1.0)


def test_composition_with_inverse():
    rng = np.random.default_rng(11)
    nu1, nu2 = rng.uniform(-1.0, 1.0, size=(2, 10_000))
    for a in OFFSETS:
        bar1, bar2, eps = parallel_curvatures(nu1, nu2, a)
        assert np.max(np.abs(inverse_parallel_curvatures(bar1, a, eps) - nu1)) <= 1e-12
        assert np.max(np.abs(inverse_parallel_curvatures(bar2, a, eps) - nu2)) <= 1e-12


def test_invariants_of_original_from_parallel():
    nu1, nu2, a = np.array([0.3, -0.7]), np.array([0.9, 0.2]), 0.4
    bar1, bar2, eps = parallel_curvatures(nu1, nu2, a)
    K_bar, H_bar, Hp_bar, _ = curvature_invariants(bar1, bar2, signed=True)
    K, H, Hp = parallel_KHH(K_bar, H_bar, Hp_bar, a, eps)
    assert np.allclose(K, nu1 * nu2)
    assert np.allclose(H, 0.5 * (nu1 + nu2))
    assert np.allclose(Hp, 0.5 * (nu1 - nu2))


def test_parallel_offset_model():
    off = ParallelOffset(0.3, -1)
    assert off.inverse == 0.3
    with pytest.raises(PreconditionError):
        ParallelOffset(0.0, 1)
    with pytest.raises(PreconditionError):
        ParallelOffset(0.1, 0)


@pytest.mark.parametrize("a", OFFSETS)
def test_offset_and_back(cmc, sinh_gordon_field, a):
    _, pair = cmc
    patch = reconstruct(pair, sinh_gordon_field(0.02))
    bar = offset_patch(patch, a)
    back = offset_patch(bar, bar.offset.inverse)
    assert np.allclose(back.z, patch.z, atol=1e-12)
    assert np.allclose(back.fields.nu1, patch.fields.nu1, atol=1e-12)
    assert np.allclose(back.frames, patch.frames, atol=1e-12)


@pytest.mark.parametrize("a", OFFSETS)
def test_offset_patch_keeps_rodrigues(cmc, sinh_gordon_field, a):
    _, pair = cmc
    patch = reconstruct(pair, sinh_gordon_field(0.02))
    bar = offset_patch(patch, a)
    f = patch.fields
    p = np.minimum(np.abs(1.0 - a * f.nu1), np.abs(1.0 - a * f.nu2))
    bound = rodrigues_residual(patch).max_abs / np.min(p)
    assert rodrigues_residual(bar).max_abs <= bound * (1.0 + 1e-6) + 1e-12


@pytest.mark.parametrize("a", OFFSETS)
def test_natural_criterion_survives_offset(cmc, sinh_gordon_field, a):
    _, pair = cmc
    result = natural_invariance(pair, sinh_gordon_field(0.02), a)
    assert result["max_rel"] <= 1e-10


@pytest.mark.parametrize("a", OFFSETS)
def test_parallel_residual_identity(cmc, sinh_gordon_field, a):
    _, pair = cmc
    report = verify_parallel_pde(pair, sinh_gordon_field(0.02), a)
    assert report.max_abs <= 1e-8


@pytest.mark.parametrize("a", OFFSETS)
def test_parallel_pair_of_solution_is_solution(cmc, sinh_gordon_field, a):
    _, pair = cmc
    report = verify_parallel_pde(pair, sinh_gordon_field(0.01, width=0.5), a)
    assert np.max(np.abs(report.components["parallel"])) <= 1e-2


def test_parallel_sign_of_linear_fractional_pair():
    pair = linear_fractional_pair(0.5, 1.0, 1.0, -0.5, (2.0, 5.0))
    a = 0.5 * (np.sqrt(5.0) - 1.0)
    assert parallel_sign(pair, a) == -1
    bar = parallel_weingarten(pair, a)
    assert bar.domain == pair.domain
    assert bar.label.endswith("|a=0.618034")


def test_parallel_pair_shrinks_domain(cmc):
    _, pair = cmc
    bar = parallel_weingarten(pair, -0.5)
    # 1 + 0.5 nu vanishes at nu = -2
    assert np.isclose(bar.domain[0], -2.0)
    assert bar.domain[1] == pair.domain[1]


def test_parallel_family_reports_singular_offsets(cmc):
    _, pair = cmc
    field = GridField.on_grid(GridSpec(8, 8), np.zeros((8, 8)), nu0=pair.nu0)
    patch = reconstruct(pair, field)
    rows, patches = parallel_family(patch, [0.1, 1.0], pair, field)
    assert [r["status"] for r in rows] == ["ok", "singular"]
    assert list(patches) == [0.1]
    assert rows[0]["eps"] == 1
    assert rows[0]["max_residual"] < 1e-12
    assert np.isclose(rows[0]["criterion_mean"], 1.0)


def test_align_patches_of_identical_patches(cmc, sinh_gordon_field):
    _, pair = cmc
    patch = reconstruct(pair, sinh_gordon_field(0.04))
    _, gap = align_patches(patch, patch)
    assert gap < 1e-12


def test_parallel_constants(cmc):
    _, pair = cmc
    a_bar, b_bar = parallel_constants(pair, 0.1, 2.0, 1.0)
    assert np.isclose(a_bar, 2.0 / 0.9)
    assert np.isclose(b_bar, 1.0)

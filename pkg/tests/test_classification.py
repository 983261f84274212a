import numpy as np
import pytest

from app.core.classification import (
    basic_relation,
    classify,
    coeffs_to_relation,
    fit_linear_relation,
    natural_pde_of,
    reduced_relation,
    reduction_residual,
    relation_to_coeffs,
)
from app.core.parallel import parallel_weingarten
from app.core.surface_invariants import curvature_invariants
from app.core.weingarten import linear_fractional_pair
from app.errors import PreconditionError
from app.models.relation import FractionalCoeffs, LinearRelation
from app.utils.text import compact_pde


def projective_gap(a, b):
    a, b = a.as_array(), b.as_array()
    a, b = a / np.linalg.norm(a), b / np.linalg.norm(b)
    return min(np.linalg.norm(a - b), np.linalg.norm(a + b))


@pytest.mark.parametrize("rel, class_id, trace, scale", [
    ((0.0, 0.0, -1.0, 1.0), "K_MINUS1", ["II.7.1"], 1.0),
    ((0.0, 1.0, -1.0, 0.0), "HPRIME1", ["I.1"], 1.0),
    ((1.0, 0.0, 1.0, 1.0), "CMC_HALF", ["II.6", "eps=+1", "I.3"], -0.5 * np.sqrt(5.0)),
    ((1.0, -2.0, 0.0, 0.0), "H_BETA_HPRIME_GT1", ["I.2.1"], 1.0),
    ((2.0, 0.0, 0.0, 0.0), "H0", ["I.2.3"], 1.0),
    ((0.0, 1.0, 0.0, 1.0), "K_2HPRIME", ["II.5"], 2.0),
])
def test_classification_examples(rel, class_id, trace, scale):
    result = classify(LinearRelation(*rel))
    assert result.basic.id == class_id
    assert result.case_trace == trace
    assert np.isclose(result.similarity_scale, scale)
    assert reduction_residual(result) <= 1e-10


def test_golden_ratio_offset():
    result = classify(LinearRelation(1.0, 0.0, 1.0, 1.0))
    assert np.isclose(result.offset_a, 0.5 * (np.sqrt(5.0) - 1.0))
    assert result.eps == 1


def test_coeffs_and_relation_convert_both_ways():
    rel = coeffs_to_relation(FractionalCoeffs(1.0, 1.0, 0.0, -1.0))
    assert rel == LinearRelation(2.0, 0.0, 1.0, 0.0)
    assert relation_to_coeffs(rel) == FractionalCoeffs(1.0, 1.0, 0.0, -1.0)


def test_umbilic_coeffs_are_rejected():
    with pytest.raises(PreconditionError, match="umbilic"):
        FractionalCoeffs(1.0, 0.0, 0.0, 1.0).require_admissible()
    with pytest.raises(PreconditionError):
        coeffs_to_relation(FractionalCoeffs(1.0, 0.0, 0.0, 1.0))


@pytest.mark.parametrize("rel", [
    (0.0, 1.0, 0.0, 0.0),
    (2.0, 0.0, -1.0, 1.0),
    (np.nan, 0.0, 1.0, 1.0),
])
def test_inadmissible_relations(rel):
    with pytest.raises(PreconditionError):
        classify(LinearRelation(*rel))


@pytest.mark.slow
def test_random_relations_reduce_to_basic_classes():
    rng = np.random.default_rng(7)
    checked = 0
    while checked < 100_000:
        rel = LinearRelation(*rng.uniform(-2.0, 2.0, size=4))
        # keep away from the boundaries between cases
        if min(abs(rel.delta), abs(rel.discriminant), abs(rel.alpha ** 2 + 4.0 * rel.gamma * rel.delta)) < 1e-2:
            continue
        result = classify(rel)
        assert reduction_residual(result) <= 1e-8, (rel, result.case_trace)

        reduced = reduced_relation(rel.normalized(), result.offset_a, result.eps)
        if result.case_trace[0] == "II.6":
            assert abs(reduced.delta) <= 1e-10
        elif result.case_trace[0].startswith("II.7"):
            assert abs(reduced.alpha) <= 1e-10
        checked += 1


def fractional_pair_for(rel):
    """A linear fractional pair satisfying rel on a unit interval next to its pole"""
    fc = relation_to_coeffs(rel)
    pole = -fc.D / fc.C
    for lo in (pole + 0.5, pole + 2.0, pole - 1.5, pole - 3.0):
        try:
            return linear_fractional_pair(fc.A, fc.B, fc.C, fc.D, (lo, lo + 1.0))
        except PreconditionError:
            continue
    return None


def test_random_relations_take_eps_from_the_pair():
    rng = np.random.default_rng(11)
    checked = {1: 0, -1: 0}
    while sum(checked.values()) < 200:
        rel = LinearRelation(*rng.uniform(-2.0, 2.0, size=4))
        if min(abs(rel.delta), abs(rel.discriminant), abs(rel.alpha ** 2 + 4.0 * rel.gamma * rel.delta)) < 1e-1:
            continue
        pair = fractional_pair_for(rel)
        if pair is None:
            continue
        try:
            result = classify(rel, pair)
            bar = parallel_weingarten(pair, result.offset_a)
        except PreconditionError:
            continue
        lo, hi = bar.domain
        nu = lo + (hi - lo) * np.linspace(0.25, 0.75, 40)
        p_f, p_g = 1.0 - result.offset_a * pair.f(nu), 1.0 - result.offset_a * pair.g(nu)
        assert np.all(np.sign(p_f * p_g) == result.eps)
        K, H, Hp, _ = curvature_invariants(bar.f(nu), bar.g(nu), signed=True)
        fitted, _ = fit_linear_relation(K, H, Hp)
        assert projective_gap(fitted, result.reduced) <= 1e-6, (rel, result.case_trace)
        checked[result.eps] += 1
    assert checked[1] > 0 and checked[-1] > 0


def test_pair_decides_orientation():
    pair = linear_fractional_pair(0.5, 1.0, 1.0, -0.5, (2.0, 5.0))
    rel = coeffs_to_relation(FractionalCoeffs(0.5, 1.0, 1.0, -0.5))
    assert rel == LinearRelation(1.0, 0.0, 1.0, 1.0)
    result = classify(rel, pair)
    assert result.eps == -1
    assert result.case_trace == ["II.6", "eps=-1", "I.3"]
    assert np.allclose(result.reduced.as_array()[:3], [-np.sqrt(5.0), 0.0, 1.0])
    assert reduction_residual(result) <= 1e-10


def test_fitted_relation_of_sampled_pair():
    pair = linear_fractional_pair(0.5, 1.0, 1.0, -0.5, (2.0, 5.0))
    nu = pair.sample(50)
    K, H, Hp, _ = curvature_invariants(pair.f(nu), pair.g(nu), signed=True)
    rel, rms = fit_linear_relation(K, H, Hp)
    assert rms < 1e-10
    assert np.allclose(rel.as_array(), [1.0, 0.0, 1.0, 1.0], atol=1e-8)


def test_parallel_pair_satisfies_reduced_relation():
    pair = linear_fractional_pair(0.5, 1.0, 1.0, -0.5, (2.0, 5.0))
    result = classify(LinearRelation(1.0, 0.0, 1.0, 1.0), pair)
    bar = parallel_weingarten(pair, result.offset_a)
    nu = bar.sample(50)
    K, H, Hp, _ = curvature_invariants(bar.f(nu), bar.g(nu), signed=True)
    fitted, _ = fit_linear_relation(K, H, Hp)
    assert projective_gap(fitted, result.reduced) <= 1e-8


def test_fit_needs_samples():
    with pytest.raises(PreconditionError):
        fit_linear_relation([1.0], [1.0], [1.0])


def test_basic_relations_of_parametrised_classes():
    assert basic_relation("K_BETA_HPRIME_GAMMA", {"beta": 0.5, "gamma": 2.0}) == LinearRelation(0.0, 0.5, 2.0, 1.0)
    assert basic_relation("H_BETA_HPRIME_PLUS1_LT1", {"beta": 0.5}) == LinearRelation(1.0, -0.5, -1.0, 0.0)
    with pytest.raises(PreconditionError):
        basic_relation("NOT_A_CLASS")


def test_scaled_relation_of_homothety():
    rel = LinearRelation(1.0, 2.0, 3.0, 4.0).scaled(2.0)
    assert rel == LinearRelation(2.0, 4.0, 12.0, 4.0)


def test_natural_pde_of_classified_relation():
    result = classify(LinearRelation(0.0, 0.0, -1.0, 1.0))
    assert compact_pde(natural_pde_of(result)) == "Δλ=−sin λ"

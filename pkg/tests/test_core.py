"""Tests for the core set-function module."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from regsubmod import (
    CapabilityError,
    ContractViolation,
    Coverage,
    DirectedCut,
    ExplicitTable,
    FractionalPoint,
    HyperDirectedCut,
    Instance,
    LinearFn,
    StructuralError,
    UndirectedCut,
)
from regsubmod.bench import random_coverage, random_cut, random_dicut
from regsubmod.core import (
    audit_submodular,
    complement_transform,
    describe,
    evaluate,
    from_mask,
    is_nonnegative,
    marginal,
    multilinear_exact,
    multilinear_gradient,
    multilinear_sampled,
    sampled_gradient,
    subset_probabilities,
    to_mask,
)


@pytest.fixture
def arc():
    """Single arc 0 → 1 with weight 0.3513."""
    return DirectedCut(2, ((0, 1, 0.3513),))


@pytest.fixture
def triangle():
    """Unit-weight triangle."""
    return UndirectedCut(3, ((0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)))


def test_mask_conversion():
    """Test that element 0 is bit 0."""
    assert to_mask({0, 2}) == 0b101
    assert from_mask(0b101, 4) == frozenset({0, 2})
    assert to_mask(set()) == 0


def test_dicut_values(arc):
    """Test directed cut evaluation on every subset."""
    assert evaluate(arc, set()) == 0.0
    assert evaluate(arc, {0}) == pytest.approx(0.3513)
    assert evaluate(arc, {1}) == 0.0
    assert evaluate(arc, {0, 1}) == 0.0


def test_dicut_multilinear(arc):
    """Test the closed-form multilinear extension of an arc."""
    assert multilinear_exact(arc, FractionalPoint.full(2, 0.5)) == pytest.approx(0.087825)


def test_evaluate_out_of_range(arc):
    """Test that elements outside the ground set are rejected."""
    with pytest.raises(StructuralError):
        evaluate(arc, {2})


def test_marginal(triangle):
    """Test marginal values of the triangle."""
    assert marginal(triangle, 0, set()) == 2.0
    assert marginal(triangle, 2, {0, 1}) == -2.0


def test_marginal_element_in_set(triangle):
    """Test that f(u | S) with u ∈ S is a contract violation."""
    with pytest.raises(ContractViolation):
        marginal(triangle, 0, {0})


def test_undirected_cut_values(triangle):
    """Test the triangle cut: one vertex cuts two edges, all three cut none."""
    assert evaluate(triangle, {0}) == 2.0
    assert evaluate(triangle, {0, 1}) == 2.0
    assert evaluate(triangle, {0, 1, 2}) == 0.0


def test_hyperdicut_values():
    """Test that a hyperedge counts when a tail is in S and some head is out."""
    f = HyperDirectedCut(4, ((frozenset({0, 1}), frozenset({2, 3}), 1.0),))
    assert evaluate(f, {0}) == 1.0
    assert evaluate(f, {1, 2}) == 1.0
    assert evaluate(f, {0, 2, 3}) == 0.0
    assert evaluate(f, {2, 3}) == 0.0


def test_hyperdicut_overlap_rejected():
    """Test that tails and heads must be disjoint."""
    with pytest.raises(StructuralError):
        HyperDirectedCut(3, ((frozenset({0, 1}), frozenset({1, 2}), 1.0),))


def test_coverage_values():
    """Test weighted coverage."""
    f = Coverage(3, (frozenset({0}), frozenset({0, 1}), frozenset()), (2.0, 3.0))
    assert evaluate(f, {0}) == 2.0
    assert evaluate(f, {1}) == 5.0
    assert evaluate(f, {0, 1, 2}) == 5.0
    assert evaluate(f, {2}) == 0.0


def test_explicit_table_rejects_non_submodular():
    """Test that a supermodular table fails the audit."""
    with pytest.raises(StructuralError):
        ExplicitTable(2, np.array([0.0, 0.0, 0.0, 1.0]))


def test_explicit_table_size_mismatch():
    """Test that a table needs exactly 2^n values."""
    with pytest.raises(StructuralError):
        ExplicitTable(2, np.array([0.0, 1.0, 1.0]))


def test_negative_weights_rejected():
    """Test that negative edge weights are structural errors."""
    with pytest.raises(StructuralError):
        DirectedCut(2, ((0, 1, -1.0),))


def test_linear_fn_parts():
    """Test ℓ_+ and ℓ_− and L(x)."""
    ell = LinearFn(np.array([1.0, -2.0, 0.5]))
    assert list(ell.positive_part().weights) == [1.0, 0.0, 0.5]
    assert list(ell.negative_part().weights) == [0.0, -2.0, 0.0]
    assert ell.value({0, 1}) == -1.0
    assert ell.at(FractionalPoint(np.array([0.5, 0.5, 1.0]))) == pytest.approx(0.0)
    assert not ell.nonpositive() and not ell.nonnegative()


def test_instance_ground_set_mismatch(arc):
    """Test that ℓ must match the ground set of f."""
    with pytest.raises(StructuralError):
        Instance(arc, LinearFn.zeros(3))


def test_instance_objective(arc):
    """Test f(S) + ℓ(S)."""
    inst = Instance(arc, LinearFn(np.array([0.1, -1.0])))
    assert inst.objective({0}) == pytest.approx(0.4513)


def test_fractional_point_bounds():
    """Test that coordinates outside [0,1] are rejected."""
    with pytest.raises(StructuralError):
        FractionalPoint(np.array([0.5, 1.5]))


def test_fractional_point_lattice_ops():
    """Test join, meet and support."""
    x = FractionalPoint(np.array([0.2, 0.0, 1.0]))
    y = FractionalPoint(np.array([0.5, 0.3, 0.0]))
    assert list(x.join(y).coords) == [0.5, 0.3, 1.0]
    assert list(x.meet(y).coords) == [0.2, 0.0, 0.0]
    assert x.support() == frozenset({0, 2})
    with pytest.raises(ContractViolation):
        x.to_set()


def test_subset_probabilities_sum_to_one():
    """Test the distribution of R(x)."""
    probs = subset_probabilities(np.array([0.2, 0.7, 0.5]))
    assert probs.sum() == pytest.approx(1.0)
    assert probs[0b011] == pytest.approx(0.2 * 0.7 * 0.5)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10_000), n=st.integers(2, 7))
def test_multilinear_matches_indicator(seed, n):
    """Test F(1_S) = f(S) for every S on random cut and coverage functions."""
    for inst in (random_dicut(n, seed=seed), random_cut(n, seed=seed), random_coverage(n, seed=seed)):
        values = inst.f.values_all()
        for mask in range(1 << n):
            S = from_mask(mask, n)
            assert multilinear_exact(inst.f, FractionalPoint.of_set(S, n)) == pytest.approx(values[mask])


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10_000), n=st.integers(2, 8))
def test_random_functions_submodular(seed, n):
    """Test that generated set functions pass the submodularity audit and are non-negative."""
    for inst in (random_dicut(n, seed=seed), random_cut(n, seed=seed), random_coverage(n, seed=seed)):
        assert audit_submodular(inst.f)
        assert is_nonnegative(inst.f)


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 10_000), n=st.integers(2, 6))
def test_closed_form_matches_table(seed, n):
    """Test that closed-form extensions agree with table enumeration."""
    rng = np.random.default_rng(seed)
    x = rng.random(n)
    for inst in (random_dicut(n, seed=seed), random_coverage(n, seed=seed)):
        table = inst.f.to_table()
        assert multilinear_exact(inst.f, x) == pytest.approx(multilinear_exact(table, x))


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 10_000), n=st.integers(2, 7))
def test_complement_involution(seed, n):
    """Test that complementing twice gives back f and ℓ."""
    inst = random_dicut(n, seed=seed)
    g, neg = complement_transform(inst.f, inst.ell)
    f2, ell2 = complement_transform(g, neg)
    assert np.allclose(f2.values_all(), inst.f.values_all())
    assert np.allclose(ell2.weights, inst.ell.weights)
    full = frozenset(range(n))
    for mask in range(1 << n):
        S = from_mask(mask, n)
        assert g.value(S) == pytest.approx(inst.f.value(full - S))


def test_complement_of_coverage_is_table():
    """Test that coverage complements through a table."""
    inst = random_coverage(4, seed=3)
    g, _ = complement_transform(inst.f, inst.ell)
    assert isinstance(g, ExplicitTable)
    assert g.value(set()) == pytest.approx(inst.f.value({0, 1, 2, 3}))


def test_gradient_matches_difference(triangle):
    """Test the exact gradient against F(x_u=1) − F(x_u=0)."""
    x = np.array([0.2, 0.5, 0.9])
    grad = multilinear_gradient(triangle, x)
    generic = triangle.to_table().gradient(x)
    assert np.allclose(grad, generic)


def test_sampled_estimates_close():
    """Test the Monte Carlo estimates against the exact values."""
    inst = random_dicut(6, seed=11)
    x = np.full(6, 0.4)
    mean, stderr = multilinear_sampled(inst.f, x, 4000, rng_seed=5)
    assert abs(mean - multilinear_exact(inst.f, x)) <= 4 * stderr + 1e-12
    grad = sampled_gradient(inst.f, x, 4000, rng_seed=5)
    assert np.allclose(grad, multilinear_gradient(inst.f, x), atol=0.15)


def test_sampled_needs_positive_samples(arc):
    """Test that zero samples is a contract violation."""
    with pytest.raises(ContractViolation):
        multilinear_sampled(arc, np.zeros(2), 0, rng_seed=0)


def test_sampled_within_three_stderr_mostly():
    """Test that the sampled estimate lands within 3 standard errors on almost every seed."""
    inst = random_dicut(6, seed=2)
    x = np.random.default_rng(2).random(6)
    exact = multilinear_exact(inst.f, x)
    hits = 0
    for seed in range(100):
        mean, stderr = multilinear_sampled(inst.f, x, 500, rng_seed=seed)
        hits += abs(mean - exact) <= 3 * stderr
    assert hits >= 95


def test_table_enumeration_limit():
    """Test that enumeration beyond 24 elements is refused."""
    f = DirectedCut(25, ((0, 1, 1.0),))
    with pytest.raises(CapabilityError):
        f.values_all()


def test_describe(triangle):
    """Test the short summary."""
    assert describe(triangle) == {"type": "cut", "n": 3, "edges": 3}

"""Tests for double greedy and the oblivious directed cut algorithm."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from regsubmod import CapabilityError, ContractViolation, LinearFn
from regsubmod.bench import (
    brute_force_opt,
    dg_rand_bad,
    dg_rand_bad_expectation,
    dg_tight_det,
    dg_tight_rand,
    dg_tight_rand_expectation,
    random_cut,
    random_dicut,
)
from regsubmod.doublegreedy import (
    deterministic_dg,
    exact_dg_expectation,
    oblivious_dicut,
    oblivious_dicut_expectation,
    randomized_dg,
)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10_000), n=st.integers(2, 8), r=st.sampled_from([1.0, 1.5, 2.0, 4.0]))
def test_deterministic_guarantee(seed, n, r):
    """Test f(X)+ℓ(X) ≥ (f(OPT) + (r+1)ℓ(OPT))/(r+1+1/r) and ≥ ℓ(OPT) for ℓ ≥ 0."""
    inst = random_dicut(n, ell_dist="nonneg", seed=seed)
    opt, _ = brute_force_opt(inst.f, inst.ell)
    X, trace = deterministic_dg(inst.f, inst.ell, r)
    denom = r + 1 + 1 / r
    value = inst.objective(X)
    assert value >= (inst.f.value(opt) + (r + 1) * inst.ell.value(opt)) / denom - 1e-9
    assert value >= inst.ell.value(opt) - 1e-9
    assert trace.check_nesting(n)
    assert all(s.gain_x - s.gain_y >= -1e-9 for s in trace.steps)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10_000), n=st.integers(2, 8), r=st.sampled_from([1.0, 2.0, 3.0]))
def test_randomized_guarantee(seed, n, r):
    """Test the exact expectation of randomized double greedy against its (α, β) line."""
    inst = random_cut(n, ell_dist="nonneg", seed=seed)
    opt, _ = brute_force_opt(inst.f, inst.ell)
    denom = r + 2 + 1 / r
    bound = 2 / denom * inst.f.value(opt) + (r + 2) / denom * inst.ell.value(opt)
    assert exact_dg_expectation(inst.f, inst.ell) >= bound - 1e-9


def test_deterministic_tight_instance():
    """Test that deterministic double greedy keeps u_1 on the tight instance."""
    r, eps = 2.0, 0.1
    inst = dg_tight_det(r, eps)
    X, _ = deterministic_dg(inst.f, inst.ell, r)
    assert X == frozenset({0})
    assert inst.objective(X) == pytest.approx(r + eps / 2)
    assert inst.objective({1}) == pytest.approx(1 + r)


def test_deterministic_rejects_small_r():
    """Test that r < 1 is rejected."""
    inst = random_dicut(3, seed=0)
    with pytest.raises(ContractViolation):
        deterministic_dg(inst.f, inst.ell, 0.5)


def test_order_must_be_permutation():
    """Test that a custom order must list every element once."""
    inst = random_dicut(3, seed=0)
    with pytest.raises(ContractViolation):
        deterministic_dg(inst.f, inst.ell, order=[0, 0, 1])
    X, trace = deterministic_dg(inst.f, inst.ell, order=[2, 1, 0])
    assert [s.element for s in trace.steps] == [2, 1, 0]


def test_randomized_run_is_seeded():
    """Test that a randomized run is a pure function of its seed."""
    inst = random_dicut(8, seed=4)
    first, trace = randomized_dg(inst.f, inst.ell, rng_seed=9)
    second, _ = randomized_dg(inst.f, inst.ell, rng_seed=9)
    assert first == second
    assert trace.check_nesting(8)
    assert all(0.0 <= s.probability <= 1.0 for s in trace.steps)


def test_randomized_sample_mean_matches_expectation():
    """Test that sampled runs average to the exact expectation."""
    inst = random_dicut(5, ell_dist="nonneg", seed=6)
    exact = exact_dg_expectation(inst.f, inst.ell)
    runs = [inst.objective(randomized_dg(inst.f, inst.ell, rng_seed=s)[0]) for s in range(3000)]
    assert np.mean(runs) == pytest.approx(exact, abs=4 * np.std(runs) / np.sqrt(len(runs)) + 1e-9)


def test_exact_expectation_size_limit():
    """Test that the decision tree walk is capped at 14 elements."""
    inst = random_dicut(15, seed=0)
    with pytest.raises(CapabilityError):
        exact_dg_expectation(inst.f, inst.ell)


@pytest.mark.parametrize("n, r", [(4, 1.0), (6, 2.0), (7, 3.0)])
def test_star_closed_forms(n, r):
    """Test the binomial closed forms on star instances against the tree walk."""
    tight = dg_tight_rand(n, r)
    assert dg_tight_rand_expectation(n, r) == pytest.approx(exact_dg_expectation(tight.f, tight.ell))
    bad = dg_rand_bad(n, r)
    assert dg_rand_bad_expectation(n, r) == pytest.approx(exact_dg_expectation(bad.f, bad.ell))


def test_star_tight_large():
    """Test that the tight star expectation approaches r²/(r+1) from above."""
    r = 4.0
    value = dg_tight_rand_expectation(41, r)
    assert r * r / (r + 1) <= value < r * r / (r + 1) + 0.05 * r


def test_star_bad_instance_value():
    """Test that {centre} is worth 1 on the bad star while double greedy gets far less."""
    r = 4.0
    inst = dg_rand_bad(41, r)
    assert inst.objective({40}) == pytest.approx(1.0)
    assert dg_rand_bad_expectation(41, r) < 0.4


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10_000), n=st.integers(2, 8), beta=st.floats(0.05, 0.95))
def test_oblivious_guarantee(seed, n, beta):
    """Test E[f+ℓ] ≥ max β(1−β)f(S) + βℓ(S) for the oblivious algorithm with any ℓ."""
    inst = random_dicut(n, ell_dist="mixed", seed=seed)
    _, target = brute_force_opt(inst.f, inst.ell, alpha=beta * (1 - beta), beta=beta)
    assert oblivious_dicut_expectation(inst.f, inst.ell, beta) >= target - 1e-9


def test_oblivious_skips_ineligible():
    """Test that a vertex with (1−β)out(v) + ℓ(v) < 0 is never selected."""
    inst = random_dicut(4, seed=1)
    ell = LinearFn(np.array([-100.0, 0.0, 0.0, 0.0]))
    for seed in range(20):
        assert 0 not in oblivious_dicut(inst.f, ell, 0.9, rng_seed=seed)


def test_oblivious_contract():
    """Test that the oblivious algorithm needs a directed cut and β ∈ [0,1]."""
    cut = random_cut(4, seed=0)
    with pytest.raises(ContractViolation):
        oblivious_dicut(cut.f, cut.ell, 0.5)
    dicut = random_dicut(4, seed=0)
    with pytest.raises(ContractViolation):
        oblivious_dicut_expectation(dicut.f, dicut.ell, 1.5)

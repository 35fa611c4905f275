"""Tests for continuous greedy runs and the composite pipelines."""

import math

import numpy as np
import pytest

from regsubmod import (
    CgConfig,
    ContractViolation,
    LinearFn,
    Polytope,
    SolverConfig,
    Uniform,
    pipeline_0280,
    pipeline_nonneg_csm,
    pipeline_nonneg_usm_beta1,
    pipeline_nonneg_usm_combined,
    pipeline_nonpos,
    pipeline_unconstrained,
)
from regsubmod.bench import brute_force_opt, random_cut, random_dicut
from regsubmod.contgreedy import (
    aided_mcg,
    cg_trajectory,
    distorted_measured_cg,
    guess_ell_values,
    local_search,
    measured_cg,
    trivial_approx,
)
from regsubmod.core import FractionalPoint, multilinear_exact
from regsubmod.doublegreedy import randomized_dg
from regsubmod.enums import GuessMode
from regsubmod.matroid import maximize_linear


@pytest.fixture
def cfg():
    """Small discretization for fast runs."""
    return SolverConfig(steps=30, eps=1.0, seed=3)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_measured_cg_value(seed):
    """Test F(y(1)) ≥ (1/e − 0.03)·f(OPT) on the cube."""
    inst = random_dicut(6, ell_dist="zero", seed=seed)
    run = CgConfig(t_f=1.0, steps=50)
    y = measured_cg(inst.f, inst.ell, Polytope.cube(6), run)
    _, f_opt = brute_force_opt(inst.f, inst.ell)
    assert multilinear_exact(inst.f, y) >= (1 / math.e - 0.03) * f_opt


def test_measured_cg_feasible_under_matroid():
    """Test that y(t) stays in t·P for a uniform matroid."""
    inst = random_dicut(6, ell_dist="zero", seed=5)
    p = Polytope.of(6, Uniform(6, 2))
    run = CgConfig(t_f=1.0, steps=20)
    path = cg_trajectory(inst.f, inst.ell, p, run)
    assert len(path) == 21
    for k, y in enumerate(path[1:], start=1):
        assert p.scaled(k * run.delta).contains(y)


def test_trajectory_monotone_and_capped():
    """Test y(t) is non-decreasing and y_u(kδ) ≤ 1 − (1−δ)^k."""
    inst = random_cut(5, ell_dist="nonneg", seed=4)
    run = CgConfig(t_f=1.5, steps=30)
    coords = np.array([y.coords for y in cg_trajectory(inst.f, inst.ell, Polytope.cube(5), run)])
    assert np.all(np.diff(coords, axis=0) >= -1e-12)
    caps = 1.0 - (1.0 - run.delta) ** np.arange(len(coords))
    assert np.all(coords <= caps[:, None] + 1e-12)


def test_distorted_matches_plain_when_ell_zero():
    """Test that the distortion factor has no effect when ℓ ≡ 0."""
    inst = random_dicut(5, ell_dist="zero", seed=8)
    run = CgConfig(t_f=1.0, steps=25)
    plain = measured_cg(inst.f, inst.ell, Polytope.cube(5), run)
    distorted = distorted_measured_cg(inst.f, inst.ell, Polytope.cube(5), run)
    assert np.allclose(plain.coords, distorted.coords)


def test_aided_run_avoids_helper_support():
    """Test that support(z) stays at zero before the switch time."""
    inst = random_dicut(5, ell_dist="zero", seed=2)
    z = FractionalPoint.of_set({0, 1}, 5)
    run = CgConfig(t_s=0.5, t_f=1.0, steps=20)
    path = cg_trajectory(inst.f, inst.ell, Polytope.cube(5), run, z=z)
    for k, y in enumerate(path):
        if k * run.delta <= 0.5:
            assert y.coords[0] == 0.0 and y.coords[1] == 0.0


def test_aided_rejects_outside_helper():
    """Test that z must lie in the polytope."""
    inst = random_dicut(4, seed=0)
    p = Polytope.of(4, Uniform(4, 1))
    with pytest.raises(ContractViolation):
        aided_mcg(inst.f, inst.ell, FractionalPoint.of_set({0, 1}, 4), p, CgConfig())


def test_local_search_improves(cfg):
    """Test that local search never ends below its starting vertex and stays feasible."""
    inst = random_cut(5, ell_dist="zero", seed=6)
    p = Polytope.of(5, Uniform(5, 3))
    result = local_search(inst.f, inst.ell, p, cfg)
    assert p.contains(result.point)
    assert result.iterations >= 1
    start = maximize_linear(p, inst.f.gradient(np.zeros(5)))
    assert multilinear_exact(inst.f, result.point) >= multilinear_exact(inst.f, start) - 1e-12


def test_guess_ell_values():
    """Test the guessing grid for non-positive ℓ."""
    assert guess_ell_values(LinearFn([-1.0, -2.0]), 1.0) == [0.0, -1.0, -2.0, -4.0]
    assert guess_ell_values(LinearFn([1.0, -2.0]), 1.0, GuessMode.NEGATIVE_PART) == [0.0, -2.0, -4.0]
    with pytest.raises(ContractViolation):
        guess_ell_values(LinearFn([1.0, -2.0]), 1.0)
    with pytest.raises(ContractViolation):
        guess_ell_values(LinearFn([-1.0]), 0.0)


def test_trivial_approx():
    """Test that the trivial approximation picks the best independent ℓ-set."""
    ell = LinearFn([0.1, 0.5, -1.0])
    assert trivial_approx(ell, Polytope.of(3, Uniform(3, 1))) == frozenset({1})
    assert trivial_approx(ell, Polytope.cube(3)) == frozenset({0, 1})


@pytest.mark.parametrize("seed", [0, 1])
def test_pipeline_nonpos(seed, cfg):
    """Test the non-positive pipeline against a relaxed line below its guarantee."""
    inst = random_dicut(5, ell_dist="nonpos", seed=seed)
    result = pipeline_nonpos(inst.f, inst.ell, beta=1.0, cfg=cfg)
    assert result.value == pytest.approx(inst.objective(result.subset))
    assert result.value >= 0.0
    _, target = brute_force_opt(inst.f, inst.ell, alpha=0.3, beta=1.0 + cfg.eps)
    assert result.value >= target - 1e-9


def test_pipeline_nonpos_with_matroid(cfg):
    """Test that matroid runs return independent sets and reject t_f > 1."""
    m = Uniform(5, 2)
    inst = random_cut(5, ell_dist="nonpos", seed=3, constraint=m)
    result = pipeline_nonpos(inst.f, inst.ell, m, cfg=cfg, pairs=[(0.3, 1.0)])
    assert m.is_independent(result.subset)
    assert result.candidates >= 3
    with pytest.raises(ContractViolation):
        pipeline_nonpos(inst.f, inst.ell, m, cfg=cfg, pairs=[(0.3, 1.2)])


def test_pipeline_nonpos_rejects_positive_ell(cfg):
    """Test that ℓ must be non-positive."""
    inst = random_dicut(4, ell_dist="nonneg", seed=0)
    with pytest.raises(ContractViolation):
        pipeline_nonpos(inst.f, inst.ell, cfg=cfg, pairs=[(0.0, 1.0)])


def test_pipeline_nonneg_csm(cfg):
    """Test the matroid pipeline for ℓ ≥ 0 beats its trivial candidate."""
    m = Uniform(5, 2)
    inst = random_dicut(5, ell_dist="nonneg", seed=7, constraint=m)
    p = Polytope.of(5, m)
    result = pipeline_nonneg_csm(inst.f, inst.ell, m, cfg, pairs=[(0.0, 1.0), (0.5, 1.0)])
    assert m.is_independent(result.subset)
    assert result.value >= inst.objective(trivial_approx(inst.ell, p, cfg.seed)) - 1e-12
    with pytest.raises(ContractViolation):
        pipeline_nonneg_csm(inst.f, -inst.ell, m, cfg)


@pytest.mark.parametrize("seed", [0, 4])
def test_pipeline_unconstrained(seed, cfg):
    """Test the distorted pipeline for ℓ ≥ 0 against a relaxed line."""
    inst = random_dicut(6, ell_dist="nonneg", seed=seed)
    result = pipeline_unconstrained(inst.f, inst.ell, t=1.0, cfg=cfg)
    _, target = brute_force_opt(inst.f, inst.ell, alpha=0.2, beta=0.7)
    assert result.value >= target - 1e-9


def test_pipeline_unconstrained_time_limits(cfg):
    """Test the stopping time contract."""
    inst = random_dicut(4, seed=0)
    with pytest.raises(ContractViolation):
        pipeline_unconstrained(inst.f, inst.ell, t=0.0, cfg=cfg)
    with pytest.raises(ContractViolation):
        pipeline_unconstrained(inst.f, inst.ell, Uniform(4, 2), t=1.5, cfg=cfg)


def test_pipeline_0280(cfg):
    """Test the mixed-sign matroid pipeline."""
    m = Uniform(5, 3)
    inst = random_dicut(5, ell_dist="mixed", seed=9, constraint=m)
    result = pipeline_0280(inst.f, inst.ell, m, cfg)
    assert m.is_independent(result.subset)
    trivial = trivial_approx(inst.ell, Polytope.of(5, m), cfg.seed)
    assert result.value >= inst.objective(trivial) - 1e-12


@pytest.fixture
def fine_cfg():
    """Default discretization, used for the guarantee lines."""
    return SolverConfig(steps=200, eps=0.5, seed=1)


def _line(inst, alpha, beta):
    _, target = brute_force_opt(inst.f, inst.ell, inst.constraint, alpha, beta)
    return target - 1e-9


@pytest.mark.parametrize("seed", [0, 1, 2])
@pytest.mark.parametrize("k", [None, 3])
def test_pipeline_nonpos_guarantee(seed, k, fine_cfg):
    """Test value ≥ 0.35·f(OPT) + ℓ(OPT) at β = 1."""
    inst = random_dicut(6, ell_dist="nonpos", seed=seed, constraint=None if k is None else Uniform(6, k))
    result = pipeline_nonpos(inst.f, inst.ell, inst.constraint, beta=1.0, cfg=fine_cfg)
    assert result.value >= _line(inst, 0.35, 1.0)


@pytest.mark.parametrize("seed", range(5))
def test_pipeline_unconstrained_guarantee(seed, fine_cfg):
    """Test value ≥ (1/(e+1) − 0.05)·f(OPT) + e/(e+1)·ℓ(OPT) for mixed-sign ℓ at t = 1."""
    inst = random_dicut(6, ell_dist="mixed", seed=seed)
    result = pipeline_unconstrained(inst.f, inst.ell, t=1.0, cfg=fine_cfg)
    assert result.value >= _line(inst, 1.0 / (math.e + 1.0) - 0.05, math.e / (math.e + 1.0))


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_pipeline_nonneg_csm_guarantee(seed, fine_cfg):
    """Test value ≥ (1/e − 0.05)·f(OPT) + (1 − 1/e)·ℓ(OPT) under a uniform matroid."""
    m = Uniform(6, 3)
    inst = random_dicut(6, ell_dist="nonneg", seed=seed, constraint=m)
    result = pipeline_nonneg_csm(inst.f, inst.ell, m, fine_cfg)
    assert result.value >= _line(inst, 1.0 / math.e - 0.05, 1.0 - 1.0 / math.e)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_pipeline_0280_guarantee(seed, fine_cfg):
    """Test value ≥ 0.24·f(OPT) + 0.7·ℓ(OPT) for mixed-sign ℓ under a uniform matroid."""
    m = Uniform(6, 3)
    inst = random_dicut(6, ell_dist="mixed", seed=seed, constraint=m)
    result = pipeline_0280(inst.f, inst.ell, m, fine_cfg)
    assert m.is_independent(result.subset)
    assert result.value >= _line(inst, 0.24, 0.7)


def test_pipeline_nonneg_usm_beta1(cfg):
    """Test that the complement pipeline maps its answer back to the original ground set."""
    inst = random_dicut(5, ell_dist="nonneg", seed=1)
    result = pipeline_nonneg_usm_beta1(inst.f, inst.ell, cfg)
    assert result.label.startswith("complement:")
    assert result.value == pytest.approx(inst.objective(result.subset))
    with pytest.raises(ContractViolation):
        pipeline_nonneg_usm_beta1(inst.f, -inst.ell, cfg)


def test_pipeline_nonneg_usm_combined(cfg):
    """Test that the combined pipeline is at least as good as its first double greedy run."""
    inst = random_cut(5, ell_dist="nonneg", seed=2)
    result = pipeline_nonneg_usm_combined(inst.f, inst.ell, cfg, beta=0.9)
    first, _ = randomized_dg(inst.f, inst.ell, rng_seed=cfg.seed)
    assert result.value >= inst.objective(first) - 1e-12

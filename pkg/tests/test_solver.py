"""Tests for the Solver facade."""

import pytest

from regsubmod import Algorithm, ContractViolation, Solver, Uniform, brute_force_opt, random_dicut
from regsubmod.bench import random_cut


@pytest.fixture
def solver(monkeypatch):
    monkeypatch.delenv("REGSUBMOD_SEED", raising=False)
    monkeypatch.delenv("REGSUBMOD_THREADS", raising=False)
    return Solver(seed=7, steps=30, eps=1.0)


def test_brute_record(solver):
    """Test that the record splits f and ℓ and matches brute force."""
    inst = random_dicut(6, seed=2)
    record = solver.solve(inst, "brute")
    subset, value = brute_force_opt(inst.f, inst.ell)
    assert record.algorithm is Algorithm.BRUTE
    assert record.subset == subset
    assert record.total == pytest.approx(value)
    assert record.total == pytest.approx(record.f + record.ell)
    assert record.elements == sorted(subset)
    assert record.seed == 7
    assert record.runtime_ms >= 0.0


def test_seed_override(solver):
    """Test that a per-call seed is recorded and reproducible."""
    inst = random_dicut(8, seed=5)
    first = solver.solve(inst, Algorithm.RANDOMIZED_DG, seed=11)
    second = solver.solve(inst, Algorithm.RANDOMIZED_DG, seed=11)
    assert first.seed == 11
    assert first.subset == second.subset


def test_double_greedy_params(solver):
    """Test that only the deterministic variant records r."""
    inst = random_dicut(5, seed=1)
    assert solver.solve(inst, "deterministic-dg", r=2.0).params == {"r": 2.0}
    assert solver.solve(inst, "randomized-dg", r=2.0).params == {}


def test_unknown_algorithm(solver):
    """Test that unknown names list the valid ones."""
    with pytest.raises(ContractViolation, match="randomized-dg"):
        solver.solve(random_dicut(3, seed=0), "annealing")


def test_constraint_rejected(solver):
    """Test that double greedy refuses a matroid constraint."""
    inst = random_dicut(4, seed=0, constraint=Uniform(4, 2))
    with pytest.raises(ContractViolation):
        solver.solve(inst, "deterministic-dg")


def test_ts_tf_pairing(solver):
    """Test that ts without tf is rejected."""
    with pytest.raises(ContractViolation):
        solver.solve(random_dicut(4, seed=0, ell_dist="nonpos"), "pipeline-nonpos", ts=0.2)


def test_single_aided_run(solver):
    """Test a single (ts, tf) pipeline run is recorded in params."""
    inst = random_dicut(5, seed=4, ell_dist="nonpos", constraint=Uniform(5, 2))
    record = solver.solve(inst, "pipeline-nonpos", ts=0.3, tf=1.0)
    assert record.params["ts"] == 0.3
    assert record.params["tf"] == 1.0
    assert inst.constraint.is_independent(record.subset)


def test_measured_cg_time_limit(solver):
    """Test that constrained runs refuse t > 1."""
    inst = random_cut(4, seed=1, constraint=Uniform(4, 2))
    with pytest.raises(ContractViolation):
        solver.solve(inst, "measured-cg", t=1.5)


def test_env_fallback(monkeypatch):
    """Test that unset arguments fall back to the environment."""
    monkeypatch.setenv("REGSUBMOD_THREADS", "3")
    monkeypatch.setenv("REGSUBMOD_SEED", "42")
    solver = Solver(seed=5)
    assert solver.config.threads == 3
    assert solver.config.seed == 5

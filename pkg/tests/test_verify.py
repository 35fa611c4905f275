"""Tests for the verification suites."""

import pytest

from regsubmod import ContractViolation, SolverConfig, VerificationError
from regsubmod import verify
from regsubmod.verify import Check, run_suites


def test_dg_invariants_pass():
    """Test the double greedy suite on a handful of cases."""
    checks = run_suites(["dg-invariants"], cases=12, seed=3)
    assert checks and all(c.passed for c in checks)
    assert all(c.name.startswith("dg-invariants:") for c in checks)


def test_cutlp_suite_pass():
    """Test the cut LP suite on a few cases."""
    checks = run_suites(["cutlp"], cases=4, seed=1)
    assert all(c.passed for c in checks)


def test_cg_trajectory_suite_pass():
    """Test the continuous greedy suite on a few cases."""
    checks = run_suites(["cg-trajectory"], cases=3, seed=0, cfg=SolverConfig(steps=100))
    assert all(c.passed for c in checks)


def test_pipelines_suite_pass():
    """Test the pipeline guarantee lines on the smallest case."""
    checks = run_suites(["pipelines"], cases=1, seed=0)
    assert len(checks) == 4
    assert all(c.passed for c in checks)


def test_limits_suite_pass():
    """Test the limit schedules suite."""
    assert all(c.passed for c in run_suites(["limits"]))


def test_unknown_suite():
    """Test that unknown names are rejected before anything runs."""
    with pytest.raises(ContractViolation):
        run_suites(["limits", "bogus"])


def test_failed_checks(monkeypatch):
    """Test strict and non-strict handling of a failing check."""
    monkeypatch.setitem(verify.SUITES, "limits", lambda cases, seed, cfg: [Check("always", False, "x")])
    with pytest.raises(VerificationError) as exc_info:
        run_suites(["limits"])
    assert exc_info.value.failed == ["limits:always"]
    (check,) = run_suites(["limits"], strict=False)
    assert not check.passed

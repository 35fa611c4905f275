"""Tests for the simplex solver."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog

from regsubmod import ContractViolation, StructuralError
from regsubmod.enums import LpStatus, Relation, Sense
from regsubmod.lp import LinearProgram, dual_of, solve


def test_solve_small_max():
    """Test a two-variable program with a known vertex optimum."""
    lp = LinearProgram(objective=np.array([3.0, 2.0]))
    lp.add([1.0, 1.0], Relation.LE, 4.0)
    lp.add([1.0, 3.0], Relation.LE, 6.0)
    lp.add([1.0, 0.0], Relation.LE, 3.0)
    result = solve(lp)
    assert result.optimal
    assert result.value == pytest.approx(11.0)
    assert np.allclose(result.x, [3.0, 1.0])


def test_solve_min_with_ge_rows():
    """Test minimization with >= and = rows."""
    lp = LinearProgram(objective=np.array([1.0, 1.0]), sense=Sense.MIN)
    lp.add([1.0, 2.0], Relation.GE, 2.0)
    lp.add([1.0, -1.0], Relation.EQ, 0.5)
    result = solve(lp)
    assert result.optimal
    assert result.value == pytest.approx(1.5)


def test_solve_infeasible():
    """Test that contradictory rows are reported infeasible."""
    lp = LinearProgram(objective=np.array([1.0]))
    lp.add([1.0], Relation.LE, 1.0)
    lp.add([1.0], Relation.GE, 2.0)
    assert solve(lp).status is LpStatus.INFEASIBLE


def test_solve_unbounded():
    """Test that an unbounded ray is detected."""
    lp = LinearProgram(objective=np.array([1.0, 0.0]))
    lp.add([-1.0, 1.0], Relation.LE, 1.0)
    assert solve(lp).status is LpStatus.UNBOUNDED


def test_bounds_free_and_shifted():
    """Test free variables and finite lower bounds."""
    lp = LinearProgram(objective=np.array([-1.0, 1.0]), bounds=[(-np.inf, np.inf), (-2.0, 1.0)])
    lp.add([1.0, 0.0], Relation.GE, -3.0)
    result = solve(lp)
    assert result.value == pytest.approx(4.0)
    assert np.allclose(result.x, [-3.0, 1.0])


def test_empty_bounds_infeasible():
    """Test that lo > hi is infeasible."""
    lp = LinearProgram(objective=np.array([1.0]), bounds=[(1.0, 0.0)])
    assert solve(lp).status is LpStatus.INFEASIBLE


def test_row_size_mismatch():
    """Test that malformed rows are rejected."""
    lp = LinearProgram(objective=np.array([1.0, 1.0]))
    with pytest.raises(StructuralError):
        lp.add([1.0], Relation.LE, 1.0)


def test_degenerate_program_terminates():
    """Test a degenerate program that cycles under the largest-coefficient rule."""
    lp = LinearProgram(objective=np.array([0.75, -150.0, 0.02, -6.0]))
    lp.add([0.25, -60.0, -0.04, 9.0], Relation.LE, 0.0)
    lp.add([0.5, -90.0, -0.02, 3.0], Relation.LE, 0.0)
    lp.add([0.0, 0.0, 1.0, 0.0], Relation.LE, 1.0)
    result = solve(lp)
    assert result.optimal
    assert result.value == pytest.approx(0.05)


def test_dual_of_strong_duality():
    """Test that the dual has the same optimal value."""
    lp = LinearProgram(objective=np.array([3.0, 2.0]))
    lp.add([1.0, 1.0], Relation.LE, 4.0)
    lp.add([1.0, 3.0], Relation.LE, 6.0)
    dual = solve(dual_of(lp))
    assert dual.optimal
    assert dual.value == pytest.approx(solve(lp).value)


def test_dual_of_requires_canonical_form():
    """Test that dual_of rejects >= rows."""
    lp = LinearProgram(objective=np.array([1.0]))
    lp.add([1.0], Relation.GE, 0.0)
    with pytest.raises(ContractViolation):
        dual_of(lp)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 100_000), n=st.integers(1, 5), m=st.integers(1, 5))
def test_matches_scipy(seed, n, m):
    """Test optimal values against scipy's HiGHS on random bounded programs."""
    rng = np.random.default_rng(seed)
    c = rng.normal(size=n)
    A = rng.normal(size=(m, n))
    b = rng.random(m) + 0.1
    lp = LinearProgram(objective=c, bounds=[(0.0, 1.0)] * n)
    for i in range(m):
        lp.add(A[i], Relation.LE, b[i])
    ours = solve(lp)
    ref = linprog(-c, A_ub=A, b_ub=b, bounds=[(0.0, 1.0)] * n, method="highs")
    assert ours.optimal and ref.status == 0
    assert ours.value == pytest.approx(-ref.fun, abs=1e-7)
    assert np.all(A @ ours.x <= b + 1e-7)

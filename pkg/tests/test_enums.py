"""Tests for enums module."""

import pytest

from regsubmod import Algorithm, SignMode
from regsubmod.enums import LpStatus, MarginalMode, Relation


def test_algorithm_values():
    """Test algorithm enum values."""
    assert Algorithm.RANDOMIZED_DG.value == "randomized-dg"
    assert Algorithm.PIPELINE_NONPOS.value == "pipeline-nonpos"
    assert Algorithm("dicut-lp") is Algorithm.DICUT_LP


@pytest.mark.parametrize("algorithm", list(Algorithm))
def test_algorithm_guarantees(algorithm):
    """Test that every algorithm has a guarantee string."""
    assert algorithm.get_guarantee()


def test_algorithm_guarantee_text():
    """Test a few guarantee strings."""
    assert Algorithm.TRIVIAL.get_guarantee() == "(0, 1)"
    assert "0.385" in Algorithm.PIPELINE_NONPOS.get_guarantee()


def test_string_representation():
    """Test enum string representation."""
    assert str(Algorithm.BRUTE) == "brute"
    assert str(SignMode.NONPOS) == "nonpos"
    assert str(MarginalMode.SAMPLED) == "sampled"
    assert str(Relation.LE) == "<="
    assert str(LpStatus.UNBOUNDED) == "unbounded"

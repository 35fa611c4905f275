"""Tests for exceptions module."""

from regsubmod import (
    CapabilityError,
    ConfigurationError,
    ContractViolation,
    InfeasibleError,
    InstanceParseError,
    RegSubmodError,
    StructuralError,
    VerificationError,
)


def test_base_exception():
    """Test base exception."""
    error = RegSubmodError("test error")
    assert str(error) == "test error"
    assert isinstance(error, Exception)


def test_configuration_error():
    """Test configuration error."""
    error = ConfigurationError("config error")
    assert str(error) == "config error"
    assert isinstance(error, RegSubmodError)


def test_error_hierarchy():
    """Test that every error derives from the base exception."""
    for cls in (StructuralError, ContractViolation, CapabilityError):
        assert issubclass(cls, RegSubmodError)


def test_infeasible_error_with_beta():
    """Test infeasible error carrying the β target."""
    error = InfeasibleError("no alpha", beta=1.5)
    assert str(error) == "no alpha"
    assert error.beta == 1.5
    assert InfeasibleError("empty").beta is None


def test_instance_parse_error_with_location():
    """Test parse error with path and line."""
    error = InstanceParseError("bad json", path="x.json", line=3)
    assert error.path == "x.json"
    assert error.line == 3


def test_verification_error_failed_checks():
    """Test verification error listing failed checks."""
    error = VerificationError("2 checks failed", ["dg:nesting", "cg:monotone"])
    assert error.failed == ["dg:nesting", "cg:monotone"]
    assert VerificationError("none").failed == []

"""
Custom exceptions for the regsubmod toolkit.

This module defines all custom exception types used by the package.
"""

from typing import Optional, Sequence


class RegSubmodError(Exception):
    """Base exception for all regsubmod errors."""

    pass


class ConfigurationError(RegSubmodError):
    """Raised when there is a configuration error."""

    pass


class StructuralError(RegSubmodError):
    """Raised when an element index or a set-function description is malformed."""

    pass


class ContractViolation(RegSubmodError):
    """Raised when an operation is called outside its precondition."""

    pass


class CapabilityError(RegSubmodError):
    """Raised when an instance is too large or a variant is unsupported."""

    pass


class InfeasibleError(RegSubmodError):
    """Raised when a polytope or a guarantee LP has no feasible point."""

    def __init__(self, message: str, beta: Optional[float] = None):
        """
        Initialize InfeasibleError.

        Args:
            message: Error message.
            beta: The β target that made a guarantee LP infeasible, if any.
        """
        super().__init__(message)
        self.beta = beta


class UnboundedError(RegSubmodError):
    """Raised when a finite optimum was required but the LP is unbounded."""

    pass


class NumericBreakdownError(RegSubmodError):
    """Raised when the simplex tableau loses numerical stability."""

    pass


class InvariantError(RegSubmodError):
    """Raised when an internal invariant fails (never silently repaired)."""

    pass


class InstanceParseError(RegSubmodError):
    """Raised when an instance file cannot be parsed."""

    def __init__(
        self,
        message: str,
        path: Optional[str] = None,
        line: Optional[int] = None,
    ):
        """
        Initialize InstanceParseError.

        Args:
            message: Error message.
            path: File the instance was read from.
            line: 1-based line of the offending JSON text, when known.
        """
        super().__init__(message)
        self.path = path
        self.line = line


class VerificationError(RegSubmodError):
    """Raised when one or more checks of a verification suite fail."""

    def __init__(self, message: str, failed: Sequence[str] = ()):
        super().__init__(message)
        self.failed = list(failed)

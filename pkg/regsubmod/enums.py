"""
Enumerations for the regsubmod toolkit.

This module defines the enumeration types used throughout the package.
"""

from enum import Enum


class Algorithm(Enum):
    """
    Solvers reachable from ``Solver.solve`` and ``regsubmod solve --algo``.

    Each member knows the (α, β) guarantee it is tested against, where the
    output T satisfies E[f(T)+ℓ(T)] ≥ α·f(OPT) + β·ℓ(OPT).
    """

    DETERMINISTIC_DG = "deterministic-dg"
    RANDOMIZED_DG = "randomized-dg"
    OBLIVIOUS_DICUT = "oblivious-dicut"
    MEASURED_CG = "measured-cg"
    DISTORTED_CG = "distorted-cg"
    PIPELINE_NONPOS = "pipeline-nonpos"
    PIPELINE_NONNEG_CSM = "pipeline-nonneg-csm"
    PIPELINE_UNCONSTRAINED = "pipeline-unconstrained"
    PIPELINE_0280 = "pipeline-0280"
    PIPELINE_NONNEG_USM = "pipeline-nonneg-usm"
    PIPELINE_NONNEG_USM_COMBINED = "pipeline-nonneg-usm-combined"
    TRIVIAL = "trivial"
    CUT_LP = "cut-lp"
    DICUT_LP = "dicut-lp"
    BRUTE = "brute"

    def get_guarantee(self) -> str:
        """
        Get the (α, β) guarantee string for this algorithm.

        Returns:
            Human readable guarantee used by ``--help``.
        """
        guarantees = {
            Algorithm.DETERMINISTIC_DG: "(1/(r+1+1/r), (r+1)/(r+1+1/r)) and (0, 1), l >= 0",
            Algorithm.RANDOMIZED_DG: "(2/(r+2+1/r), (r+2)/(r+2+1/r)) for every r >= 1, l >= 0",
            Algorithm.OBLIVIOUS_DICUT: "(b(1-b), b) against max b(1-b)f + b*l, directed cuts",
            Algorithm.MEASURED_CG: "(t e^-t, 1) style bound; (1/e, 1) at t=1 for l <= 0",
            Algorithm.DISTORTED_CG: "(t e^-t, 1-e^-t) on l+, t on l-",
            Algorithm.PIPELINE_NONPOS: "(0.385, 1) for l <= 0 at beta=1; alpha(beta) from the guarantee LP",
            Algorithm.PIPELINE_NONNEG_CSM: "(alpha(beta), beta) for l >= 0 under a matroid; (1/e, 1-1/e)",
            Algorithm.PIPELINE_UNCONSTRAINED: "(t e^-t/(t+e^-t), t/(t+e^-t)); (0.2689, 0.7311) at t=1",
            Algorithm.PIPELINE_0280: "(0.280, 0.7) for arbitrary l under a matroid",
            Algorithm.PIPELINE_NONNEG_USM: "(0.385, 1) for l >= 0, unconstrained",
            Algorithm.PIPELINE_NONNEG_USM_COMBINED: "(alpha(beta), beta) from the combined LP; 0.4493 at 0.9",
            Algorithm.TRIVIAL: "(0, 1)",
            Algorithm.CUT_LP: "(0.5, 1) for undirected cuts under a matroid",
            Algorithm.DICUT_LP: "(0.5, 1) for directed cuts, unconstrained",
            Algorithm.BRUTE: "exact maximizer of alpha*f + beta*l",
        }
        return guarantees[self]

    def __str__(self) -> str:
        """String representation of the algorithm."""
        return self.value


class Relation(Enum):
    """Relation of an LP constraint row to its right-hand side."""

    LE = "<="
    GE = ">="
    EQ = "="

    def __str__(self) -> str:
        return self.value


class Sense(Enum):
    """Optimization direction of a linear program."""

    MAX = "max"
    MIN = "min"

    def __str__(self) -> str:
        return self.value


class LpStatus(Enum):
    """Outcome of a simplex solve."""

    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"

    def __str__(self) -> str:
        return self.value


class MarginalMode(Enum):
    """
    How continuous greedy estimates gradients of the multilinear extension.

    Attributes:
        EXACT: Closed form or full enumeration; deterministic.
        SAMPLED: Per-coordinate Monte Carlo estimate with a fixed sample
                 count, seeded.
    """

    EXACT = "exact"
    SAMPLED = "sampled"

    def __str__(self) -> str:
        return self.value


class GuessMode(Enum):
    """Which part of ℓ the guessing grid is built over."""

    NONPOSITIVE = "nonpositive"
    NEGATIVE_PART = "negative-part"

    def __str__(self) -> str:
        return self.value


class SignMode(Enum):
    """
    Sign restriction on ℓ_q during the symmetry-gap parameter search.

    Attributes:
        NONPOS: ℓ_q ≤ 0 (non-positive linear term).
        UNCONSTRAINED: ℓ_q may take either sign.
    """

    NONPOS = "nonpos"
    UNCONSTRAINED = "unconstrained"

    def __str__(self) -> str:
        return self.value

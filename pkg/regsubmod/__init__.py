"""
regsubmod

Algorithms and certificates for maximizing f(S) + ℓ(S), where f is a
non-negative submodular function and ℓ is linear, with or without a
matroid constraint.

Example:
    >>> from regsubmod import Solver, random_dicut
    >>> solver = Solver(seed=7)
    >>> record = solver.solve(random_dicut(8, seed=1), "randomized-dg")
    >>> print(record.total)

Features:
    - Double greedy (deterministic with parameter r, randomized, oblivious)
    - Measured, distorted and aided continuous greedy with pipage rounding
    - Cut LPs with half-integral vertices for directed cuts
    - Guarantee LPs and symmetry-gap searches behind the (α, β) tables
    - Brute-force oracles, instance generators and verification suites
"""

from .basic_utils import dump_instance, load_instance, loads_instance, setup_file_logger
from .bench import brute_force_opt, generate, random_cut, random_dicut
from .config import CgConfig, SolverConfig
from .contgreedy import (
    SolveResult,
    pipeline_0280,
    pipeline_nonneg_csm,
    pipeline_nonneg_usm_beta1,
    pipeline_nonneg_usm_combined,
    pipeline_nonpos,
    pipeline_unconstrained,
)
from .core import (
    Coverage,
    DirectedCut,
    ExplicitTable,
    FractionalPoint,
    HyperDirectedCut,
    Instance,
    LinearFn,
    SubmodularFn,
    UndirectedCut,
)
from .enums import Algorithm, SignMode
from .exceptions import (
    CapabilityError,
    ConfigurationError,
    ContractViolation,
    InfeasibleError,
    InstanceParseError,
    InvariantError,
    NumericBreakdownError,
    RegSubmodError,
    StructuralError,
    UnboundedError,
    VerificationError,
)
from .matroid import Explicit, Partition, Polytope, Uniform
from .solver import SolveRecord, Solver

__version__ = "0.1.0"
__author__ = "whitewatercn"
__license__ = "MIT"

__all__ = [
    # Main facade
    "Solver",
    "SolveRecord",
    # Configuration
    "SolverConfig",
    "CgConfig",
    # Enums
    "Algorithm",
    "SignMode",
    # Set functions and instances
    "SubmodularFn",
    "DirectedCut",
    "UndirectedCut",
    "HyperDirectedCut",
    "Coverage",
    "ExplicitTable",
    "LinearFn",
    "FractionalPoint",
    "Instance",
    # Constraints
    "Uniform",
    "Partition",
    "Explicit",
    "Polytope",
    # Pipelines
    "SolveResult",
    "pipeline_nonpos",
    "pipeline_nonneg_csm",
    "pipeline_unconstrained",
    "pipeline_0280",
    "pipeline_nonneg_usm_beta1",
    "pipeline_nonneg_usm_combined",
    # Benchmarks and I/O
    "brute_force_opt",
    "generate",
    "random_dicut",
    "random_cut",
    "load_instance",
    "loads_instance",
    "dump_instance",
    "setup_file_logger",
    # Exceptions
    "RegSubmodError",
    "ConfigurationError",
    "StructuralError",
    "ContractViolation",
    "CapabilityError",
    "InfeasibleError",
    "UnboundedError",
    "NumericBreakdownError",
    "InvariantError",
    "InstanceParseError",
    "VerificationError",
    # Metadata
    "__version__",
]

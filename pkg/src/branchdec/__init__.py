"""Branch-decompositions of connectivity functions given by an oracle."""

from .core import (
    BranchDecError,
    BranchDecomposition,
    ConnectivityOracle,
    GroundSet,
    InvariantError,
    UsageError,
    ValidationError,
    decomposition_width,
    validate_decomposition,
)
from .solver import SolveOutcome, SolverConfig, compress, exact_base, iterative_compression, search_min_width

__all__ = [
    "BranchDecError",
    "BranchDecomposition",
    "ConnectivityOracle",
    "GroundSet",
    "InvariantError",
    "UsageError",
    "ValidationError",
    "decomposition_width",
    "validate_decomposition",
    "SolveOutcome",
    "SolverConfig",
    "compress",
    "exact_base",
    "iterative_compression",
    "search_min_width",
]

"""Minimum norm and minimum variance solutions of underdetermined systems."""

from .decomposition import MeanVarDecomposition, decompose, mean, variance
from .errors import (
    DegenerateSystemError,
    DimensionError,
    MinvarError,
    NotUnderdeterminedError,
    ParseError,
    RankDeficientError,
    UnsupportedFormatError,
)
from .solver import (
    LinearSystem,
    Method,
    SolutionReport,
    alpha_star,
    build_system,
    is_degenerate,
    solve,
    solve_base,
    solve_mn,
    solve_mn_associated,
    solve_mv,
)

__version__ = "0.1.0"

"""Mean, constant part, variable part and arithmetic variance of a vector."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dense import as_vector, dot
from .errors import DimensionError

__all__ = ["MeanVarDecomposition", "mean", "decompose", "variance", "center"]


@dataclass(frozen=True)
class MeanVarDecomposition:
    """``x == constant_part + variable_part`` with the two parts orthogonal.

    ``variance`` is the squared norm of ``variable_part`` (no division by n).
    """

    mean: float
    constant_part: np.ndarray
    variable_part: np.ndarray
    variance: float
    squared_norm: float


def _checked(x) -> np.ndarray:
    try:
        return as_vector(x, "x")
    except DimensionError:
        raise DimensionError("mean/variance need a non-empty vector") from None


def mean(x) -> float:
    """Arithmetic mean, summed left to right."""
    x = _checked(x)
    return float(np.cumsum(x)[-1]) / x.shape[0]


def center(x) -> np.ndarray:
    """The centering map ``x -> x - mean(x)``."""
    x = _checked(x)
    return x - mean(x)


def decompose(x) -> MeanVarDecomposition:
    x = _checked(x)
    mu = mean(x)
    const = np.full(x.shape, mu)
    var_part = x - const
    for arr in (const, var_part):
        arr.setflags(write=False)
    return MeanVarDecomposition(
        mean=mu,
        constant_part=const,
        variable_part=var_part,
        # direct centered sum; |x|^2 - n*mu^2 cancels catastrophically
        variance=dot(var_part, var_part),
        squared_norm=dot(x, x),
    )


def variance(x) -> float:
    """Sum of squared deviations from the mean."""
    return decompose(x).variance

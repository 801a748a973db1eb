"""Closed-form minimum norm and minimum variance solutions of ``A x = b``.

For a full-row-rank ``A`` with ``m < n`` write ``u`` for the all-ones vector,
``h = A u`` and ``p = A.T (A A.T)^-1 h``. Then

* minimum norm:      ``x_N = A.T (A A.T)^-1 b``
* shifted systems:   ``x_N(alpha) = A.T (A A.T)^-1 (b - h alpha) = x_N - p alpha``
* optimal shift:     ``alpha* = u.T x_N / u.T p``
* base solution:     ``x_B = x_N - p alpha*``  (zero mean)
* minimum variance:  ``x_V = x_B + u alpha*``

When ``A u = 0`` every solution can be shifted by a constant without changing
its variance, so the minimum variance solution is not unique and ``x_N`` is
one of them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from . import dense
from .decomposition import decompose
from .dense import SpdFactor, as_matrix, as_vector, dot, matvec
from .errors import DegenerateSystemError, DimensionError, NotUnderdeterminedError

__all__ = [
    "Method",
    "LinearSystem",
    "SolutionReport",
    "build_system",
    "solve_mn",
    "solve_mn_associated",
    "alpha_star",
    "solve_base",
    "solve_mv",
    "is_degenerate",
    "solve",
    "DEFAULT_DEGENERACY_TOL",
]

DEFAULT_DEGENERACY_TOL = 1e-12
# below this (relative) the shift denominator is small enough to warn about
CONDITIONING_WARN_TOL = 1e-6
# agreement required between the two formulas for alpha*
ALPHA_CONSISTENCY_TOL = 1e-9

DEGENERATE_WARNING = (
    "A u = 0: the minimum variance solution is not unique; "
    "returning the minimum norm solution, which attains the minimum variance"
)


class Method(str, Enum):
    MN = "MN"
    MV = "MV"
    BASE = "BASE"
    MN_ASSOCIATED = "MN_ASSOCIATED"


@dataclass(frozen=True)
class LinearSystem:
    """Validated underdetermined system with its Gram factor and shift vectors.

    Build with :func:`build_system`; the fields are derived quantities and
    are not re-validated here.
    """

    A: np.ndarray
    b: np.ndarray
    gram_factor: SpdFactor
    h: np.ndarray
    p: np.ndarray
    degeneracy_tol: float = DEFAULT_DEGENERACY_TOL

    @property
    def m(self) -> int:
        return self.A.shape[0]

    @property
    def n(self) -> int:
        return self.A.shape[1]

    def apply_gram_inverse_transpose(self, y: np.ndarray) -> np.ndarray:
        """``A.T (A A.T)^-1 y`` without forming the inverse."""
        w = dense.spd_solve(self.gram_factor, y)
        return matvec(self.A.T, w)

    def residual_norm(self, x: np.ndarray) -> float:
        r = matvec(self.A, x) - self.b
        return math.sqrt(dot(r, r))


@dataclass(frozen=True)
class SolutionReport:
    method: Method
    x: np.ndarray
    residual_norm: float
    squared_norm: float
    mean: float
    variance: float
    alpha_star: Optional[float] = None
    alpha: Optional[float] = None
    degenerate: bool = False
    warnings: tuple = field(default_factory=tuple)

    def to_dict(self) -> dict:
        out = {
            "method": self.method.value,
            "x": [float(v) for v in self.x],
            "residual_norm": self.residual_norm,
            "squared_norm": self.squared_norm,
            "mean": self.mean,
            "variance": self.variance,
            "alpha_star": self.alpha_star,
            "degenerate": self.degenerate,
            "warnings": list(self.warnings),
        }
        if self.method is Method.MN_ASSOCIATED:
            out["alpha"] = self.alpha
        return out


def _report(sys: LinearSystem, method: Method, x: np.ndarray, **extra) -> SolutionReport:
    x = as_vector(x, "x")
    dec = decompose(x)
    return SolutionReport(
        method=method,
        x=x,
        residual_norm=sys.residual_norm(x),
        squared_norm=dec.squared_norm,
        mean=dec.mean,
        variance=dec.variance,
        **extra,
    )


def build_system(A, b, degeneracy_tol: float = DEFAULT_DEGENERACY_TOL,
                 pivot_tol: float = dense.DEFAULT_PIVOT_TOL) -> LinearSystem:
    """Validate ``(A, b)``, factor ``A A.T`` and precompute ``h`` and ``p``.

    Raises
    ------
    DimensionError
        ``b`` does not have one entry per row of ``A``.
    NotUnderdeterminedError
        ``A`` has at least as many rows as columns.
    RankDeficientError
        ``A`` does not have full row rank.
    """
    A = as_matrix(A, "A")
    b = as_vector(b, "b")
    m, n = A.shape
    if b.shape[0] != m:
        raise DimensionError(f"A has {m} rows but b has {b.shape[0]} entries")
    if degeneracy_tol <= 0:
        raise ValueError("degeneracy_tol must be positive")
    if m > n:
        raise NotUnderdeterminedError(f"A is {m} x {n}; need fewer rows than columns")
    # rank is checked before squareness so a singular square A reports as such
    factor = dense.spd_factor(dense.gram(A), pivot_tol)
    if m == n:
        raise NotUnderdeterminedError(f"A is {m} x {n}; need fewer rows than columns")
    h = matvec(A, np.ones(n))
    p = matvec(A.T, dense.spd_solve(factor, h))
    return LinearSystem(A=A, b=b, gram_factor=factor, h=h, p=p, degeneracy_tol=degeneracy_tol)


def _shift_denominator(sys: LinearSystem) -> float:
    # u.T p, which equals h.T (A A.T)^-1 h
    return float(np.cumsum(sys.p)[-1])


def is_degenerate(sys: LinearSystem) -> bool:
    """True when ``A u`` is numerically zero relative to the size of ``A``."""
    n = sys.n
    h_norm = math.sqrt(dot(sys.h, sys.h))
    a_norm = math.sqrt(float(np.cumsum(sys.A.reshape(-1) ** 2)[-1]))
    p_norm = math.sqrt(dot(sys.p, sys.p))
    tau = sys.degeneracy_tol
    return (h_norm <= tau * a_norm * math.sqrt(n)
            or abs(_shift_denominator(sys)) <= tau * n * (1.0 + p_norm))


def _conditioning_warnings(sys: LinearSystem) -> tuple:
    p_norm = math.sqrt(dot(sys.p, sys.p))
    denom = abs(_shift_denominator(sys))
    if denom < CONDITIONING_WARN_TOL * sys.n * (1.0 + p_norm):
        return (f"A u is nearly zero (u.T p = {denom:.3e}); "
                "the minimum variance solution is ill-conditioned",)
    return ()


def _mn_vector(sys: LinearSystem) -> np.ndarray:
    return sys.apply_gram_inverse_transpose(sys.b)


def solve_mn(sys: LinearSystem) -> SolutionReport:
    """Minimum Euclidean norm solution."""
    return _report(sys, Method.MN, _mn_vector(sys))


def solve_mn_associated(sys: LinearSystem, alpha: float) -> SolutionReport:
    """Minimum norm solution of the shifted system ``A x = b - h alpha``.

    Its residual is measured against the shifted right-hand side.
    """
    alpha = float(alpha)
    rhs = sys.b - sys.h * alpha
    x = sys.apply_gram_inverse_transpose(rhs)
    shifted = LinearSystem(A=sys.A, b=rhs, gram_factor=sys.gram_factor,
                           h=sys.h, p=sys.p, degeneracy_tol=sys.degeneracy_tol)
    return _report(shifted, Method.MN_ASSOCIATED, x, alpha=alpha)


def _alpha_star(sys: LinearSystem, x_mn: np.ndarray) -> float:
    if is_degenerate(sys):
        raise DegenerateSystemError("A u is numerically zero; alpha* is undefined")
    numer = float(np.cumsum(x_mn)[-1])
    alpha = numer / _shift_denominator(sys)
    # same quantity from minimizing |x_N - p alpha|^2 over alpha
    check = dot(sys.p, x_mn) / dot(sys.p, sys.p)
    if abs(alpha - check) > ALPHA_CONSISTENCY_TOL * max(abs(alpha), abs(check), 1.0):
        raise ArithmeticError(
            f"alpha* formulas disagree: {alpha!r} vs {check!r}; the Gram factor is unreliable"
        )
    return alpha


def alpha_star(sys: LinearSystem) -> float:
    """Shift that turns the system into its zero-mean base system.

    Raises :class:`DegenerateSystemError` when ``A u`` is numerically zero.
    """
    return _alpha_star(sys, _mn_vector(sys))


def solve_base(sys: LinearSystem) -> SolutionReport:
    """Minimum norm solution of the base system; it has zero mean.

    ``residual_norm`` is measured against the base right-hand side
    ``b - h alpha*``, which is the system this vector solves.
    """
    x_mn = _mn_vector(sys)
    a = _alpha_star(sys, x_mn)
    x_b = x_mn - sys.p * a
    rhs = sys.b - sys.h * a
    shifted = LinearSystem(A=sys.A, b=rhs, gram_factor=sys.gram_factor,
                           h=sys.h, p=sys.p, degeneracy_tol=sys.degeneracy_tol)
    return _report(shifted, Method.BASE, x_b, alpha_star=a,
                   warnings=_conditioning_warnings(sys))


def solve_mv(sys: LinearSystem) -> SolutionReport:
    """Minimum variance solution.

    If ``A u`` is numerically zero the minimum norm solution is returned with
    ``degenerate=True``, since it is then one of many minimum variance
    solutions.
    """
    if is_degenerate(sys):
        return _report(sys, Method.MV, _mn_vector(sys), degenerate=True,
                       warnings=(DEGENERATE_WARNING,))
    x_mn = _mn_vector(sys)
    a = _alpha_star(sys, x_mn)
    x_v = (x_mn - sys.p * a) + a
    return _report(sys, Method.MV, x_v, alpha_star=a,
                   warnings=_conditioning_warnings(sys))


def solve(sys: LinearSystem, method: str) -> SolutionReport:
    """Dispatch on ``"mn"``, ``"mv"`` or ``"base"``."""
    solvers = {"mn": solve_mn, "mv": solve_mv, "base": solve_base}
    try:
        return solvers[method.lower()](sys)
    except KeyError:
        raise ValueError(f"unknown method {method!r}; expected one of {sorted(solvers)}") from None

"""Independent check of the closed forms by brute-force minimization.

The solution set of ``A x = b`` is written as ``x_p + N z`` with ``N`` an
orthonormal kernel basis, and the objective (squared norm or variance) is
minimized as an ordinary least-squares problem in the coordinates ``z``.
Nothing here calls into :mod:`minvar.solver`'s formulas; the only shared
pieces are the input system and :func:`minvar.dense.nullspace_basis`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .decomposition import center
from .dense import nullspace_basis

__all__ = [
    "SolutionSetParam",
    "parametrize",
    "oracle_mn",
    "oracle_mv",
    "mv_objective",
    "mv_minimizer",
    "sample_solutions",
]

# singular-value cutoff for the reduced variance problem; basis columns have
# unit norm, so this is absolute
_REDUCED_CUTOFF = 1e-10


@dataclass(frozen=True)
class SolutionSetParam:
    """All solutions of ``A x = b`` as ``particular + basis @ z``."""

    particular: np.ndarray
    basis: np.ndarray

    def point(self, z) -> np.ndarray:
        return self.particular + self.basis @ np.asarray(z, dtype=np.float64)


def _particular_solution(A: np.ndarray, b: np.ndarray) -> np.ndarray:
    # A.T = Q R  =>  A = R.T Q.T, so x = Q R^-T b solves A x = b
    q, r = np.linalg.qr(A.T, mode="reduced")
    y = np.linalg.solve(r.T, b)
    return q @ y


def parametrize(sys) -> SolutionSetParam:
    """Parametrize the solution set of a :class:`~minvar.solver.LinearSystem`."""
    basis = nullspace_basis(sys.A, sys.gram_factor.pivot_tol)
    return SolutionSetParam(particular=_particular_solution(sys.A, sys.b), basis=basis)


def oracle_mn(param: SolutionSetParam) -> np.ndarray:
    """Minimize ``|x_p + N z|^2`` through the normal equations in ``z``."""
    N, xp = param.basis, param.particular
    if N.shape[1] == 0:
        return xp.copy()
    z = np.linalg.solve(N.T @ N, -(N.T @ xp))
    return param.point(z)


def mv_objective(param: SolutionSetParam, z) -> float:
    """Variance of the solution with kernel coordinates ``z``."""
    c = center(param.point(z))
    return float(c @ c)


def mv_minimizer(param: SolutionSetParam) -> np.ndarray:
    """Kernel coordinates minimizing the variance.

    Least squares on the centered basis columns. When the centered basis is
    rank deficient (``u`` lies in the kernel) the minimum-norm ``z`` is
    returned, so the result is deterministic.
    """
    N, xp = param.basis, param.particular
    k = N.shape[1]
    if k == 0:
        return np.zeros(0)
    centered_cols = N - N.mean(axis=0, keepdims=True)
    u, sv, vt = np.linalg.svd(centered_cols, full_matrices=False)
    keep = sv > _REDUCED_CUTOFF
    coeffs = (u[:, keep].T @ -center(xp)) / sv[keep]
    return vt[keep].T @ coeffs


def oracle_mv(param: SolutionSetParam) -> np.ndarray:
    """Minimum variance solution found by direct minimization."""
    return param.point(mv_minimizer(param))


def sample_solutions(param: SolutionSetParam, count: int, seed: int) -> list:
    """``count`` feasible points ``x_p + N z`` with ``z`` standard normal."""
    if count < 1:
        raise ValueError("count must be at least 1")
    rng = np.random.default_rng(seed)
    zs = rng.standard_normal((count, param.basis.shape[1]))
    return [param.point(z) for z in zs]

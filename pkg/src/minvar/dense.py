"""Dense real matrix/vector helpers and the two factorizations used everywhere.

Matrices and vectors are plain ``float64`` numpy arrays (2-D and 1-D). The
helpers here validate them and do all reductions in a fixed left-to-right
order, so that results are bit-reproducible and do not depend on the BLAS
build or thread count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, RankDeficientError

__all__ = [
    "SpdFactor",
    "as_matrix",
    "as_vector",
    "dot",
    "matmul",
    "matvec",
    "gram",
    "spd_factor",
    "spd_solve",
    "nullspace_basis",
    "DEFAULT_PIVOT_TOL",
]

DEFAULT_PIVOT_TOL = 1e-12
_SYMMETRY_TOL = 1e-12
# relative slack when picking the largest-magnitude entry for the sign rule
_SIGN_TIE_TOL = 1e-9


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    """Return ``a`` as a read-only 2-D float64 array with finite entries."""
    arr = np.array(a, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise DimensionError(f"{name} must be a non-empty 2-D array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite entries")
    return _frozen(arr)


def as_vector(v, name: str = "vector") -> np.ndarray:
    """Return ``v`` as a read-only 1-D float64 array with finite entries."""
    arr = np.array(v, dtype=np.float64)
    if arr.ndim == 2 and 1 in arr.shape:
        arr = arr.reshape(-1)
    if arr.ndim != 1 or arr.shape[0] < 1:
        raise DimensionError(f"{name} must be a non-empty 1-D array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite entries")
    return _frozen(arr)


def dot(x: np.ndarray, y: np.ndarray) -> float:
    """Inner product summed strictly left to right."""
    if x.shape != y.shape:
        raise DimensionError(f"dot of shapes {x.shape} and {y.shape}")
    if x.size == 0:
        return 0.0
    # cumsum is a sequential scan, unlike np.sum's pairwise reduction
    return float(np.cumsum(x * y)[-1])


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix product ``a @ b`` with entries accumulated in increasing k.

    Each output entry is ``((a[i,0]*b[0,j] + a[i,1]*b[1,j]) + ...)``.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.ndim != 2 or b.ndim != 2:
        raise DimensionError("matmul expects two 2-D arrays")
    if a.shape[1] != b.shape[0]:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    out = np.zeros((a.shape[0], b.shape[1]))
    for k in range(a.shape[1]):
        out += np.multiply.outer(a[:, k], b[k, :])
    return _frozen(out)


def matvec(a: np.ndarray, x: np.ndarray) -> np.ndarray:
    """``a @ x`` for a 1-D ``x``, same accumulation order as :func:`matmul`."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise DimensionError("matvec expects a 1-D vector")
    return _frozen(matmul(a, x.reshape(-1, 1)).reshape(-1).copy())


def gram(a: np.ndarray) -> np.ndarray:
    """Return ``a @ a.T``, exactly symmetric (upper triangle mirrored)."""
    a = np.asarray(a, dtype=np.float64)
    m = a.shape[0]
    out = np.empty((m, m))
    for i in range(m):
        for j in range(i, m):
            out[i, j] = dot(a[i], a[j])
            out[j, i] = out[i, j]
    return _frozen(out)


@dataclass(frozen=True)
class SpdFactor:
    """Lower Cholesky factor ``L`` with ``L @ L.T == S``."""

    lower: np.ndarray
    pivot_tol: float

    @property
    def dim(self) -> int:
        return self.lower.shape[0]


def spd_factor(s: np.ndarray, pivot_tol: float = DEFAULT_PIVOT_TOL) -> SpdFactor:
    """Cholesky factorization of a symmetric positive definite matrix.

    A pivot is accepted only if it exceeds ``pivot_tol`` times the largest
    diagonal entry of ``s``; otherwise the matrix is treated as singular
    and :class:`RankDeficientError` is raised.
    """
    s = np.asarray(s, dtype=np.float64)
    if s.ndim != 2 or s.shape[0] != s.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {s.shape}")
    scale = float(np.max(np.abs(s))) if s.size else 0.0
    if np.any(np.abs(s - s.T) > _SYMMETRY_TOL * scale):
        raise ValueError("matrix is not symmetric")

    n = s.shape[0]
    max_diag = float(np.max(np.diag(s))) if n else 0.0
    threshold = pivot_tol * max_diag
    lower = np.zeros((n, n))
    for i in range(n):
        for j in range(i):
            lower[i, j] = (s[i, j] - dot(lower[i, :j], lower[j, :j])) / lower[j, j]
        pivot = s[i, i] - dot(lower[i, :i], lower[i, :i])
        if not pivot > threshold or max_diag <= 0.0:
            raise RankDeficientError(
                f"pivot {i} is {pivot:.3e}, below {threshold:.3e}; matrix is not full rank"
            )
        lower[i, i] = math.sqrt(pivot)
    return SpdFactor(lower=_frozen(lower), pivot_tol=pivot_tol)


def spd_solve(factor: SpdFactor, y: np.ndarray) -> np.ndarray:
    """Solve ``S w = y`` by forward then back substitution."""
    y = np.asarray(y, dtype=np.float64)
    n = factor.dim
    if y.shape != (n,):
        raise DimensionError(f"right-hand side has shape {y.shape}, expected ({n},)")
    low = factor.lower
    z = np.zeros(n)
    for i in range(n):
        z[i] = (y[i] - dot(low[i, :i], z[:i])) / low[i, i]
    w = np.zeros(n)
    for i in reversed(range(n)):
        w[i] = (z[i] - dot(low[i + 1 :, i], w[i + 1 :])) / low[i, i]
    return _frozen(w)


def _fix_signs(basis: np.ndarray) -> np.ndarray:
    for j in range(basis.shape[1]):
        col = basis[:, j]
        mags = np.abs(col)
        # first index among near-ties, so roundoff cannot flip the sign choice
        k = int(np.flatnonzero(mags >= mags.max() * (1.0 - _SIGN_TIE_TOL))[0])
        if col[k] < 0:
            basis[:, j] = -col
    return basis


def nullspace_basis(a: np.ndarray, tol: float = DEFAULT_PIVOT_TOL) -> np.ndarray:
    """Orthonormal basis of ``ker(a)`` as an ``n x (n - m)`` array.

    Taken from the trailing columns of a complete QR factorization of
    ``a.T``. The full-row-rank check uses the same pivot test as
    :func:`spd_factor` on ``a @ a.T``. Each column is scaled so its
    largest-magnitude entry is positive.
    """
    a = as_matrix(a, "A")
    m, n = a.shape
    if m > n:
        raise RankDeficientError(f"{m} x {n} matrix cannot have full row rank")
    spd_factor(gram(a), tol)
    q, _ = np.linalg.qr(a.T, mode="complete")
    basis = np.array(q[:, m:], dtype=np.float64)
    return _frozen(_fix_signs(basis))

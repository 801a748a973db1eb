import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from minvar.dense import (
    as_matrix,
    gram,
    matmul,
    matvec,
    nullspace_basis,
    spd_factor,
    spd_solve,
)
from minvar.errors import DimensionError, RankDeficientError


# matmul ---------------------------------------------------------------------

def test_matmul_identity():
    B = [[1.0, 2.0], [3.0, 4.0]]
    np.testing.assert_array_equal(matmul(np.eye(2), np.array(B)), B)


def test_matmul_with_transpose():
    A = np.array([[1.0, 1.0, 0.0], [0.0, 1.0, 1.0]])
    np.testing.assert_array_equal(matmul(A, A.T), [[2.0, 1.0], [1.0, 2.0]])
    # agrees with numpy's own product
    np.testing.assert_array_equal(matmul(A, A.T), A @ A.T)


def test_matmul_orthogonal():
    np.testing.assert_array_equal(matmul(np.array([[1.0, 0.0]]), np.array([[0.0], [5.0]])), [[0.0]])


def test_matmul_dimension_mismatch():
    with pytest.raises(DimensionError):
        matmul(np.ones((2, 3)), np.ones((2, 3)))


def test_matmul_accumulates_left_to_right():
    # (1e16 + 1) - 1e16 is 0 in left-to-right float order
    a = np.array([[1e16, 1.0, -1e16]])
    b = np.ones((3, 1))
    assert matmul(a, b)[0, 0] == (1e16 + 1.0) - 1e16


def test_matmul_associative():
    rng = np.random.default_rng(3)
    for _ in range(20):
        A, B, C = (rng.standard_normal((5, 5)) for _ in range(3))
        left = matmul(matmul(A, B), C)
        right = matmul(A, matmul(B, C))
        assert np.linalg.norm(left - right) <= 1e-12 * np.linalg.norm(left) * 10


def test_matvec_matches_numpy():
    rng = np.random.default_rng(0)
    A = rng.standard_normal((4, 7))
    x = rng.standard_normal(7)
    np.testing.assert_allclose(matvec(A, x), A @ x, rtol=1e-13, atol=1e-13)


# gram -------------------------------------------------------------------------

@pytest.mark.parametrize("A, expected", [
    ([[1, 1]], [[2]]),
    ([[1, 1, 0], [0, 1, 1]], [[2, 1], [1, 2]]),
    ([[1, 0], [0, 1]], [[1, 0], [0, 1]]),
])
def test_gram_examples(A, expected):
    np.testing.assert_array_equal(gram(np.array(A, dtype=float)), expected)


def test_gram_exactly_symmetric():
    G = gram(np.random.default_rng(1).standard_normal((6, 9)))
    assert np.array_equal(G, G.T)


# spd_factor / spd_solve -------------------------------------------------------

def test_factor_scalar():
    np.testing.assert_array_equal(spd_factor(np.array([[4.0]])).lower, [[2.0]])


def test_factor_two_by_two():
    L = spd_factor(np.array([[2.0, 1.0], [1.0, 2.0]])).lower
    expected = [[math.sqrt(2), 0.0], [1 / math.sqrt(2), math.sqrt(1.5)]]
    np.testing.assert_allclose(L, expected, rtol=1e-15)
    np.testing.assert_allclose(L @ L.T, [[2.0, 1.0], [1.0, 2.0]], rtol=1e-15)


def test_factor_singular():
    with pytest.raises(RankDeficientError):
        spd_factor(np.array([[1.0, 1.0], [1.0, 1.0]]))


def test_factor_rejects_asymmetric():
    with pytest.raises(ValueError):
        spd_factor(np.array([[1.0, 0.5], [0.0, 1.0]]))


def test_factor_pivot_tolerance_is_configurable():
    S = np.array([[1.0, 0.0], [0.0, 1e-8]])
    spd_factor(S)
    with pytest.raises(RankDeficientError):
        spd_factor(S, pivot_tol=1e-6)


def test_factor_random_gram():
    rng = np.random.default_rng(11)
    for _ in range(50):
        m = int(rng.integers(1, 20))
        A = rng.standard_normal((m, m + int(rng.integers(1, 20))))
        S = gram(A)
        L = spd_factor(S).lower
        assert np.all(np.diag(L) > 0)
        assert np.linalg.norm(L @ L.T - S) <= 1e-10 * np.linalg.norm(S)


@pytest.mark.parametrize("S, y, expected", [
    ([[2.0]], [4.0], [2.0]),
    ([[2.0, 1.0], [1.0, 2.0]], [3.0, 3.0], [1.0, 1.0]),
    ([[5.0, 2.0], [2.0, 2.0]], [3.0, 1.0], [2 / 3, -1 / 6]),
])
def test_spd_solve_examples(S, y, expected):
    w = spd_solve(spd_factor(np.array(S)), np.array(y))
    np.testing.assert_allclose(w, expected, rtol=1e-15, atol=1e-15)


def test_spd_solve_dimension_mismatch():
    with pytest.raises(DimensionError):
        spd_solve(spd_factor(np.eye(2)), np.ones(3))


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), log_cond=st.floats(0.0, 6.0))
def test_spd_solve_residual(seed, log_cond):
    rng = np.random.default_rng(seed)
    k = int(rng.integers(1, 12))
    Q, _ = np.linalg.qr(rng.standard_normal((k, k)))
    eig = np.logspace(0.0, log_cond, k)
    S = (Q * eig) @ Q.T
    S = (S + S.T) / 2
    y = rng.standard_normal(k)
    w = spd_solve(spd_factor(S), y)
    assert np.linalg.norm(S @ w - y) <= 1e-8 * np.linalg.norm(y)


# nullspace_basis --------------------------------------------------------------

def test_nullspace_coordinate_kernel():
    np.testing.assert_allclose(nullspace_basis([[1.0, 0.0]]), [[0.0], [1.0]], atol=1e-15)


def test_nullspace_sign_convention():
    s = 1 / math.sqrt(2)
    np.testing.assert_allclose(nullspace_basis([[1.0, 1.0]]), [[s], [-s]], rtol=1e-15)


def test_nullspace_trivial_kernel():
    assert nullspace_basis(np.eye(2)).shape == (2, 0)


def test_nullspace_rank_deficient():
    with pytest.raises(RankDeficientError):
        nullspace_basis([[1.0, 2.0, 3.0], [2.0, 4.0, 6.0]])


def test_nullspace_random():
    rng = np.random.default_rng(5)
    for _ in range(50):
        m = int(rng.integers(1, 15))
        n = m + int(rng.integers(0, 15))
        A = as_matrix(rng.standard_normal((m, n)))
        N = nullspace_basis(A)
        assert N.shape == (n, n - m)
        assert np.max(np.abs(N.T @ N - np.eye(n - m)), initial=0.0) <= 1e-12
        assert np.linalg.norm(A @ N) <= 1e-10 * np.linalg.norm(A)
        for col in N.T:
            assert col[np.argmax(np.abs(col))] > 0


def test_nullspace_deterministic():
    A = np.random.default_rng(2).standard_normal((3, 8))
    assert np.array_equal(nullspace_basis(A), nullspace_basis(A.copy()))


def test_values_are_immutable():
    L = spd_factor(np.array([[4.0]])).lower
    with pytest.raises(ValueError):
        L[0, 0] = 1.0

from fractions import Fraction

import numpy as np
import pytest

WORKED_A = [[1, 2, 0], [0, 1, 1]]
WORKED_B = [3, 1]

_ACCEPTANCE_LINES = []


@pytest.fixture
def record_criterion():
    """Log one PASS/FAIL line per acceptance criterion for the terminal summary."""

    def record(name, passed, detail=""):
        line = f"[{'PASS' if passed else 'FAIL'}] {name}"
        if detail:
            line += f" :: {detail}"
        _ACCEPTANCE_LINES.append(line)
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def random_system(rng, m_range=(1, 30), n_max=60):
    m = int(rng.integers(m_range[0], m_range[1] + 1))
    n = int(rng.integers(m + 1, n_max + 1))
    return rng.standard_normal((m, n)), rng.standard_normal(m)


def degenerate_system(rng, n, m=None):
    """Rows orthogonal to the all-ones vector; ``m`` defaults to ``n - 1``."""
    m = n - 1 if m is None else m
    A = rng.standard_normal((m, n))
    A -= A.mean(axis=1, keepdims=True)
    return A, rng.standard_normal(m)


def difference_system(rng, n):
    """Weighted difference operator on a random spanning tree of ``n`` nodes.

    Each row is ``w * (e_i - e_parent)``, so ``A u`` is exactly zero, the
    ``n - 1`` rows are independent, and the kernel of ``A`` is span(u).
    """
    A = np.zeros((n - 1, n))
    for i in range(1, n):
        w = rng.uniform(0.5, 2.0)
        A[i - 1, i] = w
        A[i - 1, int(rng.integers(0, i))] = -w
    return A[rng.permutation(n - 1)], rng.standard_normal(n - 1)


# exact rational reference, used to freeze the hand-derived expected values

def _solve_exact(M, y):
    n = len(M)
    aug = [[Fraction(v) for v in row] + [Fraction(y[i])] for i, row in enumerate(M)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col] / aug[col][col]
                aug[r] = [a - f * c for a, c in zip(aug[r], aug[col])]
    return [aug[i][n] / aug[i][i] for i in range(n)]


def exact_solutions(A, b):
    """MN, alpha*, base and MV solutions in exact rational arithmetic."""
    A = [[Fraction(v) for v in row] for row in A]
    m, n = len(A), len(A[0])
    gram = [[sum(A[i][k] * A[j][k] for k in range(n)) for j in range(m)] for i in range(m)]
    at = lambda w: [sum(A[i][k] * w[i] for i in range(m)) for k in range(n)]  # noqa: E731
    x_n = at(_solve_exact(gram, b))
    h = [sum(row) for row in A]
    p = at(_solve_exact(gram, h))
    alpha = sum(x_n) / sum(p)
    x_b = [xn - pk * alpha for xn, pk in zip(x_n, p)]
    x_v = [xb + alpha for xb in x_b]

    def var(x):
        mu = sum(x) / len(x)
        return sum((v - mu) ** 2 for v in x)

    return {"x_n": x_n, "p": p, "h": h, "alpha": alpha, "x_b": x_b, "x_v": x_v,
            "var_n": var(x_n), "var_v": var(x_v)}

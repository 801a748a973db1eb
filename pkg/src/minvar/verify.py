"""Numerical checks that a system's closed-form solutions are correct.

:func:`verify_system` runs each check against one system and returns a list
of :class:`Check` results. Non-degenerate systems get:

``mn_oracle_match`` / ``mv_oracle_match``
    closed forms agree with the brute-force oracle, entrywise within
    ``1e-8 * (1 + |x|)``.
``base_zero_mean``
    the base solution has zero mean.
``base_norm_strict_min``
    every shifted system's minimum norm solution is strictly longer than the
    base solution.
``mv_variance_min``
    no sampled feasible point has lower variance than the MV solution, and
    the MN solution does not either.
``pythagoras``
    ``|x|^2 = |x - mean|^2 + n mean^2`` for every vector involved.

When ``A u = 0`` the two MV-specific checks and the base checks are replaced
by ``degenerate_flag``, ``mn_zero_mean`` and ``variance_floor``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import oracle, solver
from .decomposition import decompose, variance

__all__ = ["Check", "verify_system", "ORACLE_TOL", "ZERO_MEAN_TOL"]

ORACLE_TOL = 1e-8
ZERO_MEAN_TOL = 1e-10
PYTHAGORAS_TOL = 1e-10
VARIANCE_FLOOR_TOL = 1e-9
# displacement from x_V beyond which a sample must have strictly larger variance
STRICT_DISPLACEMENT = 1e-6
# slack for roundoff when comparing variances that should be ordered
_ORDER_SLACK = 1e-12


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    max_error: float

    def to_dict(self) -> dict:
        return {"name": self.name, "pass": self.passed, "max_error": self.max_error}


def _oracle_match(name, closed, brute) -> Check:
    err = float(np.max(np.abs(closed - brute)))
    return Check(name, err <= ORACLE_TOL * (1.0 + np.linalg.norm(closed)), err)


def _zero_mean(name, x) -> Check:
    mu = abs(decompose(x).mean)
    return Check(name, mu <= ZERO_MEAN_TOL * (1.0 + np.max(np.abs(x))), mu)


def _pythagoras(vectors) -> Check:
    worst = 0.0
    ok = True
    for x in vectors:
        d = decompose(x)
        gap = abs(d.squared_norm - d.variance - float(d.constant_part @ d.constant_part))
        worst = max(worst, gap)
        ok &= gap <= PYTHAGORAS_TOL * max(d.squared_norm, np.finfo(float).tiny)
    return Check("pythagoras", bool(ok), worst)


def _base_norm_strict_min(sys, base, alpha_star, rng, trials) -> Check:
    base_sq = base.squared_norm
    worst = 0.0
    ok = True
    for _ in range(trials):
        offset = 0.0
        while offset == 0.0:
            offset = rng.uniform(-10.0, 10.0)
        shifted = solver.solve_mn_associated(sys, alpha_star + offset)
        worst = max(worst, base_sq - shifted.squared_norm)
        ok &= shifted.squared_norm > base_sq
    return Check("base_norm_strict_min", bool(ok), max(worst, 0.0))


def _mv_variance_min(mv, mn, samples) -> Check:
    v_star = mv.variance
    worst = max(v_star - mn.variance, 0.0)
    ok = v_star <= mn.variance + _ORDER_SLACK * (1.0 + mn.variance)
    for s in samples:
        v = variance(s)
        worst = max(worst, v_star - v)
        if np.linalg.norm(s - mv.x) > STRICT_DISPLACEMENT:
            ok &= v_star < v
        else:
            ok &= v_star <= v + _ORDER_SLACK * (1.0 + v)
    return Check("mv_variance_min", bool(ok), worst)


def _variance_floor(floor, samples) -> Check:
    # every feasible point is at or above the floor; points that differ from
    # the reported solution only by a constant sit exactly on it
    worst = 0.0
    ok = True
    for v in (variance(s) for s in samples):
        worst = max(worst, floor - v)
        ok &= v >= floor - VARIANCE_FLOOR_TOL * max(floor, 1.0)
    return Check("variance_floor", bool(ok), max(worst, 0.0))


def verify_system(sys, trials: int = 100, seed: int = 0) -> list:
    """Run every applicable check on ``sys``; ``trials`` sets the sample counts."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    rng = np.random.default_rng(seed)
    param = oracle.parametrize(sys)
    samples = oracle.sample_solutions(param, trials, int(rng.integers(2**63)))
    mn = solver.solve_mn(sys)
    checks = [_oracle_match("mn_oracle_match", mn.x, oracle.oracle_mn(param))]

    mv = solver.solve_mv(sys)
    if mv.degenerate:
        brute = oracle.oracle_mv(param)
        shifted = [mn.x + c for c in rng.uniform(-10.0, 10.0, size=trials)]
        floor_check = _variance_floor(mv.variance, samples + shifted)
        brute_gap = abs(variance(brute) - mv.variance)
        floor_ok = brute_gap <= VARIANCE_FLOOR_TOL * max(mv.variance, 1.0)
        checks += [
            Check("degenerate_flag", solver.is_degenerate(sys), 0.0),
            _zero_mean("mn_zero_mean", mn.x),
            Check("variance_floor", floor_check.passed and floor_ok,
                  max(floor_check.max_error, brute_gap)),
        ]
        checks.append(_pythagoras([mn.x, brute, *samples]))
        return checks

    base = solver.solve_base(sys)
    checks += [
        _oracle_match("mv_oracle_match", mv.x, oracle.oracle_mv(param)),
        _zero_mean("base_zero_mean", base.x),
        _base_norm_strict_min(sys, base, base.alpha_star, rng, trials),
        _mv_variance_min(mv, mn, samples),
        _pythagoras([mn.x, mv.x, base.x, *samples]),
    ]
    return checks

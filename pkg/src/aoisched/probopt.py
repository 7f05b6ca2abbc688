"""Optimization of the transmission probabilities of a probabilistic server.

The two-source case is a smooth scalar problem on (0, 1), handled by a
coarse grid plus golden-section refinement.  For more sources the objective
lives on the probability simplex; convexity there is not established, so a
multi-start coordinate search with random restarts is used and the result
is guaranteed no worse than every start.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from .errors import DegenerateWeightsError
from .model import SystemSpec
from .openloop import ProbVector

__all__ = ["optimize_pgaw_two", "optimize_pgaw_multi"]

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
# Probabilities are kept at or above this during search so the objective
# stays finite (gap moments diverge as any entry approaches zero).
_P_FLOOR = 1e-6


def _pgaw_system_aoi(p: np.ndarray, sys: SystemSpec) -> float:
    """Weighted system age of probability vector ``p`` (no validation)."""
    s = sys.means
    q = sys.second_moments
    total_s = float(np.dot(p, s))
    total_q = float(np.dot(p, q))
    gap_mean = (total_s - p * s) / p
    gap_second = (total_q - p * q) / p + 2.0 * gap_mean**2
    aois = (2.0 * s * s + 4.0 * s * gap_mean + q + gap_second) / (2.0 * (s + gap_mean))
    return float(np.dot(sys.weights, aois))


def _golden_min(
    f: Callable[[float], float], lo: float, hi: float, xtol: float
) -> tuple[float, float]:
    """Golden-section minimum of a unimodal scalar function on [lo, hi]."""
    c = hi - (hi - lo) * _INV_PHI
    d = lo + (hi - lo) * _INV_PHI
    fc, fd = f(c), f(d)
    while hi - lo > xtol:
        if fc < fd:
            hi, d, fd = d, c, fc
            c = hi - (hi - lo) * _INV_PHI
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + (hi - lo) * _INV_PHI
            fd = f(d)
    x = 0.5 * (lo + hi)
    return x, f(x)


def _check_positive_weights(sys: SystemSpec) -> None:
    if np.any(sys.weights == 0.0):
        raise DegenerateWeightsError(
            "probability optimization needs positive weights for every source"
        )


def optimize_pgaw_two(
    sys: SystemSpec, tol: float = 1e-8, grid_step: float = 1e-3
) -> tuple[ProbVector, float]:
    """Best two-source transmission probabilities.

    Scans ``p1`` on a grid of spacing ``grid_step``, then refines around the
    best cell by golden section until the bracket is narrower than ``tol``.
    """
    if sys.n_sources != 2:
        raise ValueError("expected a two-source system")
    _check_positive_weights(sys)

    def f(p1: float) -> float:
        return _pgaw_system_aoi(np.array([p1, 1.0 - p1]), sys)

    grid = np.arange(grid_step, 1.0, grid_step)
    values = [f(p1) for p1 in grid]
    i = int(np.argmin(values))
    lo = grid[i - 1] if i > 0 else _P_FLOOR
    hi = grid[i + 1] if i + 1 < len(grid) else 1.0 - _P_FLOOR
    p1, aoi = _golden_min(f, float(lo), float(hi), tol)
    return ProbVector((p1, 1.0 - p1)), aoi


def _coordinate_descent(
    start: np.ndarray, sys: SystemSpec, tol: float, max_sweeps: int = 200
) -> tuple[np.ndarray, float]:
    """Coordinate-wise golden-section descent on the simplex.

    Each move fixes one coordinate and rescales the others to keep the sum
    at one; a sweep with no improvement beyond ``tol`` (relative) stops the
    descent.
    """
    n = len(start)
    p = start.copy()
    value = _pgaw_system_aoi(p, sys)
    hi_bound = 1.0 - (n - 1) * _P_FLOOR
    for _ in range(max_sweeps):
        improved = False
        for coord in range(n):
            others = 1.0 - p[coord]

            def f(t: float, coord: int = coord, others: float = others) -> float:
                cand = p * ((1.0 - t) / others)
                cand[coord] = t
                return _pgaw_system_aoi(cand, sys)

            t_best, v_best = _golden_min(f, _P_FLOOR, hi_bound, tol)
            if v_best < value * (1.0 - tol):
                p *= (1.0 - t_best) / others
                p[coord] = t_best
                value = v_best
                improved = True
        if not improved:
            break
    return p, value


def optimize_pgaw_multi(
    sys: SystemSpec, restarts: int = 32, tol: float = 1e-8, seed: int = 0
) -> tuple[ProbVector, float]:
    """Best transmission probabilities for any number of sources.

    Runs coordinate descent from the uniform vector plus ``restarts - 1``
    random simplex points and keeps the best endpoint, so the result is
    never worse than the uniform policy.  Ties across restarts go to the
    lexicographically smallest vector.
    """
    n = sys.n_sources
    if n < 2:
        raise ValueError("need at least two sources")
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    _check_positive_weights(sys)

    rng = np.random.default_rng(seed)
    starts = [np.full(n, 1.0 / n)]
    for _ in range(restarts - 1):
        starts.append(rng.dirichlet(np.ones(n)))

    best_p: np.ndarray | None = None
    best_value = math.inf
    for start in starts:
        start = np.maximum(start, _P_FLOOR)
        start /= start.sum()
        p, value = _coordinate_descent(start, sys, tol)
        if value < best_value or (
            value == best_value and best_p is not None and tuple(p) < tuple(best_p)
        ):
            best_p, best_value = p, value
    assert best_p is not None
    best_p = np.maximum(best_p, _P_FLOOR)
    best_p /= best_p.sum()
    return ProbVector(tuple(best_p)), _pgaw_system_aoi(best_p, sys)

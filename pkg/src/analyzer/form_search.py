# src/analyzer/form_search.py
"""Multi-start searches over the unit sphere for counterexamples to PSD/PD and P/P0.

These are heuristics: a returned value bounds the true minimum from above, it never
certifies a global minimum.
"""
from itertools import combinations
from typing import List, Optional, Tuple

import numpy as np
from scipy.optimize import minimize

from ..core.tensor import Tensor, apply, form_value, principal_subtensor
from ..utils.logger import setup_logger
from .models.options import SearchBudget

logger = setup_logger(__name__)

ARMIJO = 1e-4
MIN_STEP = 1e-14


def form_gradient(A: Tensor, x) -> np.ndarray:
    """Gradient of Ax^m: sum over index roles p of A contracted with x on every other index."""
    x = np.asarray(x, dtype=float)
    gradient = np.zeros(A.dim)
    for role in range(A.order):
        gradient += apply(Tensor(np.moveaxis(A.data, role, 0)), x)
    return gradient


def _random_unit(rng: np.random.Generator, dim: int) -> np.ndarray:
    while True:
        x = rng.standard_normal(dim)
        norm = np.linalg.norm(x)
        if norm > 1e-12:
            return x / norm


def _descend(A: Tensor, x: np.ndarray, max_iters: int) -> Tuple[float, np.ndarray]:
    """Projected gradient descent with Armijo backtracking, retracted onto the sphere."""
    value = form_value(A, x)
    step = 1.0
    for _ in range(max_iters):
        gradient = form_gradient(A, x)
        tangent = gradient - (gradient @ x) * x
        tangent_norm_sq = float(tangent @ tangent)
        if tangent_norm_sq <= 1e-24 * max(1.0, value * value):
            break
        trial_step = step
        while True:
            candidate = x - trial_step * tangent
            candidate = candidate / np.linalg.norm(candidate)
            candidate_value = form_value(A, candidate)
            if candidate_value <= value - ARMIJO * trial_step * tangent_norm_sq:
                break
            trial_step *= 0.5
            if trial_step < MIN_STEP:
                return value, x
        x, value = candidate, candidate_value
        step = min(2.0 * trial_step, 1e6)
    return value, x


def min_form_value(A: Tensor, budget: Optional[SearchBudget] = None) -> Tuple[float, np.ndarray]:
    """Best (value, minimizer) of Ax^m over the unit sphere from budget.starts random starts."""
    budget = budget or SearchBudget()
    rng = np.random.default_rng(budget.seed)
    best_value, best_x = np.inf, None
    for start in range(budget.starts):
        value, x = _descend(A, _random_unit(rng, A.dim), budget.max_iters)
        # ties keep the lowest start index
        if value < best_value:
            best_value, best_x = value, x
    logger.debug(f"min_form_value: best {best_value} over {budget.starts} starts")
    return float(best_value), best_x


def p_objective(A: Tensor, x, nonzero_only: bool = False) -> float:
    """max_i x_i (Ax^{m-1})_i, restricted to i with x_i != 0 when nonzero_only."""
    x = np.asarray(x, dtype=float)
    products = x * apply(A, x)
    if nonzero_only:
        support = x != 0
        if not np.any(support):
            return np.inf
        products = products[support]
    return float(products.max())


def _supports(dim: int, cap: int) -> List[Tuple[int, ...]]:
    if dim <= cap:
        return [s for size in range(1, dim + 1) for s in combinations(range(dim), size)]
    pairs = list(combinations(range(dim), 2))
    return [(i,) for i in range(dim)] + pairs + [tuple(range(dim))]


def unit_vector_candidates(A: Tensor) -> List[Tuple[float, np.ndarray]]:
    """Exact P-objective values at +-e_i: A[i..i] * y^m for y = +-1."""
    candidates = []
    for i in range(A.dim):
        entry = float(A.data[(i,) * A.order])
        for sign in (1.0, -1.0):
            x = np.zeros(A.dim)
            x[i] = sign
            candidates.append((entry * sign ** A.order, x))
    return candidates


def search_sign_counterexample(A: Tensor, budget: Optional[SearchBudget] = None,
                               nonzero_only: bool = False) -> Tuple[float, np.ndarray]:
    """Minimize the P (or P0) objective support by support; returns the best (value, x)."""
    budget = budget or SearchBudget()
    supports = [s for s in _supports(A.dim, budget.support_cap) if len(s) > 1]
    best_value, best_x = min(unit_vector_candidates(A), key=lambda c: c[0])
    if not supports:
        return best_value, best_x

    per_support = max(2, budget.starts // len(supports))
    for position, support in enumerate(supports):
        sub = principal_subtensor(A, support)
        rng = np.random.default_rng([budget.seed, position])

        def objective(y, sub=sub):
            norm = np.linalg.norm(y)
            if norm < 1e-300:
                return np.inf
            y = y / norm
            return float(np.max(y * apply(sub, y)))

        for _ in range(per_support):
            result = minimize(objective, _random_unit(rng, len(support)), method="Nelder-Mead",
                              options={'maxiter': budget.max_iters * len(support),
                                       'xatol': 1e-12, 'fatol': 1e-15})
            x = np.zeros(A.dim)
            x[list(support)] = result.x / np.linalg.norm(result.x)
            value = p_objective(A, x, nonzero_only=nonzero_only)
            if value < best_value:
                best_value, best_x = value, x
    logger.debug(f"Sign-pattern search: best objective {best_value} over {len(supports)} supports")
    return float(best_value), best_x

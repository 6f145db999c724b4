# src/oracle/brute_force.py
"""Brute-force second opinions for the spectral, structure and classify layers.

Nothing here calls into src.analyzer or the contraction helpers of src.core.tensor:
contractions are repeated np.dot, connectivity comes from scipy's csgraph, and
principal minors are computed in exact rational arithmetic.
"""
import functools
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import List, Sequence

import numpy as np
import scipy.linalg
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from ..core.constants import MatrixClass
from ..core.exceptions import OracleException
from ..core.tensor import Tensor
from ..utils.logger import setup_logger

logger = setup_logger(__name__)

MATRIX_CAP = 12
SUBSET_CAP = 10
GRID_DIM_CAP = 3


@dataclass(frozen=True)
class Bracket:
    lo: float
    hi: float

    def __post_init__(self):
        if self.lo > self.hi:
            raise OracleException(f"invalid bracket [{self.lo}, {self.hi}]")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def contains(self, value: float, slack: float = 0.0) -> bool:
        return self.lo - slack <= value <= self.hi + slack


def _contract(T: np.ndarray, x: np.ndarray, times: int) -> np.ndarray:
    return functools.reduce(np.dot, [T] + [x] * times)


def matrix_rho(M) -> float:
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise OracleException(f"matrix_rho needs a square matrix, got shape {M.shape}")
    if M.shape[0] > MATRIX_CAP:
        raise OracleException(f"matrix_rho is capped at n = {MATRIX_CAP}")
    if np.any(M < 0):
        raise OracleException("matrix_rho needs a nonnegative matrix")
    return float(np.max(np.abs(scipy.linalg.eigvals(M))))


def _strongly_connected(T: np.ndarray) -> bool:
    n = T.shape[0]
    adjacency = np.zeros((n, n))
    for index in product(range(n), repeat=T.ndim):
        if T[index] != 0:
            for j in index[1:]:
                adjacency[index[0], j] = 1.0
    count, _ = connected_components(csr_matrix(adjacency), directed=True, connection='strong')
    return count == 1


def _climb(T: np.ndarray, effort: int, lower: bool) -> float:
    """Hill-climb one Collatz-Wielandt bound: shrink the argmin rows (lower) or grow the argmax rows (upper)."""
    m = T.ndim
    x = np.ones(T.shape[0])

    def bound(v):
        ratios = _contract(T, v, m - 1) / v ** (m - 1)
        return ratios, (ratios.min() if lower else ratios.max())

    ratios, best = bound(x)
    step = 0.5
    for _ in range(effort):
        extreme = ratios.min() if lower else ratios.max()
        rows = np.abs(ratios - extreme) <= 1e-14 * max(1.0, abs(extreme))
        trial = x.copy()
        trial[rows] *= (1.0 - step) if lower else (1.0 + step)
        trial_ratios, value = bound(trial)
        if (value > best) if lower else (value < best):
            x, ratios, best = trial, trial_ratios, value
            step = min(2.0 * step, 0.5)
        else:
            step *= 0.5
            if step < 1e-16:
                break
    return float(best)


def cw_refine(A: Tensor, effort: int = 4000) -> Bracket:
    """A Collatz-Wielandt bracket on rho(A), valid at whatever point the climb stops."""
    T = np.array(A.data)
    if np.any(T < 0):
        raise OracleException("cw_refine needs a nonnegative tensor")
    if T.shape[0] == 1:
        value = float(T.reshape(-1)[0])
        return Bracket(value, value)
    if not _strongly_connected(T):
        raise OracleException("cw_refine needs a weakly irreducible tensor")
    lo = _climb(T, effort, lower=True)
    hi = _climb(T, effort, lower=False)
    logger.debug(f"cw_refine bracket [{lo}, {hi}]")
    return Bracket(lo, max(lo, hi))


def subset_irreducible(A: Tensor, cap: int = SUBSET_CAP) -> bool:
    """Literal scan over every nonempty proper subset and every index tuple."""
    T = np.array(A.data)
    n, m = T.shape[0], T.ndim
    if n > cap:
        raise OracleException(f"subset_irreducible is capped at n = {cap}")
    indices = list(product(range(n), repeat=m))
    for mask in range(1, 2 ** n - 1):
        alpha = {i for i in range(n) if mask >> i & 1}
        reducing = True
        for index in indices:
            if index[0] in alpha and all(j not in alpha for j in index[1:]) and T[index] != 0:
                reducing = False
                break
        if reducing:
            return False
    return True


def _sphere_points(dim: int, resolution: float) -> List[np.ndarray]:
    if dim == 1:
        return [np.array([[1.0], [-1.0]])]
    if dim == 2:
        theta = np.arange(0.0, 2 * np.pi, resolution)
        return [np.stack([np.cos(theta), np.sin(theta)], axis=1)]
    rows = []
    for polar in np.arange(0.0, np.pi + resolution, resolution):
        polar = min(polar, np.pi)
        count = max(1, int(np.ceil(2 * np.pi * np.sin(polar) / resolution)))
        azimuth = np.linspace(0.0, 2 * np.pi, count, endpoint=False)
        rows.append(np.stack([np.sin(polar) * np.cos(azimuth),
                              np.sin(polar) * np.sin(azimuth),
                              np.full(count, np.cos(polar))], axis=1))
    return rows


def grid_min_form(A: Tensor, resolution: float = 0.01) -> float:
    """Minimum of Ax^m over an angular grid of the unit sphere (dim <= 3)."""
    T = np.array(A.data)
    n, m = T.shape[0], T.ndim
    if n > GRID_DIM_CAP:
        raise OracleException(f"grid_min_form is capped at n = {GRID_DIM_CAP}")
    letters = "abcdefghijklmnopqrstuvw"[:m]
    subscripts = letters + "," + ",".join(f"N{c}" for c in letters) + "->N"
    best = np.inf
    for points in _sphere_points(n, resolution):
        values = np.einsum(subscripts, T, *([points] * m), optimize=True)
        best = min(best, float(values.min()))
    return best


def _exact_det(rows: Sequence[Sequence[Fraction]]) -> Fraction:
    a = [list(r) for r in rows]
    n = len(a)
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        det *= a[col][col]
        for r in range(col + 1, n):
            factor = a[r][col] / a[col][col]
            if factor:
                for c in range(col, n):
                    a[r][c] -= factor * a[col][c]
    return det


def principal_minors(M) -> List[Fraction]:
    M = np.asarray(M, dtype=float)
    n = M.shape[0]
    exact = [[Fraction(float(v)) for v in row] for row in M]
    return [
        _exact_det([[exact[i][j] for j in S] for i in S])
        for size in range(1, n + 1)
        for S in combinations(range(n), size)
    ]


def p_matrix_minors(M) -> MatrixClass:
    """P if every principal minor is > 0, P0 if every one is >= 0, exactly over the rationals."""
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise OracleException(f"p_matrix_minors needs a square matrix, got shape {M.shape}")
    if M.shape[0] > MATRIX_CAP:
        raise OracleException(f"p_matrix_minors is capped at n = {MATRIX_CAP}")
    minors = principal_minors(M)
    if all(d > 0 for d in minors):
        return MatrixClass.P
    if all(d >= 0 for d in minors):
        return MatrixClass.P0
    return MatrixClass.NEITHER

# src/analyzer/classifier.py
"""Single-tensor classification.

Z, M and strong M are decided from the certified bracket on rho(D) for the canonical
split A = sI - D. P, P0, PSD and PD are semi-decisions: a CertifiedNo always carries a
vector that re-verifies by direct evaluation, Yes is only emitted by exact oracles
(order 2 with small dim, and the odd-order shortcuts).
"""
from dataclasses import replace
from fractions import Fraction
from itertools import combinations
from typing import Optional, Tuple

import numpy as np

from ..core.constants import TensorClass, VerdictLabel
from ..core.exceptions import NotZTensorException, TensorToolException
from ..core.tensor import (
    Tensor,
    diagonal_entries,
    first_positive_off_diagonal,
    form_value,
    identity,
    symmetrize,
)
from ..utils.logger import setup_logger
from .form_search import min_form_value, p_objective, search_sign_counterexample, unit_vector_candidates
from .models.options import MTolerances, SearchBudget, SpectralOptions
from .models.verdict_models import Verdict, ZSplit
from .spectral import cw_bounds, spectral_radius, upper_witness

logger = setup_logger(__name__)

ZERO_FORM_REL_TOL = 1e-12
# a minor-derived P witness must re-verify within this band at unit max-norm
WITNESS_REL_TOL = 1e-9


def z_split(A: Tensor) -> ZSplit:
    """Canonical split A = sI - D with s the largest diagonal entry."""
    index = first_positive_off_diagonal(A)
    if index is not None:
        raise NotZTensorException(index, float(A.data[index]))
    s = float(diagonal_entries(A).max())
    D = Tensor(s * identity(A.order, A.dim).data - A.data)
    return ZSplit(s=s, D=D)


def _strong_m_witness(split: ZSplit, perron: Optional[np.ndarray], opts: SpectralOptions) -> Optional[np.ndarray]:
    """Positive x whose Collatz-Wielandt upper bound for D stays below s."""
    if perron is not None and np.all(perron > 0) and cw_bounds(split.D, perron)[1] < split.s:
        return perron
    return upper_witness(split.D, split.s, opts)


def classify_m(A: Tensor, opts: Optional[SpectralOptions] = None,
               tolerances: Optional[MTolerances] = None) -> Verdict:
    opts = opts or SpectralOptions()
    tolerances = tolerances or MTolerances()
    try:
        split = z_split(A)
    except NotZTensorException as e:
        return Verdict(label=VerdictLabel.NOT_Z, tensor_class=TensorClass.M, index=e.index,
                       value=e.value, exact=True, method="z-check", detail=str(e))

    result = spectral_radius(split.D, opts)
    tol = tolerances.strict_tol(split.s)
    bracket = (result.lower, result.upper)
    margin = split.s - result.rho

    if split.s > result.upper + tol:
        label, certificate = VerdictLabel.STRONG_M, _strong_m_witness(split, result.perron, opts)
    elif split.s < result.lower - tol:
        label, certificate = VerdictLabel.Z_NOT_M, result.lower_witness
    else:
        label, certificate = VerdictLabel.M, result.lower_witness

    inconclusive = label == VerdictLabel.M and not result.converged
    if inconclusive:
        logger.warning(f"M-class call inside an unconverged bracket {bracket} for s={split.s}")
    logger.info(f"classify_m: {label.value} (s={split.s}, rho in [{result.lower}, {result.upper}])")
    return Verdict(
        label=label, tensor_class=TensorClass.M, margin=margin, certificate=certificate,
        bracket=bracket, s=split.s, exact=result.converged, inconclusive=inconclusive,
        method="spectral",
    )


def _max_norm_scaled(v: np.ndarray) -> np.ndarray:
    """Scale so the largest-magnitude component is exactly +1; flush negligible components."""
    v = np.real(np.asarray(v, dtype=complex)).astype(float)
    k = int(np.argmax(np.abs(v)))
    v = v / v[k]
    v[np.abs(v) < 1e-12] = 0.0
    return v


def _certified_no(cls: TensorClass, x: np.ndarray, value: float, method: str,
                  exact: bool = False, detail: str = "") -> Verdict:
    return Verdict(label=VerdictLabel.CERTIFIED_NO, tensor_class=cls, certificate=np.asarray(x, dtype=float),
                   value=float(value), exact=exact, method=method, detail=detail)


def _not_found(cls: TensorClass, value: float, method: str, inconclusive: bool = False,
               detail: str = "") -> Verdict:
    return Verdict(label=VerdictLabel.NO_COUNTEREXAMPLE_FOUND, tensor_class=cls, value=float(value),
                   inconclusive=inconclusive, method=method, detail=detail)


# -- PSD / PD ---------------------------------------------------------------

def _definite_matrix(A: Tensor, cls: TensorClass, budget: SearchBudget) -> Verdict:
    M = A.data
    eigenvalues, vectors = np.linalg.eigh(0.5 * (M + M.T))
    smallest = float(eigenvalues[0])
    threshold = -budget.cert_tol if cls == TensorClass.PSD else budget.pd_tol
    passes = smallest >= threshold if cls == TensorClass.PSD else smallest > threshold
    if passes:
        return Verdict(label=VerdictLabel.YES, tensor_class=cls, value=smallest, exact=True,
                       method="eigenvalue")
    x = _max_norm_scaled(vectors[:, 0])
    return _certified_no(cls, x, form_value(A, x), "eigenvalue", exact=True,
                         detail=f"smallest symmetric-part eigenvalue {smallest!r}")


def _odd_form_minimum(A: Tensor, budget: SearchBudget) -> Tuple[float, np.ndarray]:
    """min over the sphere of an odd form is minus its max; search both and keep the better."""
    low, x_low = min_form_value(A, budget)
    high, x_high = min_form_value(-A, budget)
    flipped = form_value(A, -x_high)
    return (low, x_low) if low <= flipped else (flipped, -x_high)


def _odd_order_definite(A: Tensor, cls: TensorClass, budget: SearchBudget) -> Verdict:
    if cls == TensorClass.PD:
        # an odd form takes opposite signs at x and -x
        _, argmax = min_form_value(-A, budget)
        x = -argmax
        return _certified_no(cls, x, form_value(A, x), "odd-order", exact=True,
                             detail="odd-order forms are never positive definite")

    scale = max(1.0, float(np.abs(A.data).max()))
    if float(np.abs(symmetrize(A).data).max()) <= ZERO_FORM_REL_TOL * scale:
        return Verdict(label=VerdictLabel.YES, tensor_class=cls, value=0.0, exact=True, method="odd-order",
                       detail="form vanishes identically")
    value, x = _odd_form_minimum(A, budget)
    if value < -budget.cert_tol:
        return _certified_no(cls, x, value, "odd-order")
    return _not_found(cls, value, "odd-order", inconclusive=True,
                      detail="nonzero odd form but no negative value found")


def _definite_search(A: Tensor, cls: TensorClass, budget: SearchBudget) -> Verdict:
    diagonal = diagonal_entries(A)
    i = int(np.argmin(diagonal))
    if diagonal[i] < 0 or (cls == TensorClass.PD and diagonal[i] <= 0):
        x = np.zeros(A.dim)
        x[i] = 1.0
        return _certified_no(cls, x, float(diagonal[i]), "unit-vector", exact=True)

    value, x = min_form_value(A, budget)
    if value < -budget.cert_tol:
        return _certified_no(cls, x, value, "search")
    if cls == TensorClass.PD and value <= budget.pd_tol:
        logger.warning(f"PD search minimum {value} lies within tolerance of zero")
        return _not_found(cls, value, "search", inconclusive=True,
                          detail="form minimum within tolerance of zero")
    return _not_found(cls, value, "search")


def _definiteness(A: Tensor, cls: TensorClass, budget: Optional[SearchBudget]) -> Verdict:
    budget = budget or SearchBudget()
    if A.order == 2:
        verdict = _definite_matrix(A, cls, budget)
    elif A.order % 2 == 1:
        verdict = _odd_order_definite(A, cls, budget)
    else:
        verdict = _definite_search(A, cls, budget)
    logger.info(f"{cls.value}: {verdict.label.value} via {verdict.method} (value {verdict.value})")
    return verdict


def is_psd(A: Tensor, budget: Optional[SearchBudget] = None) -> Verdict:
    return _definiteness(A, TensorClass.PSD, budget)


def is_pd(A: Tensor, budget: Optional[SearchBudget] = None) -> Verdict:
    return _definiteness(A, TensorClass.PD, budget)


# -- P / P0 -----------------------------------------------------------------

def _exact_det(block: np.ndarray) -> Fraction:
    """Determinant of the float entries taken as exact binary rationals (fraction Gaussian elimination)."""
    rows = [[Fraction(float(v)) for v in row] for row in block]
    n = len(rows)
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if rows[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            det = -det
        det *= rows[col][col]
        for r in range(col + 1, n):
            factor = rows[r][col] / rows[col][col]
            if factor:
                for c in range(col, n):
                    rows[r][c] -= factor * rows[col][c]
    return det


def _minor_sign(block: np.ndarray, minor: float, tol: float) -> int:
    """Sign of a principal minor; exact arithmetic decides whenever the float value sits in the noise band."""
    if abs(minor) > tol:
        return 1 if minor > 0 else -1
    exact = _exact_det(block)
    return (exact > 0) - (exact < 0)


def _failing_minor(M: np.ndarray, strict: bool) -> Tuple[Optional[Tuple[int, ...]], float]:
    """First principal index set (by size, then lexicographically) whose minor fails, and the least minor."""
    n = M.shape[0]
    scale = max(1.0, float(np.abs(M).max()))
    least = np.inf
    for size in range(1, n + 1):
        tol = 1e-12 * scale ** size
        for S in combinations(range(n), size):
            block = M[np.ix_(S, S)]
            minor = float(np.linalg.det(block))
            least = min(least, minor)
            sign = _minor_sign(block, minor, tol)
            if (strict and sign <= 0) or (not strict and sign < 0):
                return S, minor
    return None, least


def _minor_certificate(M: np.ndarray, S: Tuple[int, ...], strict: bool) -> Optional[np.ndarray]:
    """Real eigenvector of M[S] for a nonpositive (P) or negative (P0) eigenvalue, zero-extended."""
    scale = max(1.0, float(np.abs(M).max()))
    eigenvalues, vectors = np.linalg.eig(M[np.ix_(S, S)])
    real = np.abs(eigenvalues.imag) <= 1e-9 * scale
    bound = 1e-12 * scale if strict else 0.0
    candidates = [k for k in np.flatnonzero(real) if eigenvalues[k].real <= bound]
    if not strict:
        candidates = [k for k in candidates if eigenvalues[k].real < 0]
    if not candidates:
        return None
    k = min(candidates, key=lambda c: eigenvalues[c].real)
    x = np.zeros(M.shape[0])
    x[list(S)] = _max_norm_scaled(vectors[:, k])
    return x


def _sign_matrix(A: Tensor, cls: TensorClass, budget: SearchBudget) -> Optional[Verdict]:
    strict = cls == TensorClass.P
    S, minor = _failing_minor(A.data, strict)
    if S is None:
        return Verdict(label=VerdictLabel.YES, tensor_class=cls, value=minor, exact=True,
                       method="principal-minors", detail=f"least principal minor {minor!r}")
    x = _minor_certificate(A.data, S, strict)
    if x is None:
        logger.warning(f"No real eigenvector certifies failing minor {S}; falling back to search")
        return None
    value = p_objective(A, x, nonzero_only=not strict)
    witness_tol = WITNESS_REL_TOL * max(1.0, float(np.abs(A.data).max()))
    if (strict and value > witness_tol) or (not strict and value >= 0):
        logger.warning(f"Eigenvector of failing minor {S} does not re-verify (objective {value}); "
                       f"falling back to search")
        return None
    return _certified_no(cls, x, value, "principal-minors", exact=True,
                         detail=f"principal minor on {list(S)} is {minor!r}")


def _sign_search(A: Tensor, cls: TensorClass, budget: SearchBudget) -> Verdict:
    strict = cls == TensorClass.P
    value, x = min(unit_vector_candidates(A), key=lambda c: c[0])
    if value < 0 or (strict and value <= 0):
        return _certified_no(cls, x, value, "unit-vector", exact=True)

    value, x = search_sign_counterexample(A, budget, nonzero_only=not strict)
    if value <= -budget.cert_tol if strict else value < -budget.cert_tol:
        return _certified_no(cls, x, value, "search")
    return _not_found(cls, value, "search")


def _sign_class(A: Tensor, cls: TensorClass, budget: Optional[SearchBudget]) -> Verdict:
    budget = budget or SearchBudget()
    verdict = None
    if A.order == 2 and A.dim <= budget.minor_cap:
        verdict = _sign_matrix(A, cls, budget)
    if verdict is None:
        verdict = _sign_search(A, cls, budget)
    logger.info(f"{cls.value}: {verdict.label.value} via {verdict.method} (value {verdict.value})")
    return verdict


def is_p(A: Tensor, budget: Optional[SearchBudget] = None) -> Verdict:
    return _sign_class(A, TensorClass.P, budget)


def is_p0(A: Tensor, budget: Optional[SearchBudget] = None) -> Verdict:
    return _sign_class(A, TensorClass.P0, budget)


def classify(A: Tensor, cls: TensorClass, opts: Optional[SpectralOptions] = None,
             tolerances: Optional[MTolerances] = None, budget: Optional[SearchBudget] = None) -> Verdict:
    """Dispatch on the requested class."""
    if cls in (TensorClass.M, TensorClass.STRONG_M):
        return replace(classify_m(A, opts, tolerances), tensor_class=cls)
    checks = {TensorClass.P: is_p, TensorClass.P0: is_p0, TensorClass.PSD: is_psd, TensorClass.PD: is_pd}
    if cls not in checks:
        raise TensorToolException(f"unknown tensor class {cls!r}")
    return checks[cls](A, budget)


def answers_yes(verdict: Verdict) -> bool:
    """Whether the verdict affirms membership in its requested class."""
    if verdict.tensor_class == TensorClass.M:
        return verdict.label in (VerdictLabel.M, VerdictLabel.STRONG_M)
    if verdict.tensor_class == TensorClass.STRONG_M:
        return verdict.label == VerdictLabel.STRONG_M
    return verdict.label == VerdictLabel.YES

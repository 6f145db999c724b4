# src/analyzer/spectral.py
"""Spectral radius of nonnegative tensors with certified Collatz-Wielandt brackets."""
from typing import Optional, Tuple

import numpy as np

from ..core.exceptions import SpectralException
from ..core.tensor import Tensor, apply, hadamard_power, identity, ones, principal_subtensor
from ..utils.logger import setup_logger
from .models.options import SpectralOptions
from .models.spectral_models import SpectralResult
from .structure import is_weakly_irreducible, require_nonnegative, weakly_irreducible_partition

logger = setup_logger(__name__)


def _as_nonnegative_vector(A: Tensor, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (A.dim,):
        raise SpectralException(f"vector of shape {x.shape} does not match tensor dim {A.dim}")
    if np.any(x < 0):
        raise SpectralException("Collatz-Wielandt bounds need a nonnegative vector")
    if not np.any(x > 0):
        raise SpectralException("Collatz-Wielandt bounds need a nonzero vector")
    return x


def _ratios(A: Tensor, x: np.ndarray) -> np.ndarray:
    support = x > 0
    return apply(A, x)[support] / hadamard_power(x[support], A.order - 1)


def cw_lower(A: Tensor, x) -> float:
    """min over x_i > 0 of (Ax^{m-1})_i / x_i^{m-1}; a lower bound on rho(A) for any x >= 0."""
    require_nonnegative(A, "cw_lower")
    x = _as_nonnegative_vector(A, x)
    return float(_ratios(A, x).min())


def cw_bounds(A: Tensor, x) -> Tuple[float, float]:
    require_nonnegative(A, "cw_bounds")
    x = _as_nonnegative_vector(A, x)
    if np.any(x == 0):
        raise SpectralException("the Collatz-Wielandt upper bound needs a strictly positive vector")
    ratios = _ratios(A, x)
    return float(ratios.min()), float(ratios.max())


def residual(A: Tensor, rho: float, y) -> np.ndarray:
    """Ax^{m-1} - rho y^{[m-1]}."""
    y = np.asarray(y, dtype=float)
    return apply(A, y) - rho * hadamard_power(y, A.order - 1)


def is_eigenpair(A: Tensor, lam: float, x, tol: float = 1e-8) -> bool:
    x = np.asarray(x, dtype=float)
    if not np.any(x != 0):
        return False
    return bool(np.max(np.abs(residual(A, lam, x))) <= tol * max(1.0, abs(lam)))


def _power_iteration(A: Tensor, opts: SpectralOptions) -> SpectralResult:
    """Iterate x <- normalize((A + shift I) x^{m-1})^{[1/(m-1)]} from the all-ones vector."""
    m = A.order
    shifted = Tensor(A.data + opts.shift * identity(m, A.dim).data)
    x = np.ones(A.dim)
    best_lo, best_hi = -np.inf, np.inf
    lo_vector = x
    converged = False
    iterations = 0

    for iterations in range(1, opts.max_iters + 1):
        y = apply(shifted, x)
        ratios = y / hadamard_power(x, m - 1)
        lo, hi = float(ratios.min()), float(ratios.max())
        if lo > best_lo:
            best_lo, lo_vector = lo, x
        best_hi = min(best_hi, hi)
        if best_hi - best_lo <= opts.tol * max(1.0, best_hi):
            converged = True
            break
        if not np.all(y > 0):
            break
        x = np.power(y, 1.0 / (m - 1))
        x = x / x.max()

    if not converged:
        logger.warning(
            f"Power iteration did not converge in {iterations} iterations; "
            f"bracket [{best_lo - opts.shift}, {best_hi - opts.shift}]"
        )
    lower = max(0.0, best_lo - opts.shift)
    upper = max(lower, best_hi - opts.shift)
    rho = min(max(lower, 0.5 * (best_lo + best_hi) - opts.shift), upper)
    logger.debug(f"Power iteration: rho={rho} after {iterations} iterations (converged={converged})")
    return SpectralResult(
        rho=rho, lower=lower, upper=upper, iterations=iterations, converged=converged,
        perron=x.copy(), lower_witness=np.array(lo_vector, dtype=float),
    )


def _scalar_result(A: Tensor) -> SpectralResult:
    value = float(A.entries[0])
    return SpectralResult(rho=value, lower=value, upper=value, iterations=0, converged=True,
                          perron=np.ones(1), lower_witness=np.ones(1))


def _zero_result(A: Tensor) -> SpectralResult:
    witness = np.zeros(A.dim)
    witness[0] = 1.0
    return SpectralResult(rho=0.0, lower=0.0, upper=0.0, iterations=0, converged=True,
                          block=(0,), lower_witness=witness)


def spectral_radius(A: Tensor, opts: Optional[SpectralOptions] = None) -> SpectralResult:
    opts = opts or SpectralOptions()
    require_nonnegative(A, "spectral_radius")
    if A.dim == 1:
        return _scalar_result(A)
    if A.order < 2:
        raise SpectralException("spectral radius needs order >= 2 when dim > 1")
    if not np.any(A.data):
        return _zero_result(A)
    if is_weakly_irreducible(A):
        return _power_iteration(A, opts)

    partition = weakly_irreducible_partition(A)
    logger.debug(f"Weakly reducible input; recursing on blocks {partition.blocks}")
    results = [spectral_radius(principal_subtensor(A, block), opts) for block in partition.blocks]

    best = int(np.argmax([r.rho for r in results]))
    best_block = partition.blocks[best]
    sub_block = results[best].block
    block = tuple(best_block[k] for k in sub_block) if sub_block is not None else best_block

    lo_index = int(np.argmax([r.lower for r in results]))
    witness = np.zeros(A.dim)
    witness[list(partition.blocks[lo_index])] = results[lo_index].lower_witness

    lower = max(r.lower for r in results)
    upper = max(r.upper for r in results)
    return SpectralResult(
        rho=min(max(results[best].rho, lower), upper),
        lower=lower,
        upper=upper,
        iterations=sum(r.iterations for r in results),
        converged=all(r.converged for r in results),
        block=block,
        lower_witness=witness,
    )


def upper_witness(A: Tensor, bound: float, opts: Optional[SpectralOptions] = None,
                  attempts: int = 40) -> Optional[np.ndarray]:
    """Strictly positive x with max_i (Ax^{m-1})_i / x_i^{m-1} < bound, or None.

    Weakly reducible tensors have no positive Perron vector, so the Perron vector of the
    positive tensor A + eps*J is used instead, shrinking eps until the bound holds.
    """
    opts = opts or SpectralOptions()
    require_nonnegative(A, "upper_witness")
    if bound <= 0:
        return None
    if A.dim == 1:
        return np.ones(1) if float(A.entries[0]) < bound else None
    if A.order < 2:
        return None

    all_ones = ones(A.order, A.dim).data
    eps = bound / float(A.dim) ** (A.order - 1)
    for _ in range(attempts):
        x = _power_iteration(Tensor(A.data + eps * all_ones), opts).perron
        if np.all(x > 0) and cw_bounds(A, x)[1] < bound:
            logger.debug(f"upper_witness: bound {bound} met with eps={eps}")
            return x
        eps /= 2
    logger.warning(f"No positive vector brings the Collatz-Wielandt bound below {bound}")
    return None


def perron_vector(A: Tensor, opts: Optional[SpectralOptions] = None) -> np.ndarray:
    """Positive eigenvector for rho(A), unit max-norm."""
    opts = opts or SpectralOptions()
    require_nonnegative(A, "perron_vector")
    if A.dim == 1:
        return np.ones(1)
    if A.order >= 2 and is_weakly_irreducible(A):
        return spectral_radius(A, opts).perron

    # a weakly reducible tensor may still carry a positive eigenvector (e.g. the identity)
    result = _power_iteration(A, opts) if A.order >= 2 else None
    if result is not None and result.converged and np.all(result.perron > 0):
        return result.perron
    raise SpectralException("perron_vector requires a weakly irreducible tensor")

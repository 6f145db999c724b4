# src/utils/generators.py
"""Seeded tensor generators behind the `gen` command and the test fixtures."""
from typing import Optional, Tuple, Union

import numpy as np

from ..core.constants import TensorKind
from ..core.exceptions import TensorConstructionException
from ..core.tensor import Tensor, diagonal_mask, identity, ones, zeros


def _check_sparsity(sparsity: float):
    if not 0.0 <= sparsity < 1.0:
        raise TensorConstructionException(f"sparsity must lie in [0, 1), got {sparsity}")


def _support(rng: np.random.Generator, shape, sparsity: float) -> np.ndarray:
    return rng.random(shape) >= sparsity


def random_nonnegative(order: int, dim: int, seed: Optional[int] = 0, sparsity: float = 0.0) -> Tensor:
    """Uniform [0, 1) entries, each zeroed with probability `sparsity`."""
    _check_sparsity(sparsity)
    rng = np.random.default_rng(seed)
    shape = (dim,) * order
    values = rng.random(shape)
    return Tensor(np.where(_support(rng, shape, sparsity), values, 0.0))


def random_z(order: int, dim: int, seed: Optional[int] = 0, sparsity: float = 0.0) -> Tensor:
    """Off-diagonal entries in (-1, 0], diagonal uniform on [0, dim^(order-1)).

    The diagonal range straddles rho of a dense off-diagonal part, so the M and
    not-M classes both occur.
    """
    _check_sparsity(sparsity)
    rng = np.random.default_rng(seed)
    shape = (dim,) * order
    off = np.where(_support(rng, shape, sparsity), -rng.random(shape), 0.0)
    diag = rng.random(shape) * dim ** (order - 1)
    mask = diagonal_mask(order, dim)
    return Tensor(np.where(mask, diag, off) + 0.0)


def random_hull(order: int, dim: int, seed: Optional[int] = 0, sparsity: float = 0.0,
                width: float = 0.5) -> Tuple[Tensor, Tensor]:
    """Endpoints (lower, upper) around a random Z-tensor with independent entrywise widths."""
    rng = np.random.default_rng(seed)
    base = random_z(order, dim, seed=int(rng.integers(2 ** 31)), sparsity=sparsity)
    shape = base.shape
    below = rng.random(shape) * width
    above = rng.random(shape) * width
    return Tensor(base.data - below), Tensor(base.data + above)


def generate(kind: Union[str, TensorKind], order: int, dim: int, seed: Optional[int] = 0,
             sparsity: float = 0.0) -> Union[Tensor, Tuple[Tensor, Tensor]]:
    kind = TensorKind(kind)
    if order < 1 or dim < 1:
        raise TensorConstructionException(f"order and dim must be >= 1, got order={order}, dim={dim}")
    if kind == TensorKind.ZERO:
        return zeros(order, dim)
    if kind == TensorKind.IDENTITY:
        return identity(order, dim)
    if kind == TensorKind.ONES:
        return ones(order, dim)
    if kind == TensorKind.RANDOM_NONNEG:
        return random_nonnegative(order, dim, seed, sparsity)
    if kind == TensorKind.RANDOM_Z:
        return random_z(order, dim, seed, sparsity)
    return random_hull(order, dim, seed, sparsity)

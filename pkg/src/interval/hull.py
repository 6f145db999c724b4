# src/interval/hull.py
"""Interval hulls I(A, B) of tensors and their vertex tensors I_z."""
from dataclasses import dataclass
from typing import Iterator, Optional, Tuple

import numpy as np

from ..core.exceptions import DimensionMismatchException, IntervalException
from ..core.tensor import Tensor, apply, sign_products
from ..utils.logger import setup_logger

logger = setup_logger(__name__)

SignVector = Tuple[int, ...]

DEFAULT_SAMPLE_ATTEMPTS = 64


@dataclass(frozen=True, eq=False)
class IntervalHull:
    lower: Tensor
    upper: Tensor
    center: Tensor
    radius: Tensor

    @property
    def order(self) -> int:
        return self.lower.order

    @property
    def dim(self) -> int:
        return self.lower.dim

    @property
    def is_degenerate(self) -> bool:
        return not np.any(self.radius.data)

    def __repr__(self) -> str:
        return f"IntervalHull(order={self.order}, dim={self.dim}, degenerate={self.is_degenerate})"


def _format_index(index) -> str:
    return "(" + ",".join(str(int(i)) for i in index) + ")"


def hull_new(A: Tensor, B: Tensor) -> IntervalHull:
    if A.shape != B.shape:
        raise DimensionMismatchException(f"hull endpoints have shapes {A.shape} and {B.shape}")
    above = np.argwhere(A.data > B.data)
    if len(above):
        raise IntervalException(f"A ≰ B at {_format_index(above[0])}")
    return IntervalHull(
        lower=A,
        upper=B,
        center=Tensor((B.data + A.data) / 2),
        radius=Tensor((B.data - A.data) / 2),
    )


def contains(h: IntervalHull, C: Tensor, interior: bool = False) -> bool:
    """Closed membership A <= C <= B, or open weights where A < B and equality where A = B."""
    if C.shape != h.lower.shape:
        raise DimensionMismatchException(f"tensor of shape {C.shape} does not match hull shape {h.lower.shape}")
    A, B, c = h.lower.data, h.upper.data, C.data
    if not interior:
        return bool(np.all(A <= c) and np.all(c <= B))
    open_part = A < B
    return bool(np.all((A < c) & (c < B) | ~open_part) and np.all(c[~open_part] == A[~open_part]))


def member_towards(h: IntervalHull, t: float) -> Tensor:
    """The member A + t(B - A) for a single weight t in [0, 1]."""
    if not 0.0 <= t <= 1.0:
        raise IntervalException(f"hull weight must lie in [0, 1], got {t}")
    A, B = h.lower.data, h.upper.data
    return Tensor(np.clip(A + t * (B - A), A, B))


def sample(h: IntervalHull, seed: Optional[int] = None, interior: bool = False,
           attempts: int = DEFAULT_SAMPLE_ATTEMPTS) -> Tensor:
    """Member with independent uniform weights per entry; deterministic under seed."""
    rng = np.random.default_rng(seed)
    A, B = h.lower.data, h.upper.data
    t = rng.random(A.shape)
    C = np.clip(A + t * (B - A), A, B)
    if interior:
        open_part = A < B
        for _ in range(attempts):
            bad = open_part & ((C <= A) | (C >= B))
            if not np.any(bad):
                break
            C[bad] = np.clip(A[bad] + rng.random(int(bad.sum())) * (B[bad] - A[bad]), A[bad], B[bad])
        else:
            bad = open_part & ((C <= A) | (C >= B))
            C[bad] = h.center.data[bad]
    return Tensor(C)


def sign_vector(x) -> SignVector:
    """Componentwise sign, with zero mapped to +1."""
    return tuple(1 if v >= 0 else -1 for v in np.asarray(x, dtype=float))


def _check_sign_vector(h: IntervalHull, z) -> np.ndarray:
    z = np.asarray(z)
    if z.shape != (h.dim,):
        raise DimensionMismatchException(f"sign vector of length {z.size} does not match hull dim {h.dim}")
    if not np.all(np.abs(z) == 1):
        raise IntervalException(f"sign vector entries must be +1 or -1, got {z.tolist()}")
    return z


def vertex_tensor(h: IntervalHull, z) -> Tensor:
    """I_z = I_c - z_{i1}...z_{im} Delta, taken as the exact endpoint entry it always equals."""
    z = _check_sign_vector(h, z)
    return Tensor(np.where(sign_products(h.order, z) > 0, h.lower.data, h.upper.data))


def _odd_occurrence_masks(order: int, dim: int) -> np.ndarray:
    """masks[j][i1..im] is true when j occurs an odd number of times among i1..im."""
    grids = np.indices((dim,) * order)
    return np.stack([(grids == j).sum(axis=0) % 2 == 1 for j in range(dim)])


def iter_vertices(h: IntervalHull, fix_first: bool = False) -> Iterator[Tuple[SignVector, Tensor]]:
    """Yield (z, I_z) in Gray-code order, flipping one sign (and one parity mask) per step.

    With fix_first the first sign stays +1, which enumerates every vertex once for even
    order since I_z = I_{-z} there.
    """
    n = h.dim
    free = list(range(1, n)) if fix_first else list(range(n))
    masks = _odd_occurrence_masks(h.order, n)
    z = np.ones(n, dtype=int)
    parity = np.ones(h.lower.shape)
    A, B = h.lower.data, h.upper.data

    previous = 0
    for k in range(2 ** len(free)):
        gray = k ^ (k >> 1)
        if k:
            j = free[(gray ^ previous).bit_length() - 1]
            z[j] = -z[j]
            parity[masks[j]] *= -1
        previous = gray
        yield tuple(int(v) for v in z), Tensor(np.where(parity > 0, A, B))


def key_inequality_gap(h: IntervalHull, C: Tensor, x) -> np.ndarray:
    """x_i (Cx^{m-1})_i - x_i (I_z x^{m-1})_i with z = sign_vector(x); nonnegative for members C."""
    if not contains(h, C):
        raise IntervalException("tensor lies outside the interval hull")
    x = np.asarray(x, dtype=float)
    vertex = vertex_tensor(h, sign_vector(x))
    return x * apply(C, x) - x * apply(vertex, x)

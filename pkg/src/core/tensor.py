# src/core/tensor.py
"""Dense m-order n-dimensional tensors and the multilinear primitives built on them.

Entries are stored row-major (first index slowest) in a read-only numpy array of
shape ``(n,) * m``. Vectors are plain 1-D float arrays; index sets are sorted
tuples of 0-based indices.
"""
from dataclasses import dataclass
from itertools import permutations
from math import factorial
from typing import Iterable, Optional, Sequence, Tuple, Union

import numpy as np

from .exceptions import DimensionMismatchException, TensorConstructionException

Vector = np.ndarray
IndexSet = Tuple[int, ...]


@dataclass(frozen=True, eq=False)
class Tensor:
    data: np.ndarray

    def __post_init__(self):
        data = np.array(self.data, dtype=float, copy=True)
        if data.ndim < 1:
            raise TensorConstructionException("tensor order must be at least 1")
        if len(set(data.shape)) != 1 or data.shape[0] < 1:
            raise TensorConstructionException(f"tensor must be square with dim >= 1, got shape {data.shape}")
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    @property
    def order(self) -> int:
        return self.data.ndim

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.data.shape

    @property
    def entries(self) -> np.ndarray:
        """Row-major flat view of the entries."""
        return self.data.reshape(-1)

    def __getitem__(self, index):
        return self.data[index]

    def __add__(self, other: "Tensor") -> "Tensor":
        _check_same_shape(self, other)
        return Tensor(self.data + other.data)

    def __sub__(self, other: "Tensor") -> "Tensor":
        _check_same_shape(self, other)
        return Tensor(self.data - other.data)

    def __neg__(self) -> "Tensor":
        return Tensor(-self.data)

    def __mul__(self, scalar: float) -> "Tensor":
        return Tensor(self.data * float(scalar))

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"Tensor(order={self.order}, dim={self.dim}, entries={self.entries.tolist()})"


def _check_same_shape(A: Tensor, B: Tensor):
    if A.shape != B.shape:
        raise DimensionMismatchException(
            f"shape mismatch: order/dim ({A.order}, {A.dim}) vs ({B.order}, {B.dim})"
        )


def _check_vector(A: Tensor, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.shape[0] != A.dim:
        raise DimensionMismatchException(f"vector of length {x.shape[0] if x.ndim == 1 else x.shape} "
                                         f"does not match tensor dim {A.dim}")
    return x


def new_dense(order: int, dim: int, entries: Union[Sequence[float], np.ndarray]) -> Tensor:
    """Build a tensor from a row-major entry list of length dim**order."""
    if order < 1 or dim < 1:
        raise TensorConstructionException(f"order and dim must be >= 1, got order={order}, dim={dim}")
    flat = np.asarray(entries, dtype=float).reshape(-1)
    expected = dim ** order
    if flat.shape[0] != expected:
        raise TensorConstructionException(f"expected {expected} entries, got {flat.shape[0]}")
    return Tensor(flat.reshape((dim,) * order))


def zeros(order: int, dim: int) -> Tensor:
    return new_dense(order, dim, np.zeros(dim ** order))


def ones(order: int, dim: int) -> Tensor:
    return new_dense(order, dim, np.ones(dim ** order))


def diagonal(order: int, values: Sequence[float]) -> Tensor:
    values = np.asarray(values, dtype=float)
    data = np.zeros((values.shape[0],) * order)
    for i, value in enumerate(values):
        data[(i,) * order] = value
    return Tensor(data)


def identity(order: int, dim: int) -> Tensor:
    return diagonal(order, np.ones(dim))


def diagonal_mask(order: int, dim: int) -> np.ndarray:
    mask = np.zeros((dim,) * order, dtype=bool)
    for i in range(dim):
        mask[(i,) * order] = True
    return mask


def diagonal_entries(A: Tensor) -> np.ndarray:
    return np.array([A.data[(i,) * A.order] for i in range(A.dim)])


def _tail_product(x: np.ndarray, count: int) -> np.ndarray:
    """Flattened x ⊗ ... ⊗ x (count factors) in lexicographic index order."""
    product = np.ones(1)
    for _ in range(count):
        product = np.multiply.outer(product, x).reshape(-1)
    return product


def apply(A: Tensor, x) -> Vector:
    """(Ax^{m-1})_i = sum over (i2..im) of A[i, i2..im] x_{i2}...x_{im}."""
    x = _check_vector(A, x)
    rows = A.data.reshape(A.dim, -1)
    return rows @ _tail_product(x, A.order - 1)


def form_value(A: Tensor, x) -> float:
    """Ax^m, the homogeneous form of A evaluated at x."""
    x = _check_vector(A, x)
    return float(x @ apply(A, x))


def hadamard_power(x, k: int) -> Vector:
    if k < 0:
        raise ValueError("Hadamard power exponent must be nonnegative")
    return np.power(np.asarray(x, dtype=float), k)


def as_index_set(alpha: Iterable[int], dim: int) -> IndexSet:
    members = tuple(sorted(set(int(i) for i in alpha)))
    if not members:
        raise DimensionMismatchException("index set must be nonempty")
    if members[0] < 0 or members[-1] >= dim:
        raise DimensionMismatchException(f"index set {members} out of range for dim {dim}")
    return members


def principal_subtensor(A: Tensor, alpha: Iterable[int]) -> Tensor:
    alpha = as_index_set(alpha, A.dim)
    return Tensor(A.data[np.ix_(*([list(alpha)] * A.order))])


def matrix_product(A: Tensor, B) -> Tensor:
    """C = A B...B with C[i1..im] = sum A[j1..jm] B[i1, j1] ... B[im, jm]."""
    B = np.asarray(B, dtype=float)
    if B.shape != (A.dim, A.dim):
        raise DimensionMismatchException(f"matrix of shape {B.shape} does not match tensor dim {A.dim}")
    C = A.data
    for axis in range(A.order):
        C = np.moveaxis(np.tensordot(B, C, axes=([1], [axis])), 0, axis)
    return Tensor(C)


@dataclass(frozen=True)
class Comparison:
    leq: bool
    lt: bool
    eq: bool


def compare(A: Tensor, B: Tensor) -> Comparison:
    _check_same_shape(A, B)
    return Comparison(
        leq=bool(np.all(A.data <= B.data)),
        lt=bool(np.all(A.data < B.data)),
        eq=bool(np.array_equal(A.data, B.data)),
    )


def is_nonnegative(A: Tensor) -> bool:
    return bool(np.all(A.data >= 0))


def first_negative_entry(A: Tensor) -> Optional[Tuple[int, ...]]:
    negative = np.argwhere(A.data < 0)
    return tuple(int(i) for i in negative[0]) if len(negative) else None


def is_symmetric(A: Tensor) -> bool:
    return all(np.array_equal(A.data, A.data.transpose(p)) for p in permutations(range(A.order)))


def symmetrize(A: Tensor) -> Tensor:
    total = np.zeros_like(A.data)
    for p in permutations(range(A.order)):
        total = total + A.data.transpose(p)
    return Tensor(total / factorial(A.order))


def is_diagonal(A: Tensor) -> bool:
    return bool(np.all(A.data[~diagonal_mask(A.order, A.dim)] == 0))


def first_positive_off_diagonal(A: Tensor) -> Optional[Tuple[int, ...]]:
    offending = np.argwhere((A.data > 0) & ~diagonal_mask(A.order, A.dim))
    return tuple(int(i) for i in offending[0]) if len(offending) else None


def is_z_tensor(A: Tensor) -> bool:
    return first_positive_off_diagonal(A) is None


def scale_shift(A: Tensor, a: float, b: float) -> Tensor:
    """a(A + bI)."""
    return Tensor(a * (A.data + b * identity(A.order, A.dim).data))


def sign_products(order: int, z) -> np.ndarray:
    """Array P with P[i1..im] = z_{i1} ... z_{im}."""
    z = np.asarray(z, dtype=float)
    product = np.ones(())
    for _ in range(order):
        product = np.multiply.outer(product, z)
    return product

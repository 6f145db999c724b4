# src/analyzer/structure.py
"""Structural predicates of nonnegative tensors: R(A), (weak) irreducibility, block partition."""
from itertools import combinations
from typing import List, Sequence, Tuple

import networkx as nx
import numpy as np

from ..core.exceptions import NegativeEntryException, StructureException
from ..core.tensor import Tensor, first_negative_entry, principal_subtensor
from ..utils.logger import setup_logger
from .models.spectral_models import BlockPartition

DEFAULT_IRREDUCIBLE_CAP = 16

logger = setup_logger(__name__)


def require_nonnegative(A: Tensor, what: str = "operation"):
    index = first_negative_entry(A)
    if index is not None:
        raise NegativeEntryException(
            f"{what} requires a nonnegative tensor; entry {A.data[index]!r} at {index}", index
        )


def _tail_indices(order: int, dim: int) -> np.ndarray:
    """(dim**(order-1), order-1) array of tail multi-indices in lexicographic order."""
    if order == 1:
        return np.zeros((1, 0), dtype=int)
    grids = np.indices((dim,) * (order - 1)).reshape(order - 1, -1)
    return grids.T


def representation_matrix(A: Tensor) -> np.ndarray:
    """R(A)[i, j] = sum of A[i, i2..im] over tails {i2..im} containing j."""
    require_nonnegative(A, "representation_matrix")
    n = A.dim
    rows = A.data.reshape(n, -1)
    tails = _tail_indices(A.order, n)
    R = np.zeros((n, n))
    for j in range(n):
        contains_j = np.any(tails == j, axis=1)
        R[:, j] = rows[:, contains_j].sum(axis=1)
    return R


def _digraph(R: np.ndarray) -> nx.DiGraph:
    graph = nx.DiGraph()
    graph.add_nodes_from(range(R.shape[0]))
    graph.add_edges_from((int(i), int(j)) for i, j in np.argwhere(R > 0))
    return graph


def is_weakly_irreducible(A: Tensor) -> bool:
    R = representation_matrix(A)
    if A.dim == 1:
        return True
    return nx.is_strongly_connected(_digraph(R))


def _reducing_set(A: Tensor, alpha: Sequence[int]) -> bool:
    complement = [i for i in range(A.dim) if i not in alpha]
    block = A.data[np.ix_(list(alpha), *([complement] * (A.order - 1)))]
    return not np.any(block != 0)


def is_irreducible(A: Tensor, cap: int = DEFAULT_IRREDUCIBLE_CAP) -> bool:
    """No nonempty proper alpha with A[i1..im] = 0 for i1 in alpha and i2..im outside alpha."""
    require_nonnegative(A, "is_irreducible")
    if A.dim > cap:
        raise StructureException(
            f"exhaustive check infeasible: dim {A.dim} exceeds irreducibility cap {cap}"
        )
    for size in range(1, A.dim):
        for alpha in combinations(range(A.dim), size):
            if _reducing_set(A, alpha):
                logger.debug(f"Reducing index set found: {alpha}")
                return False
    return True


def _scc_blocks(R: np.ndarray) -> List[Tuple[int, ...]]:
    graph = _digraph(R)
    condensed = nx.condensation(graph)
    members = nx.get_node_attributes(condensed, 'members')
    order = nx.lexicographical_topological_sort(condensed, key=lambda c: min(members[c]))
    return [tuple(sorted(members[c])) for c in order]


def cross_condition_holds(A: Tensor, blocks: Sequence[Sequence[int]]) -> bool:
    """A[r, i2..im] = 0 whenever r lies in block p and some tail index lies in block q < p."""
    position = np.empty(A.dim, dtype=int)
    for p, block in enumerate(blocks):
        position[list(block)] = p
    rows = A.data.reshape(A.dim, -1)
    tails = _tail_indices(A.order, A.dim)
    if tails.shape[1] == 0:
        return True
    earliest_tail_block = position[tails].min(axis=1)
    for r in range(A.dim):
        offending = earliest_tail_block < position[r]
        if np.any(rows[r, offending] != 0):
            return False
    return True


def _partition(A: Tensor) -> Tuple[List[Tuple[int, ...]], bool]:
    blocks = _scc_blocks(representation_matrix(A))
    if len(blocks) == 1:
        return blocks, True

    refined: List[Tuple[int, ...]] = []
    all_irreducible = True
    for position, block in enumerate(blocks):
        sub = principal_subtensor(A, block)
        if len(block) == 1 or is_weakly_irreducible(sub):
            refined.append(block)
            continue
        sub_blocks, sub_ok = _partition(sub)
        candidate = [tuple(block[k] for k in sub_block) for sub_block in sub_blocks]
        trial = refined + candidate + blocks[position + 1:]
        if cross_condition_holds(A, trial):
            refined.extend(candidate)
            all_irreducible = all_irreducible and sub_ok
        else:
            logger.debug(f"Block {block} kept unrefined; refinement breaks the block order")
            refined.append(block)
            all_irreducible = False
    return refined, all_irreducible


def weakly_irreducible_partition(A: Tensor) -> BlockPartition:
    """Blocks ordered so that no row of a later block touches an earlier block."""
    require_nonnegative(A, "weakly_irreducible_partition")
    blocks, ok = _partition(A)
    return BlockPartition(blocks=tuple(blocks), blocks_weakly_irreducible=ok)

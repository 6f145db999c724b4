# src/analyzer/models/spectral_models.py
from dataclasses import dataclass
from typing import Any, Dict, Optional, Tuple

import numpy as np

IndexSet = Tuple[int, ...]


@dataclass(frozen=True)
class BlockPartition:
    blocks: Tuple[IndexSet, ...]
    # false when some block's principal subtensor could not be refined to a weakly irreducible one
    blocks_weakly_irreducible: bool = True

    @property
    def is_trivial(self) -> bool:
        return len(self.blocks) == 1

    def block_of(self, index: int) -> int:
        for position, block in enumerate(self.blocks):
            if index in block:
                return position
        raise KeyError(index)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'blocks': [list(block) for block in self.blocks],
            'blocks_weakly_irreducible': self.blocks_weakly_irreducible,
        }


@dataclass
class SpectralResult:
    rho: float
    lower: float
    upper: float
    iterations: int
    converged: bool
    perron: Optional[np.ndarray] = None
    block: Optional[IndexSet] = None
    lower_witness: Optional[np.ndarray] = None

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def to_dict(self) -> Dict[str, Any]:
        return {
            'rho': self.rho,
            'lower': self.lower,
            'upper': self.upper,
            'iterations': self.iterations,
            'converged': self.converged,
            'perron': None if self.perron is None else self.perron.tolist(),
            'block': None if self.block is None else list(self.block),
        }

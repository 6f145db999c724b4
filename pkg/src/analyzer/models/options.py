# src/analyzer/models/options.py
import os
from dataclasses import dataclass, field
from typing import Optional

from ...core.exceptions import ConfigurationException


@dataclass(frozen=True)
class SpectralOptions:
    tol: float = 1e-10
    max_iters: int = 100000
    shift: float = 1.0

    def __post_init__(self):
        if not self.tol > 0:
            raise ConfigurationException(f"spectral tol must be > 0, got {self.tol}")
        if self.shift < 0:
            raise ConfigurationException(f"spectral shift must be >= 0, got {self.shift}")
        if self.max_iters < 1:
            raise ConfigurationException(f"spectral max_iters must be >= 1, got {self.max_iters}")


@dataclass(frozen=True)
class MTolerances:
    """Tolerances turning the strict inequalities of the M-classes into comparisons."""
    strict_rel_tol: float = 1e-9

    def strict_tol(self, s: float) -> float:
        return self.strict_rel_tol * max(1.0, abs(s))


@dataclass(frozen=True)
class SearchBudget:
    starts: int = 64
    max_iters: int = 500
    seed: int = 0
    cert_tol: float = 1e-9
    pd_tol: float = 1e-9
    support_cap: int = 8
    minor_cap: int = 12

    def __post_init__(self):
        if self.starts < 1 or self.max_iters < 1:
            raise ConfigurationException("search budget needs at least one start and one iteration")
        if self.cert_tol < 0 or self.pd_tol < 0:
            raise ConfigurationException("certificate tolerances must be nonnegative")


@dataclass(frozen=True)
class HullSettings:
    vertex_cap: int = 20
    threads: Optional[int] = None
    sample_attempts: int = 64
    spectral: SpectralOptions = field(default_factory=SpectralOptions)
    tolerances: MTolerances = field(default_factory=MTolerances)
    budget: SearchBudget = field(default_factory=SearchBudget)

    def __post_init__(self):
        if self.vertex_cap < 1:
            raise ConfigurationException("interval.vertex_cap must be a positive integer")
        if self.threads is not None and self.threads < 1:
            raise ConfigurationException("thread count must be a positive integer")

    @property
    def worker_count(self) -> int:
        return self.threads or os.cpu_count() or 1


@dataclass(frozen=True)
class OracleSettings:
    cw_effort: int = 4000
    grid_resolution: float = 0.01
    subset_cap: int = 10
    matrix_cap: int = 12

    def __post_init__(self):
        if self.cw_effort < 1:
            raise ConfigurationException("oracle.cw_effort must be a positive integer")
        if not 0 < self.grid_resolution < 1:
            raise ConfigurationException(f"oracle.grid_resolution must lie in (0, 1), got {self.grid_resolution}")

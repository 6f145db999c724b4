# src/analyzer/models/__init__.py
from .options import HullSettings, MTolerances, OracleSettings, SearchBudget, SpectralOptions
from .spectral_models import BlockPartition, SpectralResult
from .verdict_models import HullVerdict, Verdict, VertexRecord, ZSplit

__all__ = [
    'HullSettings',
    'MTolerances',
    'OracleSettings',
    'SearchBudget',
    'SpectralOptions',
    'BlockPartition',
    'SpectralResult',
    'HullVerdict',
    'Verdict',
    'VertexRecord',
    'ZSplit',
]

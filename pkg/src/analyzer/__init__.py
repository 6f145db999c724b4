# src/analyzer/__init__.py
from .classifier import classify, classify_m, is_p, is_p0, is_pd, is_psd, z_split
from .form_search import form_gradient, min_form_value, p_objective
from .spectral import cw_bounds, cw_lower, is_eigenpair, perron_vector, spectral_radius
from .structure import (
    is_irreducible,
    is_weakly_irreducible,
    representation_matrix,
    weakly_irreducible_partition,
)

__all__ = [
    'classify',
    'classify_m',
    'is_p',
    'is_p0',
    'is_pd',
    'is_psd',
    'z_split',
    'form_gradient',
    'min_form_value',
    'p_objective',
    'cw_bounds',
    'cw_lower',
    'is_eigenpair',
    'perron_vector',
    'spectral_radius',
    'is_irreducible',
    'is_weakly_irreducible',
    'representation_matrix',
    'weakly_irreducible_partition',
]

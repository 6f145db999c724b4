# src/oracle/__init__.py
from .brute_force import (
    Bracket,
    cw_refine,
    grid_min_form,
    matrix_rho,
    p_matrix_minors,
    principal_minors,
    subset_irreducible,
)

__all__ = [
    'Bracket',
    'cw_refine',
    'grid_min_form',
    'matrix_rho',
    'p_matrix_minors',
    'principal_minors',
    'subset_irreducible',
]

# src/interval/__init__.py
from .hull import (
    IntervalHull,
    SignVector,
    contains,
    hull_new,
    iter_vertices,
    key_inequality_gap,
    member_towards,
    sample,
    sign_vector,
    vertex_tensor,
)
from .hull_certifier import (
    HullCertifier,
    hull_is_p,
    hull_is_p0,
    hull_is_pd,
    hull_is_psd,
    hull_is_strong_m,
    interior_is_strong_m,
)

__all__ = [
    'IntervalHull',
    'SignVector',
    'contains',
    'hull_new',
    'iter_vertices',
    'key_inequality_gap',
    'member_towards',
    'sample',
    'sign_vector',
    'vertex_tensor',
    'HullCertifier',
    'hull_is_p',
    'hull_is_p0',
    'hull_is_pd',
    'hull_is_psd',
    'hull_is_strong_m',
    'interior_is_strong_m',
]

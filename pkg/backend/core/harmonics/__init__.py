"""
Spherical Harmonics

Orthonormal harmonic bases on S^1 and S^2, Gegenbauer polynomials, product
quadrature rules and the projection operator Pi_k with its constants.
"""

from core.harmonics.basis import HarmonicBasis, eval_harmonic, harmonic_basis
from core.harmonics.projection import project
from core.harmonics.quadrature import QuadratureRule, quadrature
from core.harmonics.special import (
    basis_dim,
    gegenbauer,
    projection_constants,
    sphere_area,
    total_dim,
)

__all__ = [
    'HarmonicBasis',
    'QuadratureRule',
    'basis_dim',
    'eval_harmonic',
    'gegenbauer',
    'harmonic_basis',
    'project',
    'projection_constants',
    'quadrature',
    'sphere_area',
    'total_dim',
]

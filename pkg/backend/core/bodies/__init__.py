"""
Convex Bodies

Polytopes from halfspaces or vertices, surface area measures, support
functions, (translative) Hausdorff distances, inclusion radii and reference
bodies.
"""

from core.bodies.distances import hausdorff, translative_hausdorff
from core.bodies.polytope import Polytope, halfspace_intersection
from core.bodies.radii import elongation_axis, inclusion_radii, noise_robust_radii
from core.bodies.reference import (
    cube,
    pyramid,
    reference_body,
    regular_polygon,
    surface_area_measure,
)

__all__ = [
    'Polytope',
    'cube',
    'elongation_axis',
    'halfspace_intersection',
    'hausdorff',
    'inclusion_radii',
    'noise_robust_radii',
    'pyramid',
    'reference_body',
    'regular_polygon',
    'surface_area_measure',
    'translative_hausdorff',
]

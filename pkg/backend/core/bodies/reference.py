"""
Reference bodies and their surface area measures.

Polytopes are built exactly from their H- or V-representation. Smooth bodies
(balls, ellipsoids) get a polytope inscribed through icosphere samples for
geometry; the ball's surface area measure is the quadrature discretization of
r^{n-1} sigma, which has exact moments.
"""

import logging
from math import pi, sqrt, tan
from typing import Dict, Tuple, Union

import numpy as np

from core.bodies.grids import circle_directions, icosphere
from core.bodies.polytope import Polytope, halfspace_intersection
from core.exceptions import PolytopeError
from core.measures.discretize import sphere_measure
from core.models import BodyKind, BodySpec, DiscreteMeasure

logger = logging.getLogger(__name__)

# resolution -> (quadrature exactness for balls, icosphere level)
RESOLUTIONS: Dict[str, Tuple[int, int]] = {
    "coarse": (8, 2),
    "medium": (16, 3),
    "fine": (32, 4),
}


def _resolution(resolution: str) -> Tuple[int, int]:
    try:
        return RESOLUTIONS[resolution]
    except KeyError:
        raise ValueError(
            f"Unknown resolution {resolution!r}; choose from {sorted(RESOLUTIONS)}"
        ) from None


def _sphere_samples(dim: int, level: int) -> np.ndarray:
    if dim == 3:
        return np.array(icosphere(level))
    return circle_directions(10 * 4 ** level + 2)


# ============= POLYTOPE PRESETS =============


def cube(side: float = 1.0, dim: int = 3) -> Polytope:
    """Axis-parallel cube (square for dim = 2) centered at the origin"""
    normals = np.vstack([np.eye(dim), -np.eye(dim)])
    return halfspace_intersection(normals, np.full(2 * dim, side / 2.0))


def pyramid(base_side: float = 1.0, height: float = 1.0) -> Polytope:
    """
    Square pyramid: base in the plane z = 0 centered at the origin, apex at
    (0, 0, height). Five facets.
    """
    half = base_side / 2.0
    slant = sqrt(height ** 2 + half ** 2)
    normals = [[0.0, 0.0, -1.0]]
    supports = [0.0]
    for x, y in ((1, 0), (-1, 0), (0, 1), (0, -1)):
        normals.append([height * x / slant, height * y / slant, half / slant])
        supports.append(height * half / slant)
    return halfspace_intersection(np.array(normals), np.array(supports))


def regular_polygon(sides: int) -> Polytope:
    """
    Regular polygon with outer normals at angles 2 pi j / m and edge lengths
    2 pi / m, so its perimeter equals that of the unit disc.
    """
    if sides < 3:
        raise ValueError(f"A polygon needs >= 3 sides, got {sides}")
    normals = circle_directions(sides)
    inradius = pi / (sides * tan(pi / sides))
    return halfspace_intersection(normals, np.full(sides, inradius))


# ============= SPEC DISPATCH =============


def reference_body(spec: BodySpec, resolution: str = "medium") -> Polytope:
    """
    Deterministic polytope for a body specification.

    Balls and ellipsoids are approximated by the hull of icosphere samples
    (n = 3) or equispaced boundary points (n = 2); resolution picks the level.

    Raises:
        ValueError: For an unknown resolution
        PolytopeError: If the described polytope is degenerate
    """
    _, level = _resolution(resolution)
    kind = spec.kind

    if kind is BodyKind.BALL:
        return Polytope.from_vertices(spec.radius * _sphere_samples(spec.dim, level))
    if kind is BodyKind.ELLIPSOID:
        axes = np.asarray(spec.semi_axes, dtype=float)
        return Polytope.from_vertices(_sphere_samples(spec.dim, level) * axes)
    if kind is BodyKind.CUBE:
        return cube(spec.side, spec.dim)
    if kind is BodyKind.PYRAMID:
        return pyramid(spec.base_side, spec.height)
    if kind is BodyKind.REGULAR_POLYGON:
        return regular_polygon(spec.sides)
    if kind is BodyKind.PLANAR:
        body = Polytope.from_vertices(np.asarray(spec.vertices, dtype=float))
        if body.kind != "flat":
            raise PolytopeError("Planar body vertices must span a hyperplane")
        return body
    if spec.normals is not None and spec.supports is not None:
        return halfspace_intersection(np.asarray(spec.normals), np.asarray(spec.supports))
    return Polytope.from_vertices(np.asarray(spec.vertices, dtype=float))


def surface_area_measure(body: Union[BodySpec, Polytope],
                         resolution: str = "medium") -> DiscreteMeasure:
    """
    Surface area measure S_{n-1}(K, .) as a discrete measure.

    Polytopes give their facet atoms, flat bodies S (delta_u + delta_{-u}),
    balls the quadrature discretization of r^{n-1} sigma, ellipsoids the facet
    atoms of the inscribed polytope.
    """
    if isinstance(body, Polytope):
        return body.surface_measure()
    if body.kind is BodyKind.BALL:
        degree, _ = _resolution(resolution)
        return sphere_measure(body.dim, degree, body.radius ** (body.dim - 1))
    measure = reference_body(body, resolution).surface_measure()
    logger.debug("Surface measure of %s: %d atoms, mass %.6g",
                 body.name, measure.size, measure.total_mass)
    return measure

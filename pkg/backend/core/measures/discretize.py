"""
Quadrature discretization of smooth measures on the sphere.
"""

from typing import Optional, Sequence

from core.harmonics.quadrature import quadrature
from core.models import BodySpec, DiscreteMeasure

SUPPORTED_SPECS = ("sphere", "ellipsoid")


def sphere_measure(dim: int, exact_degree: int, scale: float = 1.0) -> DiscreteMeasure:
    """
    scale * sigma on S^{n-1} as quadrature atoms.

    Moments up to exact_degree agree with those of scale * sigma to rounding.
    The surface area measure of the ball of radius r is r^{n-1} sigma.
    """
    if scale < 0:
        raise ValueError(f"Scale must be >= 0, got {scale}")
    rule = quadrature(dim, exact_degree)
    return DiscreteMeasure(rule.nodes.copy(), rule.weights * scale)


def resolution_for_degree(exact_degree: int) -> str:
    """Polytope resolution giving roughly the same angular detail as a rule"""
    if exact_degree <= 8:
        return "coarse"
    return "medium" if exact_degree <= 16 else "fine"


def discretize(spec: str, exact_degree: int, dim: int = 3, scale: float = 1.0,
               semi_axes: Optional[Sequence[float]] = None) -> DiscreteMeasure:
    """
    Discrete stand-in for a smooth surface area measure.

    Args:
        spec: "sphere" (scale * sigma) or "ellipsoid" (inscribed polytope)
        exact_degree: Quadrature exactness, or the detail level for ellipsoids
        dim: Ambient dimension
        scale: Factor on sigma for "sphere"
        semi_axes: Semi-axes for "ellipsoid"

    Raises:
        ValueError: For an unsupported spec
    """
    if spec == "sphere":
        return sphere_measure(dim, exact_degree, scale)
    if spec == "ellipsoid":
        # core.bodies builds on this package
        from core.bodies.reference import surface_area_measure

        if semi_axes is None:
            semi_axes = [1.0, 1.0, 2.0] if dim == 3 else [1.0, 2.0]
        body = BodySpec.ellipsoid(semi_axes)
        return surface_area_measure(body, resolution_for_degree(exact_degree))
    raise ValueError(f"Unsupported measure spec {spec!r}; choose from {SUPPORTED_SPECS}")

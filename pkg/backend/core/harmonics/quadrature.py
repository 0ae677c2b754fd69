"""
Product quadrature rules on S^1 and S^2.

n = 2: trapezoid rule in the angle with exact_degree + 1 equispaced nodes,
exact for trigonometric polynomials of degree <= exact_degree.

n = 3: Gauss-Legendre in cos(theta) times the trapezoid rule in phi. With
p = exact_degree // 2 + 1 Legendre nodes and q = exact_degree + 1 azimuthal
nodes every spherical polynomial of degree <= exact_degree is integrated exactly
(odd azimuthal orders vanish in phi, even ones leave a polynomial in cos theta).
"""

from dataclasses import dataclass, field
from functools import lru_cache
from math import pi

import numpy as np
from scipy.special import roots_legendre

from core.harmonics.special import check_dimension


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Nodes on the unit sphere with positive weights summing to omega_n"""

    dim: int
    nodes: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)
    exact_degree: int

    @property
    def size(self) -> int:
        return len(self.weights)

    def integrate(self, values: np.ndarray) -> np.ndarray:
        """
        Integrate sampled values against the spherical Lebesgue measure.

        Args:
            values: Array whose first axis runs over the nodes

        Returns:
            Scalar (or array over the remaining axes)
        """
        values = np.asarray(values, dtype=float)
        return np.tensordot(self.weights, values, axes=(0, 0))

    def inner(self, f: np.ndarray, g: np.ndarray) -> float:
        """L2 inner product of two sampled functions"""
        return float(self.weights @ (np.asarray(f) * np.asarray(g)))

    def __repr__(self) -> str:
        return (
            f"QuadratureRule(dim={self.dim}, nodes={self.size}, "
            f"exact_degree={self.exact_degree})"
        )


def _circle_rule(exact_degree: int) -> QuadratureRule:
    count = exact_degree + 1
    theta = 2.0 * pi * np.arange(count) / count
    nodes = np.column_stack([np.cos(theta), np.sin(theta)])
    weights = np.full(count, 2.0 * pi / count)
    return QuadratureRule(2, nodes, weights, exact_degree)


def _sphere_rule(exact_degree: int) -> QuadratureRule:
    polar_count = exact_degree // 2 + 1
    azimuth_count = exact_degree + 1
    t, polar_weights = roots_legendre(polar_count)
    phi = 2.0 * pi * np.arange(azimuth_count) / azimuth_count

    cos_t = np.repeat(t, azimuth_count)
    sin_t = np.sqrt(np.clip(1.0 - cos_t**2, 0.0, None))
    phis = np.tile(phi, polar_count)
    nodes = np.column_stack([sin_t * np.sin(phis), sin_t * np.cos(phis), cos_t])
    nodes /= np.linalg.norm(nodes, axis=1)[:, None]
    weights = np.repeat(polar_weights, azimuth_count) * (2.0 * pi / azimuth_count)
    return QuadratureRule(3, nodes, weights, exact_degree)


@lru_cache(maxsize=64)
def quadrature(n: int, exact_degree: int) -> QuadratureRule:
    """
    Build a quadrature rule on S^{n-1}.

    Args:
        n: Ambient dimension (2 or 3)
        exact_degree: Polynomial degree integrated exactly

    Returns:
        QuadratureRule whose weights sum to omega_n

    Raises:
        UnsupportedDimensionError: For n outside {2, 3}
        ValueError: If exact_degree is negative
    """
    check_dimension(n)
    if exact_degree < 0:
        raise ValueError(f"exact_degree must be >= 0, got {exact_degree}")
    rule = _circle_rule(exact_degree) if n == 2 else _sphere_rule(exact_degree)
    rule.nodes.setflags(write=False)
    rule.weights.setflags(write=False)
    return rule

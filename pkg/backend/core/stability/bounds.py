"""
Explicit stability bounds.

The uniform-approximation bound for the projection,

    |Pi_k f - f|_inf <= k^((eps-1)/2) L(f) + 2 omega_n E_nk exp(-k^eps / 4) |f|_inf,

turns closeness of harmonic intrinsic volumes up to degree s_o into closeness of
surface area measures in the Dudley metric. For K, L in a ball of radius R with
sqrt(omega_n m_{s_o}) |h(K) - h(L)| <= delta,

    d_D(S(K), S(L)) <= 2 R^(n-1) omega_n (s_o^((eps-1)/2)
                       + 2 omega_n E_{n s_o} exp(-s_o^eps / 4)) + delta.

The constant in the general statement is not explicit; the expression above is
the one the argument produces and is what every check here uses.
"""

import logging
from dataclasses import dataclass
from math import exp, sqrt
from typing import Callable, Optional, Tuple, Union

import numpy as np

from core.bodies.grids import direction_grid
from core.bodies.polytope import Polytope
from core.exceptions import BoundViolationError
from core.harmonics.projection import project
from core.harmonics.quadrature import quadrature
from core.harmonics.special import projection_constants, sphere_area, total_dim
from core.measures.dudley import dudley
from core.models import DiscreteMeasure
from core.tensors.bijection import harmonic_vector

logger = logging.getLogger(__name__)

DEFAULT_EPS = 0.5
# Slack for the quadrature error in the measured sup norm
MEASUREMENT_SLACK = 1e-9

BodyOrMeasure = Union[Polytope, DiscreteMeasure]


def _check_eps(eps: float) -> None:
    if not 0 < eps < 1:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")


def projection_bound(dim: int, k: int, eps: float, lipschitz: float, sup_norm: float) -> float:
    """Right-hand side of the uniform bound on |Pi_k f - f|_inf"""
    _check_eps(eps)
    normalizer, _ = projection_constants(dim, k)
    return (k ** ((eps - 1.0) / 2.0) * lipschitz
            + 2.0 * sphere_area(dim) * normalizer * exp(-0.25 * k ** eps) * sup_norm)


def projection_bound_check(f: Callable[[np.ndarray], np.ndarray], lipschitz: float,
                           sup_norm: float, k: int, dim: int = 3,
                           eps: float = DEFAULT_EPS,
                           exact_degree: Optional[int] = None,
                           level: int = 3) -> Tuple[float, float]:
    """
    Measure |Pi_k f - f|_inf on a direction grid and compare with the bound.

    Args:
        f: Vectorized function on unit vectors, (N, n) -> (N,)
        lipschitz: Lipschitz constant of f on the sphere
        sup_norm: sup |f|
        k: Projection degree
        dim: Ambient dimension
        eps: Exponent in (0, 1)
        exact_degree: Quadrature exactness (defaults to max(4k, 64), at least 2k)
        level: Direction grid level for the sup

    Returns:
        (measured, bound)

    Raises:
        QuadratureExactnessError: If exact_degree < 2k
        BoundViolationError: If the measured error exceeds the bound
    """
    rule = quadrature(dim, max(4 * k, 64) if exact_degree is None else exact_degree)
    points = direction_grid(dim, level)
    projected = project(f(rule.nodes), rule, k, points=points)
    measured = float(np.max(np.abs(projected - f(points))))
    bound = projection_bound(dim, k, eps, lipschitz, sup_norm)
    logger.debug("Projection k=%d: measured %.4e, bound %.4e", k, measured, bound)
    if measured > bound + MEASUREMENT_SLACK:
        raise BoundViolationError(measured, bound, f"Projection bound at k={k}")
    return measured, bound


def explicit_noise_bound(dim: int, radius: float, max_degree: int,
                         eps: float = DEFAULT_EPS, delta: float = 0.0) -> float:
    """Dudley distance bound for bodies in a radius-R ball with harmonic gap delta"""
    _check_eps(eps)
    if radius <= 0:
        raise ValueError(f"radius must be positive, got {radius}")
    if delta < 0:
        raise ValueError(f"delta must be >= 0, got {delta}")
    if max_degree < 1:
        raise ValueError(f"max_degree must be >= 1, got {max_degree}")
    omega = sphere_area(dim)
    normalizer, _ = projection_constants(dim, max_degree)
    inner = (max_degree ** ((eps - 1.0) / 2.0)
             + 2.0 * omega * normalizer * exp(-0.25 * max_degree ** eps))
    return 2.0 * radius ** (dim - 1) * omega * inner + delta


@dataclass
class StabilityBound:
    """Parameters and value of the explicit Dudley bound"""

    dim: int
    max_degree: int
    eps: float
    radius: float
    delta: float
    value: float

    @classmethod
    def compute(cls, dim: int, radius: float, max_degree: int,
                eps: float = DEFAULT_EPS, delta: float = 0.0) -> 'StabilityBound':
        value = explicit_noise_bound(dim, radius, max_degree, eps, delta)
        return cls(dim, max_degree, eps, radius, delta, value)


@dataclass
class DudleyReport:
    """Dudley distance of two surface area measures next to its bound"""

    dudley: float
    delta: float
    bound: StabilityBound

    @property
    def holds(self) -> bool:
        return self.dudley <= self.bound.value + MEASUREMENT_SLACK


def _as_measure(body: BodyOrMeasure) -> DiscreteMeasure:
    return body.surface_measure() if isinstance(body, Polytope) else body


def _circumradius(body: Polytope) -> float:
    return float(np.max(np.linalg.norm(body.vertices - body.centroid, axis=1)))


def harmonic_delta(mu: DiscreteMeasure, nu: DiscreteMeasure, max_degree: int) -> float:
    """sqrt(omega_n m_{s_o}) |h(mu) - h(nu)|"""
    gap = harmonic_vector(mu, max_degree) - harmonic_vector(nu, max_degree)
    return sqrt(sphere_area(mu.dim) * total_dim(mu.dim, max_degree)) * gap.norm()


def dudley_vs_bound(first: BodyOrMeasure, second: BodyOrMeasure, max_degree: int,
                    eps: float = DEFAULT_EPS, radius: Optional[float] = None) -> DudleyReport:
    """
    Dudley distance of two surface area measures and the explicit bound with
    delta taken from their harmonic gap up to degree s_o.

    Args:
        first, second: Polytopes or discrete surface area measures
        max_degree: s_o
        eps: Exponent in (0, 1)
        radius: R with both bodies in translates of R B^n; computed from the
            vertices when both inputs are polytopes

    Raises:
        ValueError: If radius is missing for measure inputs
        BoundViolationError: If the Dudley distance exceeds the bound
    """
    if radius is None:
        if not (isinstance(first, Polytope) and isinstance(second, Polytope)):
            raise ValueError("radius is required unless both inputs are polytopes")
        radius = max(_circumradius(first), _circumradius(second))
    mu, nu = _as_measure(first), _as_measure(second)
    delta = harmonic_delta(mu, nu, max_degree)
    distance = dudley(mu, nu)
    report = DudleyReport(distance, delta,
                          StabilityBound.compute(mu.dim, radius, max_degree, eps, delta))
    logger.debug("Dudley %.4e vs bound %.4e (delta %.3e)", distance, report.bound.value, delta)
    if not report.holds:
        raise BoundViolationError(distance, report.bound.value, "Dudley bound")
    return report

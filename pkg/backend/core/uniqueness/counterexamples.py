"""
Pairs of bodies that share surface tensors up to a given rank.

In the plane, the regular m-gon with normals at angles 2 pi j / m and edge
lengths 2 pi / m has the moments of the uniform measure on the circle up to
order m - 1: sum_j cos(k 2 pi j / m) vanishes for 0 < k < m and equals m for
k = m. Lifting both perimeter measures to R^3 through

    u -> (sqrt(1 - alpha^2) u, alpha),    plus  alpha S delta_{-e_n},

keeps them surface area measures and keeps the agreement of low moments, so
a polytope with m facets and a non-polytope agree up to rank m - n + 1.
"""

import logging
from math import sqrt
from typing import Optional, Tuple

import numpy as np
import pandas as pd

from core.bodies.polytope import Polytope
from core.bodies.reference import regular_polygon
from core.exceptions import QuadratureExactnessError, ShapeTensorError
from core.harmonics.quadrature import quadrature
from core.measures.classify import first_moment
from core.models import DiscreteMeasure
from core.tensors.bijection import harmonic_vector

logger = logging.getLogger(__name__)

DEFAULT_LIFT = 0.5
CLOSEDNESS_TOLERANCE = 1e-10


def disc_measure(exact_degree: int) -> DiscreteMeasure:
    """Perimeter measure of the unit disc (sigma on S^1) as quadrature atoms"""
    rule = quadrature(2, exact_degree)
    if rule.exact_degree < exact_degree:
        raise QuadratureExactnessError(exact_degree, rule.exact_degree)
    return DiscreteMeasure(rule.nodes.copy(), rule.weights.copy())


def polygon_disc_pair(sides: int) -> Tuple[Polytope, DiscreteMeasure]:
    """
    Regular polygon and discretized unit disc with equal surface tensors up to
    rank sides - 1.

    The disc measure is exact for harmonics up to degree 2 * sides.
    """
    if sides < 3:
        raise ValueError(f"sides must be >= 3, got {sides}")
    return regular_polygon(sides), disc_measure(2 * sides)


def cone_lift(measure: DiscreteMeasure, alpha: float = DEFAULT_LIFT,
              total: Optional[float] = None) -> DiscreteMeasure:
    """
    Lift a surface area measure on S^{n-2} to one on S^{n-1}.

    Args:
        measure: Measure with vanishing first moments
        alpha: Height of the lifted atoms, 0 < alpha < 1
        total: Total mass S of the measure (defaults to its mass)

    Returns:
        Pushforward under u -> (sqrt(1 - alpha^2) u, alpha) plus
        alpha S delta_{-e_n}; total mass S (1 + alpha)

    Raises:
        ValueError: If alpha is out of range or the first moments do not vanish
    """
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    mass = measure.total_mass if total is None else float(total)
    if np.linalg.norm(first_moment(measure)) > CLOSEDNESS_TOLERANCE * max(mass, 1.0):
        raise ValueError("Only measures with vanishing first moments can be lifted")

    dim = measure.dim + 1
    lifted = np.column_stack([
        sqrt(1.0 - alpha ** 2) * measure.atoms,
        np.full(measure.size, alpha),
    ])
    apex = np.zeros((1, dim))
    apex[0, -1] = -1.0
    result = DiscreteMeasure(
        np.vstack([lifted, apex]),
        np.concatenate([measure.weights, [alpha * mass]]),
    )
    if np.linalg.norm(first_moment(result)) > CLOSEDNESS_TOLERANCE * max(mass, 1.0):
        raise ShapeTensorError("Lifted measure does not have vanishing first moments")
    return result


def counterexample_pair(dim: int, facets: int,
                        alpha: float = DEFAULT_LIFT) -> Tuple[DiscreteMeasure, DiscreteMeasure]:
    """
    Surface area measures of a polytope with `facets` facets and of a body that
    is no such polytope, agreeing in all moments up to order facets - dim + 1.

    Raises:
        ValueError: For dim outside {2, 3} or facets < dim + 1
    """
    if dim not in (2, 3):
        raise ValueError(f"Counterexamples are built for n = 2, 3, got {dim}")
    if facets < dim + 1:
        raise ValueError(f"Need at least {dim + 1} facets in R^{dim}, got {facets}")
    if dim == 2:
        polygon, disc = polygon_disc_pair(facets)
        return polygon.surface_measure(), disc
    polygon_measure, disc = counterexample_pair(2, facets - 1)
    logger.debug("Lifting the %d-gon/disc pair with alpha=%g", facets - 1, alpha)
    return cone_lift(polygon_measure, alpha), cone_lift(disc, alpha)


def agreement_table(mu: DiscreteMeasure, nu: DiscreteMeasure, max_degree: int,
                    tol: float = 1e-9) -> pd.DataFrame:
    """
    Per-degree largest difference of the harmonic vectors of two measures.

    Returns:
        DataFrame with columns degree, max_abs_diff, agree
    """
    if mu.dim != nu.dim:
        raise ValueError(f"Measures live in R^{mu.dim} and R^{nu.dim}")
    gap = harmonic_vector(mu, max_degree) - harmonic_vector(nu, max_degree)
    rows = []
    for k in range(max_degree + 1):
        diff = float(np.max(np.abs(gap.block(k))))
        rows.append({'degree': k, 'max_abs_diff': diff, 'agree': bool(diff <= tol)})
    return pd.DataFrame(rows, columns=['degree', 'max_abs_diff', 'agree'])


def agreement_rank(table: pd.DataFrame) -> int:
    """Largest degree up to which all blocks agree (-1 if degree 0 differs)"""
    disagree = table.loc[~table['agree'], 'degree']
    if disagree.empty:
        return int(table['degree'].max())
    return int(disagree.min()) - 1

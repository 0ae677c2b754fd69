"""
Dudley (bounded Lipschitz) distance between discrete measures.

    d(mu, nu) = sup { integral f d(mu - nu) : ||f||_inf + Lip(f) <= 1 }

For measures supported on finitely many points x_1..x_N only the values
f_i = f(x_i) enter. Any assignment with |f_i| <= s and
|f_i - f_j| <= t |x_i - x_j| extends to the whole sphere with the same bounds
(McShane extension, then clipping to [-s, s]), so the supremum equals the
optimum of the finite linear program

    maximize sum_i d_i f_i
    subject to |f_i| <= s, f_i - f_j <= t |x_i - x_j|, s + t <= 1, s, t >= 0

with d_i = (mu - nu)({x_i}). Points where d_i = 0 can be dropped for the same
reason.
"""

import logging
from typing import Tuple

import numpy as np
from scipy import sparse
from scipy.optimize import linprog

from core.exceptions import LinearProgramError
from core.models import DiscreteMeasure

logger = logging.getLogger(__name__)

MERGE_DECIMALS = 12


def _signed_support(mu: DiscreteMeasure, nu: DiscreteMeasure) -> Tuple[np.ndarray, np.ndarray]:
    """Distinct points of both supports with the mass of mu - nu on each"""
    points = np.vstack([mu.atoms, nu.atoms])
    signed = np.concatenate([mu.weights, -nu.weights])
    if len(points) == 0:
        return points, signed
    _, first, inverse = np.unique(
        np.round(points, MERGE_DECIMALS), axis=0, return_index=True, return_inverse=True
    )
    inverse = np.asarray(inverse).reshape(-1)
    difference = np.zeros(len(first))
    np.add.at(difference, inverse, signed)
    scale = max(mu.total_mass, nu.total_mass, 1.0)
    keep = np.abs(difference) > 1e-15 * scale
    return points[first][keep], difference[keep]


def _constraints(points: np.ndarray) -> Tuple[sparse.csr_matrix, np.ndarray]:
    """Rows of the Dudley LP over variables (f_1..f_N, s, t)"""
    count = len(points)
    s_col, t_col = count, count + 1
    index = np.arange(count)

    # f_i - s <= 0 and -f_i - s <= 0
    bound_rows = np.repeat(np.arange(2 * count), 2)
    bound_cols = np.column_stack([index, np.full(count, s_col)] * 2).reshape(-1)
    bound_vals = np.tile([1.0, -1.0, -1.0, -1.0], count)

    # f_i - f_j - t |x_i - x_j| <= 0 in both directions
    first, second = np.triu_indices(count, k=1)
    distances = np.linalg.norm(points[first] - points[second], axis=1)
    pairs = len(first)
    start = 2 * count
    pair_rows = start + np.repeat(np.arange(2 * pairs), 3)
    t_cols = np.full(pairs, t_col)
    pair_cols = np.column_stack([first, second, t_cols, second, first, t_cols]).reshape(-1)
    ones = np.ones(pairs)
    pair_vals = np.column_stack([ones, -ones, -distances, ones, -ones, -distances]).reshape(-1)

    # s + t <= 1
    last = start + 2 * pairs
    rows = np.concatenate([bound_rows, pair_rows, [last, last]])
    cols = np.concatenate([bound_cols, pair_cols, [s_col, t_col]])
    vals = np.concatenate([bound_vals, pair_vals, [1.0, 1.0]])

    matrix = sparse.csr_matrix((vals, (rows, cols)), shape=(last + 1, count + 2))
    bounds = np.zeros(last + 1)
    bounds[-1] = 1.0
    return matrix, bounds


def dudley(mu: DiscreteMeasure, nu: DiscreteMeasure) -> float:
    """
    Exact Dudley distance between two discrete measures.

    Args:
        mu: First measure
        nu: Second measure on the same sphere

    Returns:
        The bounded Lipschitz distance

    Raises:
        ValueError: If the measures live on spheres of different dimension
        LinearProgramError: If the LP solver fails
    """
    if mu.dim != nu.dim:
        raise ValueError(f"Measures on S^{mu.dim - 1} and S^{nu.dim - 1}")
    points, difference = _signed_support(mu, nu)
    if len(points) == 0:
        return 0.0

    matrix, bounds = _constraints(points)
    count = len(points)
    objective = np.concatenate([-difference, [0.0, 0.0]])
    variable_bounds = [(None, None)] * count + [(0.0, None), (0.0, None)]

    result = linprog(objective, A_ub=matrix, b_ub=bounds, bounds=variable_bounds,
                     method="highs")
    if result.status != 0:
        raise LinearProgramError(f"Dudley LP failed: {result.message}")

    value = max(-float(result.fun), 0.0)
    logger.debug("Dudley LP on %d points: %.6e", count, value)
    return value

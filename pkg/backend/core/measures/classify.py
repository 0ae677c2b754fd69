"""
Second-moment classification of discrete measures.

A finite measure mu on S^{n-1} with vanishing first moments is a surface area
measure of
    - a full-dimensional body iff M(mu) is positive definite,
    - a lower-dimensional body iff mu = a (delta_u + delta_{-u}),
and of no convex body otherwise.
"""

import numpy as np

from core.models import DiscreteMeasure, MeasureClass, MeasureTag, MomentMatrix

DEFAULT_TOL_ABS = 1e-12
DEFAULT_TOL_REL = 1e-8


def first_moment(measure: DiscreteMeasure) -> np.ndarray:
    """Weighted vector sum of the atoms"""
    if measure.size == 0:
        return np.zeros(measure.dim)
    return measure.weights @ measure.atoms


def moment_matrix(measure: DiscreteMeasure) -> MomentMatrix:
    """
    Matrix of second moments m_ij = sum w u_i u_j.

    z^T M z = integral <z, u>^2 dmu, so M is positive semidefinite and its trace
    is the total mass.
    """
    if measure.size == 0:
        matrix = np.zeros((measure.dim, measure.dim))
    else:
        matrix = (measure.atoms * measure.weights[:, None]).T @ measure.atoms
        matrix = 0.5 * (matrix + matrix.T)
    eigenvalues, eigenvectors = np.linalg.eigh(matrix)
    return MomentMatrix(matrix, eigenvalues, eigenvectors)


def _oriented(axis: np.ndarray) -> np.ndarray:
    """Flip so the first non-negligible coordinate is positive"""
    for value in axis:
        if abs(value) > 1e-12:
            return axis if value > 0 else -axis
    return axis


def classify(
    measure: DiscreteMeasure,
    tol_abs: float = DEFAULT_TOL_ABS,
    tol_rel: float = DEFAULT_TOL_REL,
) -> MeasureClass:
    """
    Decide which kind of body (if any) a measure is the surface area measure of.

    Rules, in order:
        Zero            mass <= tol_abs
        NotSurfaceArea  |first moment| > tol_rel * mass
        FullDim         lambda_min(M) > tol_rel * mass
        RankOne         lambda_{n-1} <= tol_rel * mass < lambda_max
        NotSurfaceArea  otherwise

    For RankOne the surface area of the flat body is mass / 2 and the axis is
    the top eigenvector, sign-normalized.

    Args:
        measure: Discrete measure
        tol_abs: Absolute mass threshold for the zero measure
        tol_rel: Tolerances relative to the total mass

    Returns:
        MeasureClass
    """
    mass = measure.total_mass
    if mass <= tol_abs:
        return MeasureClass(MeasureTag.ZERO, mass)

    threshold = tol_rel * mass
    if np.linalg.norm(first_moment(measure)) > threshold:
        return MeasureClass(MeasureTag.NOT_SURFACE_AREA, mass)

    moments = moment_matrix(measure)
    eigenvalues = moments.eigenvalues
    if eigenvalues[0] > threshold:
        return MeasureClass(MeasureTag.FULL_DIM, mass)
    if eigenvalues[-2] <= threshold < eigenvalues[-1]:
        axis = _oriented(moments.eigenvectors[:, -1].copy())
        return MeasureClass(MeasureTag.RANK_ONE, mass, axis=axis, surface_area=mass / 2.0)
    return MeasureClass(MeasureTag.NOT_SURFACE_AREA, mass)

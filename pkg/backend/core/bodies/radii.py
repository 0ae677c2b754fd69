"""
Inclusion radii and shape axes read off the rank-2 surface tensor.

For a full-dimensional body K with centroid at the origin, surface area S and
smallest eigenvalue lambda of the coefficient matrix of Phi^2:

    R = S / (4 pi lambda) * (S / omega_n)^(1 / (n - 1))
    r = 2 pi lambda / ((n + 1) (4 R)^(n - 2))

and r B^n is contained in K, which is contained in R B^n.
"""

from math import pi
from typing import Tuple

import numpy as np

from core.exceptions import NotFullDimensionalError
from core.harmonics.special import sphere_area
from core.models import SymTensor
from core.tensors.moments import surface_tensor_factor


def coefficient_matrix(phi2: SymTensor) -> np.ndarray:
    """{Phi^2(e_i, e_j)}, undoing the scaling of a raw moment tensor"""
    if phi2.rank != 2:
        raise ValueError(f"Expected a rank-2 tensor, got rank {phi2.rank}")
    matrix = phi2.matrix()
    if phi2.scaled:
        matrix = matrix / surface_tensor_factor(2)
    return matrix


def min_eigenvalue(phi2: SymTensor) -> float:
    return float(np.linalg.eigvalsh(coefficient_matrix(phi2))[0])


def inclusion_radii(phi2: SymTensor, surface_area: float) -> Tuple[float, float]:
    """
    Radii r <= R with r B^n inside K - c(K) inside R B^n.

    Args:
        phi2: Rank-2 surface tensor of K (scaled or unscaled)
        surface_area: S(K)

    Returns:
        (r, R)

    Raises:
        NotFullDimensionalError: If Phi^2 is not positive definite
    """
    lam = min_eigenvalue(phi2)
    if lam <= 0 or surface_area <= 0:
        raise NotFullDimensionalError(
            f"Phi^2 is not positive definite (lambda_min = {lam:.3e})"
        )
    n = phi2.dim
    outer = surface_area / (4.0 * pi * lam) * (surface_area / sphere_area(n)) ** (1.0 / (n - 1))
    inner = 2.0 * pi * lam / ((n + 1) * (4.0 * outer) ** (n - 2))
    return inner, outer


def noise_robust_radii(r: float, R: float) -> Tuple[float, float]:
    """Radii (r / 2, 2 R) that hold for every reconstruction once noise is small"""
    return r / 2.0, 2.0 * R


def elongation_axis(phi2: SymTensor) -> np.ndarray:
    """
    Long axis of a body: the eigenvector of the smallest eigenvalue of Phi^2.

    Little boundary area faces the long axis, so Phi^2(v, v) is smallest there.
    The sign is fixed so the largest coordinate in absolute value is positive.
    """
    _, vectors = np.linalg.eigh(coefficient_matrix(phi2))
    axis = vectors[:, 0]
    return axis if axis[np.argmax(np.abs(axis))] > 0 else -axis

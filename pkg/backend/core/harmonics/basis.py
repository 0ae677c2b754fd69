"""
Orthonormal spherical-harmonic bases for n = 2 and n = 3.

Functions are indexed by (k, j) with degree k and 1 <= j <= N(n, k); vectors
of harmonic values are ordered k ascending, then j ascending.

n = 2 uses the angle theta = atan2(u_2, u_1):
    H_{2,0,1} = 1/sqrt(2 pi), H_{2,k,1} = cos(k theta)/sqrt(pi),
    H_{2,k,2} = sin(k theta)/sqrt(pi).

n = 3 uses u = (sin t sin p, sin t cos p, cos t):
    H_{3,k,2j+1} = alpha_kj sin^j(t) C_{k-j}^{j+1/2}(cos t) cos(j p),  0 <= j <= k
    H_{3,k,2j}   = alpha_kj sin^j(t) C_{k-j}^{j+1/2}(cos t) sin(j p),  1 <= j <= k
"""

import logging
from functools import lru_cache
from math import exp, log, pi, sqrt
from typing import Dict, List, Tuple

import numpy as np

from core.exceptions import IndexOutOfRangeError
from core.harmonics.special import (
    basis_dim,
    check_dimension,
    degree_offset,
    gegenbauer,
    gegenbauer_log_norm,
)
from core.harmonics.quadrature import quadrature

logger = logging.getLogger(__name__)

UNIT_TOLERANCE = 1e-9


def _as_points(u: np.ndarray, n: int) -> np.ndarray:
    points = np.atleast_2d(np.asarray(u, dtype=float))
    if points.shape[1] != n:
        raise ValueError(f"Expected points in R^{n}, got shape {points.shape}")
    return points


def _split_index(k: int, j: int) -> Tuple[int, bool]:
    """Map the n = 3 index j to (order, uses_cosine)"""
    if j % 2 == 1:
        return (j - 1) // 2, True
    return j // 2, False


@lru_cache(maxsize=None)
def normalizer(n: int, k: int, j: int) -> float:
    """Closed-form constant giving H_{nkj} unit L2 norm on the sphere"""
    check_dimension(n)
    if n == 2:
        return 1.0 / sqrt(2.0 * pi) if k == 0 else 1.0 / sqrt(pi)
    order, _ = _split_index(k, j)
    azimuthal = 2.0 * pi if order == 0 else pi
    log_norm = log(azimuthal) + gegenbauer_log_norm(k - order, order + 0.5)
    return exp(-0.5 * log_norm)


def _check_index(n: int, k: int, j: int) -> None:
    if k < 0 or not 1 <= j <= basis_dim(n, k):
        raise IndexOutOfRangeError(
            f"Harmonic index (k={k}, j={j}) out of range for n={n}"
        )


def _evaluate(n: int, k: int, j: int, points: np.ndarray, scale: float) -> np.ndarray:
    if n == 2:
        if k == 0:
            return np.full(len(points), scale)
        theta = np.arctan2(points[:, 1], points[:, 0])
        return scale * (np.cos(k * theta) if j == 1 else np.sin(k * theta))

    order, cosine = _split_index(k, j)
    x, y, z = points[:, 0], points[:, 1], np.clip(points[:, 2], -1.0, 1.0)
    sin_t = np.hypot(x, y)
    phi = np.arctan2(x, y)
    radial = sin_t**order * gegenbauer(k - order, order + 0.5, z)
    angular = np.cos(order * phi) if cosine else np.sin(order * phi)
    return scale * radial * angular


def eval_harmonic(n: int, k: int, j: int, u: np.ndarray) -> np.ndarray:
    """
    Evaluate H_{nkj} at one unit vector or an array of them.

    Args:
        n: Ambient dimension (2 or 3)
        k: Degree
        j: Index within the degree, 1 <= j <= N(n, k)
        u: Unit vector of shape (n,) or points of shape (N, n)

    Returns:
        float for a single vector, else array of shape (N,)

    Raises:
        IndexOutOfRangeError: If (k, j) is not a valid index
        ValueError: If a point is not on the unit sphere
    """
    check_dimension(n)
    _check_index(n, k, j)
    single = np.asarray(u).ndim == 1
    points = _as_points(u, n)
    norms = np.linalg.norm(points, axis=1)
    if np.any(np.abs(norms - 1.0) > UNIT_TOLERANCE):
        raise ValueError("Harmonics are evaluated on unit vectors only")
    values = _evaluate(n, k, j, points, normalizer(n, k, j))
    return float(values[0]) if single else values


class HarmonicBasis:
    """
    Orthonormal basis of harmonics up to a maximal degree.

    Construction computes the normalizing constants once; evaluate() returns
    the full design matrix of basis values at a set of points.
    """

    def __init__(self, dim: int, max_degree: int, validate: bool = False):
        """
        Initialize basis.

        Args:
            dim: Ambient dimension n (2 or 3)
            max_degree: Highest degree s_o included
            validate: Check the closed-form normalizers against quadrature and
                      fall back to numeric normalization where they disagree
        """
        check_dimension(dim)
        if max_degree < 0:
            raise ValueError(f"max_degree must be >= 0, got {max_degree}")
        self.dim = dim
        self.max_degree = max_degree
        self.indices: List[Tuple[int, int]] = [
            (k, j)
            for k in range(max_degree + 1)
            for j in range(1, basis_dim(dim, k) + 1)
        ]
        self.normalizers: Dict[Tuple[int, int], float] = {
            (k, j): normalizer(dim, k, j) for k, j in self.indices
        }
        if validate:
            self._validate_normalizers()

    @property
    def size(self) -> int:
        """Number of basis functions, m_{s_o}"""
        return len(self.indices)

    def offset(self, k: int) -> int:
        """Column of the first degree-k function"""
        return degree_offset(self.dim, k)

    def degrees(self) -> np.ndarray:
        """Degree of every column"""
        return np.array([k for k, _ in self.indices])

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        """
        Evaluate all basis functions.

        Args:
            points: Unit vectors, shape (N, n)

        Returns:
            Matrix of shape (N, m_{s_o})
        """
        points = _as_points(points, self.dim)
        values = np.empty((len(points), self.size))
        for col, (k, j) in enumerate(self.indices):
            values[:, col] = _evaluate(self.dim, k, j, points, self.normalizers[(k, j)])
        return values

    def evaluate_degree(self, points: np.ndarray, k: int) -> np.ndarray:
        """Evaluate the N(n, k) functions of degree k, shape (N, N(n, k))"""
        if not 0 <= k <= self.max_degree:
            raise IndexOutOfRangeError(f"Degree {k} outside 0..{self.max_degree}")
        points = _as_points(points, self.dim)
        count = basis_dim(self.dim, k)
        return np.column_stack(
            [
                _evaluate(self.dim, k, j, points, self.normalizers[(k, j)])
                for j in range(1, count + 1)
            ]
        )

    def _validate_normalizers(self) -> None:
        rule = quadrature(self.dim, 2 * self.max_degree)
        for k, j in self.indices:
            raw = _evaluate(self.dim, k, j, rule.nodes, 1.0)
            numeric = 1.0 / sqrt(float(rule.weights @ raw**2))
            closed = self.normalizers[(k, j)]
            if abs(numeric - closed) > 1e-10 * max(1.0, abs(closed)):
                logger.warning(
                    "Normalizer (%d, %d) closed form %.15g differs from quadrature "
                    "%.15g; using quadrature value", k, j, closed, numeric
                )
                self.normalizers[(k, j)] = numeric

    def __repr__(self) -> str:
        return f"HarmonicBasis(dim={self.dim}, max_degree={self.max_degree}, size={self.size})"


@lru_cache(maxsize=32)
def harmonic_basis(dim: int, max_degree: int) -> HarmonicBasis:
    """Shared basis instance per (dim, max_degree)"""
    return HarmonicBasis(dim, max_degree)


__all__ = [
    "HarmonicBasis",
    "eval_harmonic",
    "harmonic_basis",
    "normalizer",
]

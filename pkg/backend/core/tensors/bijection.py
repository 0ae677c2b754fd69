"""
The invertible linear map between moment vectors and harmonic vectors.

Restricted to the sphere, the monomials of degree s span exactly the harmonics of
degree k <= s with k = s (mod 2). Each H_{nkj} is therefore expanded in the
rank-s_o monomials (k of the parity of s_o) or the rank-(s_o - 1) monomials
(the other parity). The expansion is found by weighted least squares on a
quadrature rule exact to degree 2 s_o, where the monomial Gram matrix is
nonsingular and the fit is exact up to rounding.

With F the resulting matrix, psi = F @ moments for every measure.
"""

import logging
from functools import lru_cache

import numpy as np

from core.exceptions import BasisConstructionError
from core.harmonics.basis import harmonic_basis
from core.harmonics.quadrature import quadrature
from core.harmonics.special import check_dimension
from core.models import DiscreteMeasure, HarmonicVector, TensorSet, multi_indices
from core.tensors.moments import moment_scales, tensor_set

logger = logging.getLogger(__name__)


class HarmonicMap:
    """
    Matrix F of the moment-to-harmonic bijection for fixed (n, s_o).

    Columns follow the phi ordering (rank s_o - 1 block, then rank s_o, each
    lexicographic); rows follow the harmonic ordering (k ascending, j ascending).
    """

    MAX_CONDITION = 1e12

    def __init__(self, dim: int, max_degree: int):
        check_dimension(dim)
        if max_degree < 0:
            raise ValueError(f"max_degree must be >= 0, got {max_degree}")
        self.dim = dim
        self.max_degree = max_degree
        self.ranks = [s for s in (max_degree - 1, max_degree) if s >= 0]
        self.keys = [key for s in self.ranks for key in multi_indices(dim, s)]
        self.exponents = np.array(
            [np.bincount(np.array(key, dtype=int), minlength=dim) for key in self.keys]
        ).reshape(len(self.keys), dim)
        self.scales = moment_scales(dim, max_degree)

        self.matrix = self._build_matrix()
        self.condition = float(np.linalg.cond(self.matrix))
        if not np.isfinite(self.condition) or self.condition > self.MAX_CONDITION:
            raise BasisConstructionError(
                f"Moment-to-harmonic matrix for n={dim}, s_o={max_degree} has "
                f"condition number {self.condition:.3e}"
            )
        self.inverse = np.linalg.inv(self.matrix)
        logger.debug(
            "Built harmonic map n=%d s_o=%d size=%d cond=%.3e",
            dim, max_degree, self.size, self.condition
        )

    @property
    def size(self) -> int:
        return len(self.keys)

    def _build_matrix(self) -> np.ndarray:
        basis = harmonic_basis(self.dim, self.max_degree)
        rule = quadrature(self.dim, 2 * self.max_degree)
        sqrt_w = np.sqrt(rule.weights)[:, None]
        harmonics = basis.evaluate(rule.nodes)
        monomials = self.monomials(rule.nodes)
        degrees = basis.degrees()
        ranks = self.exponents.sum(axis=1)

        matrix = np.zeros((basis.size, self.size))
        for rank in self.ranks:
            rows = np.flatnonzero(degrees % 2 == rank % 2)
            cols = np.flatnonzero(ranks == rank)
            coeffs, *_ = np.linalg.lstsq(
                sqrt_w * monomials[:, cols], sqrt_w * harmonics[:, rows], rcond=None
            )
            fit_error = np.max(np.abs(monomials[:, cols] @ coeffs - harmonics[:, rows]))
            if fit_error > 1e-8:
                raise BasisConstructionError(
                    f"Harmonics of parity {rank % 2} not spanned by rank-{rank} "
                    f"monomials (max error {fit_error:.3e})"
                )
            matrix[np.ix_(rows, cols)] = coeffs.T
        return matrix

    # ============= MONOMIALS =============

    def monomials(self, points: np.ndarray) -> np.ndarray:
        """Values u^alpha of every phi monomial, shape (N, m_{s_o})"""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        return np.prod(points[:, None, :] ** self.exponents[None, :, :], axis=2)

    def monomial_jacobian(self, points: np.ndarray) -> np.ndarray:
        """
        Partial derivatives of the monomials with respect to the coordinates.

        Returns:
            Array of shape (N, m_{s_o}, n)
        """
        points = np.atleast_2d(np.asarray(points, dtype=float))
        powers = points[:, None, :] ** self.exponents[None, :, :]
        jacobian = np.empty(powers.shape)
        for i in range(self.dim):
            lowered = np.maximum(self.exponents[:, i] - 1, 0)
            factor = self.exponents[:, i] * points[:, None, i] ** lowered
            others = np.delete(powers, i, axis=2).prod(axis=2)
            jacobian[:, :, i] = factor * others
        return jacobian

    def design(self, points: np.ndarray) -> np.ndarray:
        """Harmonic values at points through the map, Mon(points) @ F^T"""
        return self.monomials(points) @ self.matrix.T

    # ============= CONVERSIONS =============

    def to_harmonic(self, moments: np.ndarray) -> np.ndarray:
        return self.matrix @ np.asarray(moments, dtype=float)

    def to_moments(self, harmonics: np.ndarray) -> np.ndarray:
        return self.inverse @ np.asarray(harmonics, dtype=float)

    def __repr__(self) -> str:
        return (f"HarmonicMap(dim={self.dim}, max_degree={self.max_degree}, "
                f"cond={self.condition:.2e})")


@lru_cache(maxsize=32)
def harmonic_map(dim: int, max_degree: int) -> HarmonicMap:
    """Shared map per (dim, s_o)"""
    return HarmonicMap(dim, max_degree)


def _moment_values(tensors: TensorSet) -> np.ndarray:
    values = tensors.vector()
    if tensors.scaled:
        return values
    return values * moment_scales(tensors.dim, tensors.max_rank)


def moment_to_harmonic(tensors: TensorSet) -> HarmonicVector:
    """
    Harmonic intrinsic volumes from surface tensors of ranks s_o - 1 and s_o.

    Scaled sets are read as raw moments; unscaled sets are multiplied back by
    s! omega_{s+1} first.
    """
    fmap = harmonic_map(tensors.dim, tensors.max_rank)
    return HarmonicVector(tensors.dim, tensors.max_rank, fmap.to_harmonic(_moment_values(tensors)))


def harmonic_to_moment(vector: HarmonicVector, scaled: bool = False) -> TensorSet:
    """
    Inverse of moment_to_harmonic.

    Args:
        vector: Harmonic vector up to degree s_o
        scaled: Return raw moment tensors instead of surface tensors

    Returns:
        TensorSet with ranks s_o - 1 and s_o
    """
    fmap = harmonic_map(vector.dim, vector.max_degree)
    moments = fmap.to_moments(vector.values)
    if not scaled:
        moments = moments / fmap.scales
    return TensorSet.from_vector(vector.dim, vector.max_degree, moments, scaled=scaled)


def harmonic_vector(measure: DiscreteMeasure, max_degree: int) -> HarmonicVector:
    """Harmonic vector of a discrete measure by direct atom sums of H_{nkj}"""
    basis = harmonic_basis(measure.dim, max_degree)
    if measure.size == 0:
        return HarmonicVector(measure.dim, max_degree, np.zeros(basis.size))
    return HarmonicVector(
        measure.dim, max_degree, basis.evaluate(measure.atoms).T @ measure.weights
    )


def moment_objective(measure: DiscreteMeasure, tensors: TensorSet) -> float:
    """
    Squared distance between the tensors of a measure and given tensors.

    Sum over the components of ranks s_o - 1 and s_o, in the scaling of
    `tensors`. Zero exactly when the harmonic objective is zero, since both are
    related by the invertible map F.
    """
    own = tensor_set(measure, tensors.max_rank, scaled=tensors.scaled, min_rank=None)
    return float(np.sum((own.vector() - tensors.vector()) ** 2))


__all__ = [
    "HarmonicMap",
    "harmonic_map",
    "harmonic_to_moment",
    "harmonic_vector",
    "moment_objective",
    "moment_to_harmonic",
]


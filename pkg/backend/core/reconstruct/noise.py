"""
Noise on harmonic intrinsic volumes and the variance schedules under which
least-squares reconstruction is consistent.

Measurements are h(K_0) + eps with independent centered Gaussian entries;
degree-1 entries are known to vanish for every body and carry no noise.
"""

from typing import Optional, Sequence, Union

import numpy as np

from core.harmonics.special import basis_dim, degree_offset, total_dim
from core.models import HarmonicVector

SCHEDULES = ("almost_sure", "probability")
DEFAULT_FRACTIONS = (0.0, 0.05, 0.10)

SeedLike = Union[int, Sequence[int], np.random.SeedSequence, None]


def noise_model(dim: int, max_degree: int,
                sigma: Union[float, Sequence[float]],
                seed: SeedLike = None) -> HarmonicVector:
    """
    Gaussian noise vector for harmonic intrinsic volumes up to degree s_o.

    Args:
        dim: Ambient dimension
        max_degree: s_o
        sigma: Standard deviation, scalar or one value per degree 0..s_o
        seed: Seed for numpy's default generator

    Returns:
        HarmonicVector with zero degree-1 block
    """
    sigmas = np.broadcast_to(np.asarray(sigma, dtype=float), (max_degree + 1,))
    if np.any(sigmas < 0):
        raise ValueError(f"sigma must be >= 0, got {sigma}")
    rng = np.random.default_rng(seed)
    values = rng.standard_normal(total_dim(dim, max_degree))
    per_entry = np.concatenate([np.full(basis_dim(dim, k), sigmas[k])
                                for k in range(max_degree + 1)])
    values *= per_entry
    if max_degree >= 1:
        start = degree_offset(dim, 1)
        values[start:start + basis_dim(dim, 1)] = 0.0
    return HarmonicVector(dim, max_degree, values)


def relative_sigma(harmonics: HarmonicVector,
                   fractions: Sequence[float] = DEFAULT_FRACTIONS) -> list:
    """Standard deviations as fractions of the degree-0 entry"""
    anchor = abs(float(harmonics.values[0]))
    return [float(f) * anchor for f in fractions]


def variance_schedule(dim: int, max_degree: int, eps: float = 0.5,
                      kind: str = "almost_sure") -> float:
    """
    Noise variance sigma^2_{s_o} for which reconstruction is consistent.

    almost_sure: s_o^-(2n - 1 + eps); probability: s_o^-(2n - 2 + eps).
    """
    if not 0 < eps < 1:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    if max_degree < 1:
        raise ValueError(f"max_degree must be >= 1, got {max_degree}")
    if kind == "almost_sure":
        return float(max_degree ** -(2 * dim - 1 + eps))
    if kind == "probability":
        return float(max_degree ** -(2 * dim - 2 + eps))
    raise ValueError(f"Unknown schedule {kind!r}; choose from {SCHEDULES}")


def summability_driver(dim: int, max_degree: int, sigma2: Optional[float] = None,
                       eps: float = 0.5, draws: int = 1000, seed: SeedLike = 0) -> float:
    """
    Monte-Carlo mean of m_{s_o} |eps|^2.

    Its sum over s_o is finite under the almost-sure schedule, which is what
    drives almost-sure consistency.
    """
    if draws < 1:
        raise ValueError(f"draws must be >= 1, got {draws}")
    if sigma2 is None:
        sigma2 = variance_schedule(dim, max_degree, eps)
    if sigma2 < 0:
        raise ValueError(f"sigma2 must be >= 0, got {sigma2}")
    size = total_dim(dim, max_degree)
    seeds = np.random.SeedSequence(seed).spawn(draws)
    sigma = float(np.sqrt(sigma2))
    norms = [noise_model(dim, max_degree, sigma, s).norm() ** 2 for s in seeds]
    return float(size * np.mean(norms))


def convergence_rate(dim: int, max_degree: int, eps: float = 0.5) -> float:
    """Reference rate s_o^-((1 - eps) / (4n)) of the translative Hausdorff error"""
    if not 0 < eps < 1:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    return float(max_degree ** (-(1.0 - eps) / (4.0 * dim)))

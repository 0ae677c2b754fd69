"""
Special functions and dimension counts on the sphere.

Factorials and Gamma values are handled in the log domain so the projection
constants stay finite for degrees in the hundreds.
"""

from math import comb, exp, lgamma, log, pi
from typing import Tuple, Union

import numpy as np
from scipy.special import gammaln

from core.exceptions import UnsupportedDimensionError

SUPPORTED_DIMENSIONS = (2, 3)

ArrayLike = Union[float, np.ndarray]


def check_dimension(n: int) -> None:
    """Raise UnsupportedDimensionError unless n is 2 or 3"""
    if n not in SUPPORTED_DIMENSIONS:
        raise UnsupportedDimensionError(n, SUPPORTED_DIMENSIONS)


def sphere_area(k: int) -> float:
    """
    Surface area of the unit sphere in R^k.

    omega_k = 2 pi^{k/2} / Gamma(k/2), so omega_1 = 2, omega_2 = 2pi,
    omega_3 = 4pi.

    Raises:
        ValueError: If k < 1
    """
    if k < 1:
        raise ValueError(f"sphere_area needs k >= 1, got {k}")
    return exp(log(2.0) + 0.5 * k * log(pi) - lgamma(0.5 * k))


def basis_dim(n: int, k: int) -> int:
    """Number N(n, k) of orthonormal spherical harmonics of degree k on S^{n-1}"""
    check_dimension(n)
    if k < 0:
        raise ValueError(f"Degree must be >= 0, got {k}")
    if n == 2:
        return 1 if k == 0 else 2
    return 2 * k + 1


def total_dim(n: int, s: int) -> int:
    """
    Dimension m_s of harmonics up to degree s.

    Equals C(s+n-2, n-1) + C(s+n-1, n-1), the number of distinct components
    of symmetric tensors of ranks s-1 and s. Returns 0 for s < 0.
    """
    check_dimension(n)
    if s < 0:
        return 0
    return comb(s + n - 2, n - 1) + comb(s + n - 1, n - 1)


def degree_offset(n: int, k: int) -> int:
    """Position of the first degree-k entry in a (k ascending, j ascending) vector"""
    return total_dim(n, k - 1)


def gegenbauer(l: int, lam: float, x: ArrayLike) -> ArrayLike:
    """
    Gegenbauer polynomial C_l^lambda(x) via the three-term recurrence.

    Args:
        l: Degree, l >= 0
        lam: Parameter lambda > 0
        x: Scalar or array of arguments in [-1, 1]

    Returns:
        Values with the shape of x (float for scalar input)
    """
    if l < 0:
        raise ValueError(f"Gegenbauer degree must be >= 0, got {l}")
    if lam <= 0:
        raise ValueError(f"Gegenbauer parameter must be > 0, got {lam}")

    scalar = np.isscalar(x)
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if l == 0:
        return float(prev) if scalar else prev
    curr = 2.0 * lam * x
    for m in range(2, l + 1):
        prev, curr = curr, (2.0 * x * (m + lam - 1.0) * curr - (m + 2.0 * lam - 2.0) * prev) / m
    return float(curr) if scalar else curr


def gegenbauer_log_norm(l: int, lam: float) -> float:
    """
    Log of the weighted L2 norm squared of C_l^lambda on [-1, 1].

    Weight (1 - t^2)^{lambda - 1/2}; norm = pi 2^{1-2lambda} Gamma(l+2lambda)
    / (l! (l+lambda) Gamma(lambda)^2).
    """
    return (
        log(pi)
        + (1.0 - 2.0 * lam) * log(2.0)
        + lgamma(l + 2.0 * lam)
        - lgamma(l + 1.0)
        - log(l + lam)
        - 2.0 * lgamma(lam)
    )


def log_projection_normalizer(n: int, k: int) -> float:
    """log E_nk with E_nk = (k+n-2)! / ((4 pi)^{(n-1)/2} Gamma(k + (n-1)/2))"""
    check_dimension(n)
    return float(
        gammaln(k + n - 1) - 0.5 * (n - 1) * log(4.0 * pi) - gammaln(k + 0.5 * (n - 1))
    )


def projection_constants(n: int, k: int) -> Tuple[float, np.ndarray]:
    """
    Normalizer E_nk and coefficients a_nkj (j = 0..k) of the projection Pi_k.

    a_nkj = k! (k+n-2)! / ((k-j)! (k+n+j-2)!), so a_nk0 = 1 and the sequence
    decreases in j.

    Args:
        n: Ambient dimension (2 or 3)
        k: Projection degree, k >= 1

    Returns:
        (E_nk, array of a_nkj for j = 0..k)
    """
    check_dimension(n)
    if k < 1:
        raise ValueError(f"Projection degree must be >= 1, got {k}")
    j = np.arange(k + 1)
    log_a = (
        gammaln(k + 1)
        + gammaln(k + n - 1)
        - gammaln(k - j + 1)
        - gammaln(k + n + j - 1)
    )
    return exp(log_projection_normalizer(n, k)), np.exp(log_a)

"""
The sphere-convolution projection Pi_k.

    (Pi_k f)(u) = E_nk * integral ((1 + <u, v>) / 2)^k f(v) dsigma(v)
                = sum_{j=0}^{k} a_nkj (P_nj f)(u)

where P_nj is the orthogonal projection onto harmonics of degree j. Both forms
are implemented; on a quadrature grid they agree to rounding because the kernel
expands exactly in the harmonics of degree <= k.
"""

from typing import Optional

import numpy as np

from core.exceptions import QuadratureExactnessError
from core.harmonics.basis import HarmonicBasis
from core.harmonics.quadrature import QuadratureRule
from core.harmonics.special import projection_constants

CHUNK_ROWS = 512


def _check_rule(rule: QuadratureRule, k: int) -> None:
    if rule.exact_degree < 2 * k:
        raise QuadratureExactnessError(2 * k, rule.exact_degree)


def _kernel_projection(
    values: np.ndarray, rule: QuadratureRule, k: int, points: np.ndarray
) -> np.ndarray:
    normalizer, _ = projection_constants(rule.dim, k)
    weighted = rule.weights * values
    out = np.empty(len(points))
    for start in range(0, len(points), CHUNK_ROWS):
        block = points[start:start + CHUNK_ROWS]
        cosines = np.clip(block @ rule.nodes.T, -1.0, 1.0)
        kernel = ((1.0 + cosines) * 0.5) ** k
        out[start:start + CHUNK_ROWS] = normalizer * (kernel @ weighted)
    return out


def _harmonic_projection(
    values: np.ndarray, rule: QuadratureRule, k: int, points: np.ndarray
) -> np.ndarray:
    basis = HarmonicBasis(rule.dim, k)
    _, coefficients = projection_constants(rule.dim, k)
    at_nodes = basis.evaluate(rule.nodes)
    moments = at_nodes.T @ (rule.weights * values)
    scaled = coefficients[basis.degrees()] * moments
    return basis.evaluate(points) @ scaled


def project(
    values: np.ndarray,
    rule: QuadratureRule,
    k: int,
    method: str = "kernel",
    points: Optional[np.ndarray] = None,
) -> np.ndarray:
    """
    Apply Pi_k to a function sampled on the nodes of a quadrature rule.

    Args:
        values: f sampled at rule.nodes
        rule: Quadrature rule exact to degree >= 2k
        k: Projection degree (>= 1)
        method: "kernel" or "harmonic"
        points: Where to evaluate Pi_k f (defaults to the rule's nodes)

    Returns:
        Values of Pi_k f at the evaluation points

    Raises:
        QuadratureExactnessError: If the rule is not exact to degree 2k
        ValueError: For an unknown method or mismatched sample count
    """
    _check_rule(rule, k)
    values = np.asarray(values, dtype=float)
    if values.shape != (rule.size,):
        raise ValueError(
            f"Expected {rule.size} samples on the quadrature nodes, got {values.shape}"
        )
    targets = rule.nodes if points is None else np.atleast_2d(points)

    if method == "kernel":
        return _kernel_projection(values, rule, k, targets)
    if method == "harmonic":
        return _harmonic_projection(values, rule, k, targets)
    raise ValueError(f"Unknown projection method: {method}")

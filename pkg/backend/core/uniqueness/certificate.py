"""
Certificate polynomials for uniqueness of discrete measures.

A measure mu = sum alpha_j delta_{u_j} is determined among all measures by its
moments up to the degree of a polynomial p >= 0 on the sphere vanishing exactly
at the u_j: any nu with the same moments integrates p to zero, so nu lives on
{u_j}, and the factor polynomials p_i (zero at every u_j but u_i) then pin the
weights.

general:   p(u) = prod_j (1 - <u, u_j>),  degree m
full_dim:  pick u_1..u_{n+1} with affine hull R^n, let
           A_j = aff({u_1..u_{n+1}} minus u_j) = {x : <x, v^j> = beta_j}, and
           p(u) = sum_{j<=n+1} (<u, v^j> - beta_j)^2 (1 - <u, u_j>) prod_{i>n+1} (1 - <u, u_i>),
           degree m - n + 2.
"""

import logging
from dataclasses import dataclass, field
from math import ceil, log2
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.stats import qmc

from core.harmonics.special import check_dimension

logger = logging.getLogger(__name__)

MODES = ("full_dim", "general")
RANK_TOLERANCE = 1e-10


def affine_spanning_subset(directions: np.ndarray, tol: float = RANK_TOLERANCE) -> List[int]:
    """
    Greedy choice of n + 1 indices whose points affinely span R^n.

    Visits points in the given order and keeps a point when it raises the rank
    of the differences to the first point.

    Raises:
        ValueError: If the affine hull of all points is a proper subspace
    """
    directions = np.atleast_2d(np.asarray(directions, dtype=float))
    dim = directions.shape[1]
    chosen = [0]
    for index in range(1, len(directions)):
        candidate = directions[chosen[1:] + [index]] - directions[0]
        if np.linalg.matrix_rank(candidate, tol=tol) == len(chosen):
            chosen.append(index)
        if len(chosen) == dim + 1:
            return chosen
    raise ValueError(
        f"Support vectors span an affine subspace of dimension {len(chosen) - 1} < {dim}"
    )


def hyperplane_through(points: np.ndarray) -> Tuple[np.ndarray, float]:
    """Unit normal v and offset beta of the hyperplane through n points in R^n"""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    _, _, vt = np.linalg.svd(points[1:] - points[0])
    normal = vt[-1] / np.linalg.norm(vt[-1])
    return normal, float(normal @ points[0])


@dataclass(eq=False)
class CertificatePolynomial:
    """Polynomial p >= 0 on the sphere vanishing exactly at given directions"""

    directions: np.ndarray
    mode: str
    selected: List[int] = field(default_factory=list)
    hyperplanes: List[Tuple[np.ndarray, float]] = field(default_factory=list)

    @property
    def dim(self) -> int:
        return self.directions.shape[1]

    @property
    def size(self) -> int:
        return len(self.directions)

    @property
    def degree(self) -> int:
        if self.mode == "general":
            return self.size
        return self.size - self.dim + 2

    def _linear(self, u: np.ndarray) -> np.ndarray:
        """1 - <u, u_j> for all j, shape (N, m)"""
        return 1.0 - u @ self.directions.T

    def _others(self) -> List[int]:
        chosen = set(self.selected)
        return [i for i in range(self.size) if i not in chosen]

    def __call__(self, u: np.ndarray) -> np.ndarray:
        u = np.atleast_2d(np.asarray(u, dtype=float))
        linear = self._linear(u)
        if self.mode == "general":
            return np.prod(linear, axis=1)
        tail = np.prod(linear[:, self._others()], axis=1)
        total = np.zeros(len(u))
        for (normal, offset), j in zip(self.hyperplanes, self.selected):
            total += (u @ normal - offset) ** 2 * linear[:, j]
        return total * tail

    def factor(self, i: int, u: np.ndarray) -> np.ndarray:
        """
        p_i at u: vanishes at every direction except u_i and is positive there.

        For a selected index i the hyperplane term (<u, v^i> - beta_i)^2 times
        the non-selected factors; otherwise p with the factor (1 - <u, u_i>)
        left out.
        """
        if not 0 <= i < self.size:
            raise IndexError(f"Factor index {i} outside 0..{self.size - 1}")
        u = np.atleast_2d(np.asarray(u, dtype=float))
        linear = self._linear(u)
        if self.mode == "general":
            return np.prod(np.delete(linear, i, axis=1), axis=1)
        others = self._others()
        if i in self.selected:
            normal, offset = self.hyperplanes[self.selected.index(i)]
            return (u @ normal - offset) ** 2 * np.prod(linear[:, others], axis=1)
        tail = np.prod(linear[:, [k for k in others if k != i]], axis=1)
        total = np.zeros(len(u))
        for (normal, offset), j in zip(self.hyperplanes, self.selected):
            total += (u @ normal - offset) ** 2 * linear[:, j]
        return total * tail

    def factors(self) -> List[str]:
        """Human-readable factor list of p"""
        def dot(vector) -> str:
            return "<u, (" + ", ".join(f"{x:.6g}" for x in vector) + ")>"

        if self.mode == "general":
            return [f"(1 - {dot(d)})" for d in self.directions]
        terms = [f"({dot(normal)} - {offset:.6g})^2 (1 - {dot(self.directions[j])})"
                 for (normal, offset), j in zip(self.hyperplanes, self.selected)]
        tail = [f"(1 - {dot(self.directions[i])})" for i in self._others()]
        return ["[" + " + ".join(terms) + "]"] + tail

    def min_outside_caps(self, samples: int = 10_000, cap: float = 1e-3,
                         seed: Optional[int] = 0) -> float:
        """
        Minimum of p over quasi-random sphere points at angular distance > cap
        from every direction.
        """
        points = sobol_sphere(self.dim, samples, seed)
        cosines = points @ self.directions.T
        outside = np.all(cosines < np.cos(cap), axis=1)
        return float(np.min(self(points[outside])))

    def __repr__(self) -> str:
        return f"CertificatePolynomial(mode={self.mode}, m={self.size}, degree={self.degree})"


def sobol_sphere(dim: int, samples: int, seed: Optional[int] = 0) -> np.ndarray:
    """
    Quasi-random points on S^{n-1}: scrambled Sobol points pushed through the
    area-preserving map (z, phi) for n = 3 or the angle for n = 2.
    """
    check_dimension(dim)
    sampler = qmc.Sobol(d=dim - 1, scramble=True, seed=seed)
    unit = sampler.random_base2(max(1, ceil(log2(samples))))[:samples]
    if dim == 2:
        t = 2.0 * np.pi * unit[:, 0]
        return np.column_stack([np.cos(t), np.sin(t)])
    z = 2.0 * unit[:, 0] - 1.0
    phi = 2.0 * np.pi * unit[:, 1]
    r = np.sqrt(np.clip(1.0 - z ** 2, 0.0, None))
    return np.column_stack([r * np.cos(phi), r * np.sin(phi), z])


def build_certificate(directions: Sequence[Sequence[float]],
                      mode: str = "full_dim") -> CertificatePolynomial:
    """
    Certificate polynomial for the support vectors of a discrete measure.

    Args:
        directions: Distinct unit vectors u_1..u_m
        mode: "full_dim" (requires aff{u_j} = R^n, degree m - n + 2) or
              "general" (degree m)

    Raises:
        ValueError: For an unknown mode or a deficient affine hull in full_dim mode
    """
    if mode not in MODES:
        raise ValueError(f"Unknown certificate mode {mode!r}; choose from {MODES}")
    directions = np.atleast_2d(np.asarray(directions, dtype=float))
    check_dimension(directions.shape[1])
    if mode == "general":
        return CertificatePolynomial(directions, mode)

    selected = affine_spanning_subset(directions)
    hyperplanes = []
    for j in selected:
        rest = [k for k in selected if k != j]
        hyperplanes.append(hyperplane_through(directions[rest]))
    certificate = CertificatePolynomial(directions, mode, selected, hyperplanes)
    logger.debug("Built %r from support vectors %s", certificate, selected)
    return certificate


def determinacy_degree(directions: Sequence[Sequence[float]]) -> int:
    """
    Moment order that determines a discrete measure on these directions among
    all measures: m - n + 2 if they affinely span R^n, else m.
    """
    directions = np.atleast_2d(np.asarray(directions, dtype=float))
    try:
        affine_spanning_subset(directions)
    except ValueError:
        return len(directions)
    return len(directions) - directions.shape[1] + 2

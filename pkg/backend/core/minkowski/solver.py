"""
Polytope reconstruction from a prescribed surface area measure.

Given unit normals u_i and areas a_i > 0 with sum a_i u_i = 0 spanning R^n, the
convex function

    G(h) = sum a_i h_i - c log V(h),    c = rho S / n,

is minimized over support vectors h, where V(h) is the volume of
P(h) = {x : <u_i, x> <= h_i} and rho = (S / omega_n)^(1/(n-1)). Because
dV/dh_i = A_i(h) (the facet area), the gradient is a - c A(h) / V(h) and at the
minimum the facet areas are proportional to a. A final dilation by
t = (c / V)^(1/(n-1)) makes them equal.

G is invariant under translations h -> h + U x, so the box h_i >= eps * rho
loses no minimizer (some translate has the origin deep inside) and keeps every
iterate a body with nonempty interior.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Optional, Tuple, Union

import numpy as np
from scipy.optimize import minimize

from core.bodies.polytope import Polytope
from core.exceptions import (
    InfeasibleMinkowskiDataError,
    MinkowskiConvergenceError,
    NotFullDimensionalError,
    PolytopeError,
)
from core.harmonics.special import sphere_area
from core.measures.classify import classify
from core.minkowski.atoms import merge_atoms
from core.models import DiscreteMeasure, MeasureTag

logger = logging.getLogger(__name__)


def volume_and_areas(normals: np.ndarray, supports: np.ndarray,
                     interior_point: Optional[np.ndarray] = None) -> Tuple[float, np.ndarray]:
    """
    Volume V(h) and facet areas A_i(h) of {x : <u_i, x> <= h_i}.

    Redundant halfspaces get area 0. dV/dh_i = A_i(h).
    """
    body = Polytope.from_halfspaces(normals, supports, check_bounded=False,
                                    interior_point=interior_point)
    return body.volume, body.facet_areas


@dataclass(eq=False)
class MinkProblem:
    """Normals and positive target areas with vanishing weighted sum"""

    normals: np.ndarray
    areas: np.ndarray

    CLOSEDNESS_TOLERANCE = 1e-8

    def __post_init__(self):
        self.normals = np.atleast_2d(np.asarray(self.normals, dtype=float))
        self.areas = np.asarray(self.areas, dtype=float).reshape(-1)
        if len(self.normals) != len(self.areas):
            raise ValueError(f"{len(self.normals)} normals but {len(self.areas)} areas")
        if np.any(self.areas <= 0):
            raise ValueError("Minkowski targets must be positive")

    @property
    def dim(self) -> int:
        return self.normals.shape[1]

    @property
    def total_area(self) -> float:
        return float(self.areas.sum())

    def closedness(self) -> float:
        return float(np.linalg.norm(self.areas @ self.normals))

    @classmethod
    def from_measure(cls, measure: DiscreteMeasure,
                     merge_tol: float = 1e-6,
                     tolerance: float = CLOSEDNESS_TOLERANCE) -> 'MinkProblem':
        """
        Minkowski data from a measure: merge close atoms, drop zero weights,
        check the measure is a full-dimensional surface area measure and project
        the areas onto sum a_i u_i = 0.

        Raises:
            NotFullDimensionalError: If the measure does not classify FullDim
            InfeasibleMinkowskiDataError: If |sum a_i u_i| > tolerance * S
        """
        merged = merge_atoms(measure, merge_tol)
        if merged.size == 0:
            raise NotFullDimensionalError("Empty measure")
        total = merged.total_mass
        violation = float(np.linalg.norm(merged.weights @ merged.atoms))
        if violation > tolerance * total:
            raise InfeasibleMinkowskiDataError(
                f"|sum a_i u_i| = {violation:.3e} exceeds {tolerance:.1e} * S"
            )
        verdict = classify(merged, tol_rel=tolerance)
        if verdict.tag is not MeasureTag.FULL_DIM:
            raise NotFullDimensionalError(f"Measure classifies as {verdict}")

        normals, areas = merged.atoms, merged.weights
        correction = normals @ np.linalg.solve(normals.T @ normals, normals.T @ areas)
        areas = np.clip(areas - correction, 0.0, None)
        keep = areas > 0
        return cls(normals[keep], areas[keep])


class MinkowskiSolver:
    """
    Solve the discrete Minkowski problem by convex minimization.

    Uses L-BFGS-B with the analytic gradient; a run is restarted from its end
    point (fresh curvature memory) while the facet areas still miss the
    targets.
    """

    LOWER_BOUND_FRACTION = 1e-6

    def __init__(self, max_iter: int = 500, gtol: float = 1e-11,
                 area_tol: float = 1e-6, restarts: int = 6):
        """
        Initialize solver.

        Args:
            max_iter: L-BFGS-B iterations per run
            gtol: Projected-gradient tolerance relative to the total area
            area_tol: Required max |A_i - a_i| / S of the output
            restarts: Maximal number of runs
        """
        self.max_iter = max_iter
        self.gtol = gtol
        self.area_tol = area_tol
        self.restarts = restarts
        self.stats = {
            'problems': 0,
            'runs': 0,
            'iterations': 0,
            'evaluations': 0,
            'last_area_error': None,
        }

    def solve(self, problem: MinkProblem) -> Polytope:
        """
        Reconstruct the polytope of a Minkowski problem.

        Returns:
            Polytope with facet areas matching the targets, centroid at origin

        Raises:
            MinkowskiConvergenceError: If the areas do not match after all runs
        """
        normals, areas = problem.normals, problem.areas
        dim = problem.dim
        total = problem.total_area
        rho = (total / sphere_area(dim)) ** (1.0 / (dim - 1))
        weight = rho * total / dim
        origin = np.zeros(dim)
        self.stats['problems'] += 1

        def objective(h: np.ndarray) -> Tuple[float, np.ndarray]:
            self.stats['evaluations'] += 1
            try:
                volume, facet_areas = volume_and_areas(normals, h, origin)
            except PolytopeError as e:
                raise MinkowskiConvergenceError(f"Iterate left the feasible set: {e}") from e
            value = float(areas @ h - weight * np.log(volume))
            gradient = areas - weight * facet_areas / volume
            return value, gradient

        h = np.full(len(areas), rho)
        bounds = [(self.LOWER_BOUND_FRACTION * rho, None)] * len(areas)
        error = np.inf
        for run in range(self.restarts):
            result = minimize(
                objective, h, jac=True, method="L-BFGS-B", bounds=bounds,
                options={
                    'maxiter': self.max_iter,
                    'ftol': 1e-16,
                    'gtol': self.gtol * total,
                    'maxcor': 30,
                },
            )
            h = result.x
            self.stats['runs'] += 1
            self.stats['iterations'] += int(result.nit)
            error = self._area_error(normals, h, areas, origin)
            logger.debug("Minkowski run %d: %s, area error %.3e", run, result.message, error)
            if error <= self.area_tol:
                break

        self.stats['last_area_error'] = error
        if error > self.area_tol:
            raise MinkowskiConvergenceError(
                f"Facet areas off by {error:.3e} (relative) after {self.restarts} runs"
            )

        body = Polytope.from_halfspaces(normals, h, check_bounded=False, interior_point=origin)
        scale = (float(areas @ h) / (dim * body.volume)) ** (1.0 / (dim - 1))
        body = body.scale(scale).centered()
        logger.info(
            "Minkowski reconstruction: %d facets, volume %.6g, area error %.2e",
            body.facet_count, body.volume, error
        )
        return body

    @staticmethod
    def _area_error(normals: np.ndarray, h: np.ndarray, areas: np.ndarray,
                    origin: np.ndarray) -> float:
        """max |A_i - a_i| / S after the optimal dilation"""
        dim = normals.shape[1]
        volume, facet_areas = volume_and_areas(normals, h, origin)
        factor = float(areas @ h) / (dim * volume)
        return float(np.max(np.abs(factor * facet_areas - areas)) / areas.sum())

    def get_statistics(self) -> Dict:
        return dict(self.stats)


def mink_reconstruct(data: Union[MinkProblem, DiscreteMeasure],
                     solver: Optional[MinkowskiSolver] = None) -> Polytope:
    """
    Polytope whose surface area measure is the given data.

    Args:
        data: MinkProblem or a discrete surface area measure
        solver: Configured solver (defaults to MinkowskiSolver())

    Raises:
        NotFullDimensionalError: If a measure does not classify FullDim
        InfeasibleMinkowskiDataError: If the closedness condition fails
        MinkowskiConvergenceError: If the solver does not converge
    """
    problem = data if isinstance(data, MinkProblem) else MinkProblem.from_measure(data)
    return (solver or MinkowskiSolver()).solve(problem)

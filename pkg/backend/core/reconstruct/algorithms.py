"""
The two reconstruction algorithms.

From surface tensors (exact):
    tensors of ranks s_o - 1, s_o -> harmonic target -> exact measure fit ->
    Minkowski reconstruction. The fitted measure has the input's moments up to
    s_o and is a full-dimensional surface area measure, so the output polytope
    has at most m_{s_o} facets and the input surface tensors.

From harmonic intrinsic volumes (least squares):
    noisy harmonic vector -> least-squares measure fit -> classification:
        Zero            Case 1, the point {0}
        RankOne         Case 2, an (n-1)-cube in u^perp with surface area alpha
        FullDim         Case 3, Minkowski reconstruction
        NotSurfaceArea  Case 4, no output
"""

import logging
from dataclasses import dataclass, field
from math import sqrt
from typing import Dict, Optional

import numpy as np

from core.bodies.grids import tangent_basis
from core.bodies.polytope import Polytope
from core.exceptions import ReconstructionError
from core.measures.classify import classify
from core.minkowski.solver import MinkowskiSolver, MinkProblem
from core.models import (
    CaseTag,
    DiscreteMeasure,
    FitMode,
    FitTarget,
    HarmonicVector,
    MeasureClass,
    MeasureTag,
    TensorSet,
)
from core.reconstruct.config import SolverConfig
from core.reconstruct.fitting import FitOutcome, MeasureFitter
from core.tensors.bijection import harmonic_vector, moment_to_harmonic
from core.tensors.moments import tensor_set

logger = logging.getLogger(__name__)


@dataclass
class ReconstructionResult:
    """Outcome of a reconstruction run"""

    dim: int
    max_degree: int
    case: CaseTag
    measure: DiscreteMeasure
    residual: float
    polytope: Optional[Polytope] = None
    classification: Optional[MeasureClass] = None
    diagnostics: Dict = field(default_factory=dict)

    @property
    def has_output(self) -> bool:
        return self.case is not CaseTag.CASE4_NO_OUTPUT

    def to_dict(self) -> Dict:
        """Record without wall-clock values; key order is fixed by the writer"""
        record = {
            'kind': 'result',
            'case': self.case.value,
            'residual': float(self.residual),
            'n': self.dim,
            's_o': self.max_degree,
            'measure': self.measure.to_dict(),
            'diagnostics': self.diagnostics,
        }
        if self.polytope is not None:
            record['polytope'] = self.polytope.to_dict()
        return record


def lower_dimensional_body(axis: np.ndarray, surface_area: float) -> Polytope:
    """
    Centered (n-1)-cube in axis^perp whose surface area measure is
    surface_area * (delta_axis + delta_-axis).
    """
    axis = np.asarray(axis, dtype=float)
    axis = axis / np.linalg.norm(axis)
    if len(axis) == 2:
        direction = np.array([-axis[1], axis[0]])
        half = surface_area / 2.0
        return Polytope.flat(np.array([-half * direction, half * direction]))
    e1, e2 = tangent_basis(axis)
    half = sqrt(surface_area) / 2.0
    corners = [sx * half * e1 + sy * half * e2 for sx in (-1, 1) for sy in (-1, 1)]
    return Polytope.flat(np.array(corners))


class ShapeReconstructor:
    """
    Runs both reconstruction algorithms with one configuration and keeps
    running statistics over calls.
    """

    def __init__(self, config: Optional[SolverConfig] = None):
        self.config = config or SolverConfig()
        self.fitter = MeasureFitter(self.config)
        self.minkowski = MinkowskiSolver(
            max_iter=self.config.mink_max_iter, gtol=self.config.mink_gtol
        )
        self.stats = {
            'reconstructions': 0,
            'cases': {tag.value: 0 for tag in CaseTag},
        }

    # ============= SURFACE TENSORS =============

    def from_tensors(self, tensors: TensorSet) -> ReconstructionResult:
        """
        Polytope with at most m_{s_o} facets and the given surface tensors.

        Raises:
            ValueError: If s_o < 2
            FitError: If the exact fit fails
            ReconstructionError: If the fitted measure is not full-dimensional
            MinkowskiError: If the Minkowski step fails
        """
        if tensors.max_rank < 2:
            raise ValueError(f"Reconstruction needs s_o >= 2, got {tensors.max_rank}")
        cfg = self.config
        harmonics = moment_to_harmonic(tensors)
        logger.info("Surface tensor reconstruction: n=%d, s_o=%d, %d harmonic coordinates",
                    tensors.dim, tensors.max_rank, len(harmonics.values))
        outcome = self.fitter.fit(FitTarget.from_harmonics(harmonics, FitMode.EXACT))
        verdict = classify(outcome.measure, cfg.tol_abs, cfg.tol_rel)
        if verdict.tag is not MeasureTag.FULL_DIM:
            raise ReconstructionError(
                f"Fitted measure classifies as {verdict}; the input tensors do not "
                f"come from a body with interior points"
            )

        polytope = self._minkowski(outcome.measure)
        diagnostics = self._diagnostics(outcome)
        diagnostics['tensor_fidelity'] = tensor_fidelity(polytope, tensors)
        diagnostics['harmonic_gap'] = harmonic_gap(polytope, outcome.measure, tensors.max_rank)
        return self._finish(ReconstructionResult(
            tensors.dim, tensors.max_rank, CaseTag.CASE3_POLYTOPE, outcome.measure,
            outcome.residual, polytope, verdict, diagnostics,
        ))

    # ============= HARMONIC INTRINSIC VOLUMES =============

    def from_harmonics(self, measurements: HarmonicVector) -> ReconstructionResult:
        """
        Least-squares reconstruction from (noisy) harmonic intrinsic volumes.

        Case 4 is a result, not an error.

        Raises:
            ValueError: If s_o < 2
            FitError: If every start of the fit fails
            MinkowskiError: If the Minkowski step fails for a FullDim measure
        """
        if measurements.max_degree < 2:
            raise ValueError(f"Reconstruction needs s_o >= 2, got {measurements.max_degree}")
        cfg = self.config
        dim = measurements.dim
        outcome = self.fitter.fit(FitTarget.from_harmonics(measurements, FitMode.NOISY))
        verdict = classify(outcome.measure, cfg.tol_abs, cfg.tol_rel)
        diagnostics = self._diagnostics(outcome)

        if verdict.tag is MeasureTag.ZERO:
            case, polytope = CaseTag.CASE1_POINT, Polytope.point(dim)
        elif verdict.tag is MeasureTag.RANK_ONE:
            case = CaseTag.CASE2_LOWER_DIM
            polytope = lower_dimensional_body(verdict.axis, verdict.surface_area)
        elif verdict.tag is MeasureTag.FULL_DIM:
            case = CaseTag.CASE3_POLYTOPE
            polytope = self._minkowski(outcome.measure)
            diagnostics['harmonic_gap'] = harmonic_gap(
                polytope, outcome.measure, measurements.max_degree
            )
        else:
            case, polytope = CaseTag.CASE4_NO_OUTPUT, None
            logger.info("Fitted measure is no surface area measure: the algorithm has no output")

        return self._finish(ReconstructionResult(
            dim, measurements.max_degree, case, outcome.measure, outcome.residual,
            polytope, verdict, diagnostics,
        ))

    # ============= HELPERS =============

    def _minkowski(self, measure: DiscreteMeasure) -> Polytope:
        problem = MinkProblem.from_measure(
            measure, self.config.merge_tol, self.config.tol_rel
        )
        return self.minkowski.solve(problem)

    def _diagnostics(self, outcome: FitOutcome) -> Dict:
        return {
            'starts': outcome.starts_run,
            'best_start': outcome.best_start,
            'evaluations': outcome.evaluations,
            'start_residuals': [None if r is None else float(r)
                                for r in outcome.start_residuals],
            'atoms': outcome.measure.size,
        }

    def _finish(self, result: ReconstructionResult) -> ReconstructionResult:
        self.stats['reconstructions'] += 1
        self.stats['cases'][result.case.value] += 1
        logger.info("Reconstruction finished: %s, residual %.3e",
                    result.case.value, result.residual)
        return result

    def get_statistics(self) -> Dict:
        return {
            **self.stats,
            'fitter': self.fitter.get_statistics(),
            'minkowski': self.minkowski.get_statistics(),
        }


def tensor_fidelity(polytope: Polytope, tensors: TensorSet) -> float:
    """Max difference of the top two surface tensors, relative to the input's largest entry"""
    own = tensor_set(polytope.surface_measure(), tensors.max_rank,
                     scaled=tensors.scaled, min_rank=None).vector()
    given = tensors.vector()
    scale = max(float(np.max(np.abs(given))), 1e-300)
    return float(np.max(np.abs(own - given)) / scale)


def harmonic_gap(polytope: Polytope, measure: DiscreteMeasure, max_degree: int) -> float:
    """|h(S(P)) - h(mu)| / |h(mu)|"""
    fitted = harmonic_vector(measure, max_degree)
    output = harmonic_vector(polytope.surface_measure(), max_degree)
    return float((output - fitted).norm() / max(fitted.norm(), 1e-300))


def algorithm_surface_tensor(tensors: TensorSet,
                             config: Optional[SolverConfig] = None) -> ReconstructionResult:
    """Reconstruct a polytope from surface tensors up to rank s_o (exact data)"""
    return ShapeReconstructor(config).from_tensors(tensors)


def algorithm_hiv_lsq(measurements: HarmonicVector,
                      config: Optional[SolverConfig] = None) -> ReconstructionResult:
    """Reconstruct from noisy harmonic intrinsic volumes by least squares"""
    return ShapeReconstructor(config).from_harmonics(measurements)

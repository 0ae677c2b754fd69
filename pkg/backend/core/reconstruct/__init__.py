"""
Reconstruction

Fitting discrete measures to surface tensors or noisy harmonic intrinsic
volumes, the two reconstruction algorithms and the noise model.
"""

from core.reconstruct.algorithms import (
    ReconstructionResult,
    ShapeReconstructor,
    algorithm_hiv_lsq,
    algorithm_surface_tensor,
    lower_dimensional_body,
)
from core.reconstruct.config import SolverConfig
from core.reconstruct.fitting import FitOutcome, MeasureFitter, fit_measure
from core.reconstruct.noise import (
    convergence_rate,
    noise_model,
    relative_sigma,
    summability_driver,
    variance_schedule,
)

__all__ = [
    'FitOutcome',
    'MeasureFitter',
    'ReconstructionResult',
    'ShapeReconstructor',
    'SolverConfig',
    'algorithm_hiv_lsq',
    'algorithm_surface_tensor',
    'convergence_rate',
    'fit_measure',
    'lower_dimensional_body',
    'noise_model',
    'relative_sigma',
    'summability_driver',
    'variance_schedule',
]

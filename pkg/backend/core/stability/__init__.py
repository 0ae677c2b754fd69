"""
Stability

Explicit bounds linking harmonic intrinsic volumes to the Dudley distance of
surface area measures, and the convergence and noise experiments.
"""

from core.stability.bounds import (
    DudleyReport,
    StabilityBound,
    dudley_vs_bound,
    explicit_noise_bound,
    harmonic_delta,
    projection_bound,
    projection_bound_check,
)
from core.stability.experiments import (
    contained_between,
    convergence_experiment,
    noise_experiment,
    summarize_noise,
)

__all__ = [
    'DudleyReport',
    'StabilityBound',
    'contained_between',
    'convergence_experiment',
    'dudley_vs_bound',
    'explicit_noise_bound',
    'harmonic_delta',
    'noise_experiment',
    'projection_bound',
    'projection_bound_check',
    'summarize_noise',
]

"""
Consistency experiments: reconstruction quality as the number of surface
tensors grows, and as noise on harmonic intrinsic volumes grows.
"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from core.bodies.distances import translative_hausdorff
from core.bodies.polytope import Polytope
from core.bodies.radii import (coefficient_matrix, elongation_axis, inclusion_radii,
                               noise_robust_radii)
from core.bodies.reference import reference_body, surface_area_measure
from core.models import BodySpec, CaseTag
from core.reconstruct.algorithms import algorithm_hiv_lsq, algorithm_surface_tensor
from core.reconstruct.config import SolverConfig
from core.reconstruct.noise import noise_model
from core.tensors.bijection import harmonic_vector
from core.tensors.moments import surface_tensor, tensor_set

logger = logging.getLogger(__name__)

CONVERGE_COLUMNS = ['s_o', 'residual', 'dt', 'seconds', 'radii_ok', 'axis_deg']
AXIS_GAP = 1e-6
NOISE_COLUMNS = ['sigma2', 'trial', 'case', 'dt', 'in_annulus']


def contained_between(body: Polytope, inner: float, outer: float) -> bool:
    """Whether inner B^n is inside body - centroid and that inside outer B^n"""
    centered = body.centered()
    if centered.kind != "full":
        return False
    fits_outer = float(np.max(np.linalg.norm(centered.vertices, axis=1))) <= outer
    active = centered.facet_areas > 0
    fits_inner = float(np.min(centered.supports[active])) >= inner
    return fits_outer and fits_inner


def long_axis(phi2) -> Optional[np.ndarray]:
    """Elongation axis of Phi^2, or None when its two smallest eigenvalues coincide"""
    eigenvalues = np.linalg.eigvalsh(coefficient_matrix(phi2))
    if eigenvalues[1] - eigenvalues[0] <= AXIS_GAP * eigenvalues[-1]:
        return None
    return elongation_axis(phi2)


def axis_angle(body: Polytope, axis: Optional[np.ndarray]) -> float:
    """Angle in degrees between the body's elongation axis and a given axis (NaN without one)"""
    if axis is None:
        return float('nan')
    own = elongation_axis(surface_tensor(body.surface_measure(), 2))
    return float(np.degrees(np.arccos(min(1.0, abs(float(own @ axis))))))


def convergence_experiment(body: BodySpec, degrees: Sequence[int],
                           config: Optional[SolverConfig] = None,
                           resolution: str = "medium", level: int = 3) -> pd.DataFrame:
    """
    Reconstruct a body from its surface tensors for several s_o.

    Returns:
        DataFrame with columns s_o, residual, dt (translative Hausdorff distance
        to the ground truth), seconds, radii_ok (the output lies between the
        inclusion radii computed from Phi^2) and axis_deg (angle between the
        elongation axes of output and ground truth, NaN for bodies without one)
    """
    config = config or SolverConfig()
    truth = reference_body(body, resolution)
    measure = surface_area_measure(body, resolution)
    phi2 = tensor_set(measure, 2).tensors[2]
    inner, outer = inclusion_radii(phi2, measure.total_mass)
    axis = long_axis(phi2)

    rows = []
    for max_degree in degrees:
        tensors = tensor_set(measure, max_degree)
        started = time.perf_counter()
        result = algorithm_surface_tensor(tensors, config)
        seconds = time.perf_counter() - started
        distance = translative_hausdorff(result.polytope, truth, level)
        rows.append({
            's_o': int(max_degree),
            'residual': float(result.residual),
            'dt': float(distance),
            'seconds': float(seconds),
            'radii_ok': contained_between(result.polytope, inner, outer),
            'axis_deg': axis_angle(result.polytope, axis),
        })
        logger.info("%s s_o=%d: dt=%.4e (%.1fs)", body.name, max_degree, distance, seconds)
    return pd.DataFrame(rows, columns=CONVERGE_COLUMNS)


def noise_experiment(body: BodySpec, max_degree: int, sigma2: Sequence[float],
                     trials: int = 1, config: Optional[SolverConfig] = None,
                     seed: int = 0, resolution: str = "medium", level: int = 3,
                     threads: int = 1) -> pd.DataFrame:
    """
    Least-squares reconstruction from noisy harmonic intrinsic volumes.

    Trial t at variance index i draws its noise from SeedSequence([seed, i, t]).

    Returns:
        DataFrame with one row per trial: sigma2, trial, case, dt (NaN unless
        Case 3) and in_annulus (Case 3 output between the noise-robust radii)
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    if any(s < 0 for s in sigma2):
        raise ValueError(f"Variances must be >= 0, got {list(sigma2)}")
    config = replace(config or SolverConfig(), threads=1)
    truth = reference_body(body, resolution)
    measure = surface_area_measure(body, resolution)
    exact = harmonic_vector(measure, max_degree)
    inner, outer = noise_robust_radii(
        *inclusion_radii(tensor_set(measure, 2).tensors[2], measure.total_mass)
    )

    def run(cell) -> Dict:
        index, variance, trial = cell
        noise = noise_model(exact.dim, max_degree, float(np.sqrt(variance)),
                            np.random.SeedSequence([seed, index, trial]))
        result = algorithm_hiv_lsq(exact + noise, config)
        row = {'sigma2': float(variance), 'trial': trial, 'case': result.case.value,
               'dt': float('nan'), 'in_annulus': False}
        if result.case is CaseTag.CASE3_POLYTOPE:
            row['dt'] = float(translative_hausdorff(result.polytope, truth, level))
            row['in_annulus'] = contained_between(result.polytope, inner, outer)
        return row

    cells = [(i, v, t) for i, v in enumerate(sigma2) for t in range(trials)]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows: List[Dict] = list(pool.map(run, cells))
    else:
        rows = [run(cell) for cell in cells]
    return pd.DataFrame(rows, columns=NOISE_COLUMNS)


def summarize_noise(table: pd.DataFrame) -> pd.DataFrame:
    """Mean dt over Case 3 trials and case counts per variance"""
    counts = pd.crosstab(table['sigma2'], table['case'])
    for tag in CaseTag:
        if tag.value not in counts.columns:
            counts[tag.value] = 0
    counts = counts[[tag.value for tag in CaseTag]]
    mean_dt = table.groupby('sigma2')['dt'].mean().rename('mean_dt')
    return pd.concat([mean_dt, counts], axis=1).reset_index()

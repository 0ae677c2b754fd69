"""
Clean-up of fitted measures before they become Minkowski data.
"""

from math import sin

import numpy as np

from core.models import DiscreteMeasure

DEFAULT_ANGULAR_TOL = 1e-6


def merge_atoms(measure: DiscreteMeasure,
                angular_tol: float = DEFAULT_ANGULAR_TOL) -> DiscreteMeasure:
    """
    Merge atoms closer than angular_tol (radians).

    Atoms are visited by decreasing weight; each unvisited atom collects all
    unvisited atoms within the tolerance of itself. A cluster becomes one atom
    with the summed weight, pointing along the weighted mean direction.
    Zero-weight atoms are dropped first. Antipodal atoms never merge.

    Args:
        measure: Discrete measure
        angular_tol: Angular merge radius

    Returns:
        Merged measure (atoms in order of decreasing cluster weight)
    """
    if angular_tol < 0:
        raise ValueError(f"angular_tol must be >= 0, got {angular_tol}")
    keep = measure.weights > 0
    atoms, weights = measure.atoms[keep], measure.weights[keep]
    if len(atoms) == 0:
        return DiscreteMeasure.zero(measure.dim)

    chord = 2.0 * sin(min(angular_tol, np.pi) / 2.0)
    order = np.argsort(-weights, kind="stable")
    assigned = np.zeros(len(atoms), dtype=bool)
    merged_atoms, merged_weights = [], []

    for i in order:
        if assigned[i]:
            continue
        distances = np.linalg.norm(atoms - atoms[i], axis=1)
        members = np.flatnonzero(~assigned & (distances <= chord))
        assigned[members] = True
        total = float(weights[members].sum())
        direction = weights[members] @ atoms[members]
        norm = np.linalg.norm(direction)
        merged_atoms.append(direction / norm if norm > 0 else atoms[i])
        merged_weights.append(total)

    return DiscreteMeasure(np.array(merged_atoms), np.array(merged_weights))


def prune_atoms(measure: DiscreteMeasure, tol_rel: float) -> DiscreteMeasure:
    """Drop atoms whose weight is at most tol_rel times the total mass"""
    mass = measure.total_mass
    keep = measure.weights > tol_rel * mass
    if not np.any(keep):
        return DiscreteMeasure.zero(measure.dim)
    return DiscreteMeasure(measure.atoms[keep], measure.weights[keep])

"""
Minkowski Problem

Merging of fitted atoms and reconstruction of a polytope from its surface
area measure.
"""

from core.minkowski.atoms import merge_atoms, prune_atoms
from core.minkowski.solver import (
    MinkProblem,
    MinkowskiSolver,
    mink_reconstruct,
    volume_and_areas,
)

__all__ = [
    'MinkProblem',
    'MinkowskiSolver',
    'merge_atoms',
    'mink_reconstruct',
    'prune_atoms',
    'volume_and_areas',
]

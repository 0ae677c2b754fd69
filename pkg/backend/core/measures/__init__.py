"""
Measures on the Sphere

Discrete measures, second-moment classification of surface area measures,
the Dudley distance and quadrature discretization of smooth measures.
"""

from core.measures.classify import classify, first_moment, moment_matrix
from core.measures.discretize import discretize, sphere_measure
from core.measures.dudley import dudley

__all__ = [
    'classify',
    'discretize',
    'dudley',
    'first_moment',
    'moment_matrix',
    'sphere_measure',
]

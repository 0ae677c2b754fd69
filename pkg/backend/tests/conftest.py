# File: backend/tests/conftest.py

import numpy as np
import pytest

from core.bodies.reference import cube, pyramid
from core.measures.discretize import sphere_measure
from core.models import DiscreteMeasure
from core.reconstruct.config import SolverConfig


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def unit_cube():
    return cube(1.0)


@pytest.fixture
def cube_measure(unit_cube):
    return unit_cube.surface_measure()


@pytest.fixture
def pyramid_measure():
    return pyramid(1.0, 1.0).surface_measure()


@pytest.fixture
def ball_measure():
    """sigma on S^2, exact to degree 16"""
    return sphere_measure(3, 16)


@pytest.fixture
def random_measure(rng):
    """12 random atoms on S^2 with positive weights (not closed)"""
    atoms = rng.standard_normal((12, 3))
    atoms /= np.linalg.norm(atoms, axis=1)[:, None]
    return DiscreteMeasure(atoms, rng.uniform(0.1, 2.0, 12))


@pytest.fixture
def fast_config():
    return SolverConfig(starts=4, seed=3, max_nfev=800)

"""
Deterministic direction grids on S^1 and S^2.
"""

from functools import lru_cache
from math import pi
from typing import Dict, Tuple

import numpy as np

from core.harmonics.special import check_dimension

_GOLDEN = (1.0 + 5.0 ** 0.5) / 2.0

_ICOSAHEDRON_VERTICES = np.array([
    [-1, _GOLDEN, 0], [1, _GOLDEN, 0], [-1, -_GOLDEN, 0], [1, -_GOLDEN, 0],
    [0, -1, _GOLDEN], [0, 1, _GOLDEN], [0, -1, -_GOLDEN], [0, 1, -_GOLDEN],
    [_GOLDEN, 0, -1], [_GOLDEN, 0, 1], [-_GOLDEN, 0, -1], [-_GOLDEN, 0, 1],
], dtype=float)

_ICOSAHEDRON_FACES = [
    (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
    (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
    (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
    (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
]


@lru_cache(maxsize=8)
def icosphere(level: int) -> np.ndarray:
    """
    Vertices of a subdivided icosahedron projected to the unit sphere.

    Level L has 10 * 4^L + 2 points (level 3: 642, level 4: 2562).
    """
    if level < 0:
        raise ValueError(f"Subdivision level must be >= 0, got {level}")
    points = [row / np.linalg.norm(row) for row in _ICOSAHEDRON_VERTICES]
    faces = list(_ICOSAHEDRON_FACES)

    for _ in range(level):
        midpoints: Dict[Tuple[int, int], int] = {}

        def midpoint(i: int, j: int) -> int:
            key = (min(i, j), max(i, j))
            if key not in midpoints:
                middle = points[i] + points[j]
                points.append(middle / np.linalg.norm(middle))
                midpoints[key] = len(points) - 1
            return midpoints[key]

        refined = []
        for a, b, c in faces:
            ab, bc, ca = midpoint(a, b), midpoint(b, c), midpoint(c, a)
            refined += [(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)]
        faces = refined

    grid = np.array(points)
    grid.setflags(write=False)
    return grid


def circle_directions(count: int, offset: float = 0.0) -> np.ndarray:
    """count equispaced unit vectors on S^1 starting at angle offset"""
    angles = offset + 2.0 * pi * np.arange(count) / count
    return np.column_stack([np.cos(angles), np.sin(angles)])


def direction_grid(dim: int, level: int = 3) -> np.ndarray:
    """
    Base grid for support-function sampling.

    n = 3: icosphere of the given level; n = 2: 10 * 4^level + 2 equispaced
    angles, matching the icosphere point count.
    """
    check_dimension(dim)
    if dim == 3:
        return icosphere(level)
    return circle_directions(10 * 4 ** level + 2)


def tangent_basis(u: np.ndarray) -> np.ndarray:
    """
    Orthonormal basis of the plane orthogonal to a unit vector in R^3.

    Rows (e1, e2) satisfy e1 x e2 = u.
    """
    u = np.asarray(u, dtype=float)
    helper = np.eye(3)[int(np.argmin(np.abs(u)))]
    e1 = np.cross(helper, u)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(u, e1)
    return np.vstack([e1, e2])

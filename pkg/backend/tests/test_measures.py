# File: backend/tests/test_measures.py

from math import pi, sqrt

import numpy as np
import pytest

from core.measures.classify import classify, first_moment, moment_matrix
from core.measures.discretize import discretize, sphere_measure
from core.measures.dudley import dudley
from core.models import DiscreteMeasure, MeasureTag


def point_mass(direction, weight=1.0):
    return DiscreteMeasure(np.array([direction], dtype=float), np.array([weight]))


class TestDiscreteMeasure:

    def test_rejects_negative_weights(self):
        """Test negative weights are refused"""
        with pytest.raises(ValueError):
            DiscreteMeasure(np.eye(3), np.array([1.0, -0.5, 1.0]))

    def test_rejects_non_unit_atoms(self):
        """Test atoms must lie on the sphere"""
        with pytest.raises(ValueError):
            DiscreteMeasure(np.array([[1.0, 1.0, 0.0]]), np.array([1.0]))

    def test_zero_measure_keeps_dimension(self):
        """Test the empty measure remembers n"""
        zero = DiscreteMeasure.zero(2)
        assert zero.dim == 2
        assert zero.total_mass == 0.0

    def test_dict_round_trip(self, pyramid_measure):
        """Test to_dict and from_dict preserve atoms and weights"""
        again = DiscreteMeasure.from_dict(pyramid_measure.to_dict())
        assert np.allclose(again.atoms, pyramid_measure.atoms)
        assert np.allclose(again.weights, pyramid_measure.weights)


class TestDiscretize:

    def test_sphere_mass_and_centroid(self):
        """Test sigma on S^2 has mass 4 pi and vanishing first moment"""
        measure = sphere_measure(3, 4)
        assert measure.total_mass == pytest.approx(4 * pi, abs=1e-12)
        assert np.allclose(first_moment(measure), 0.0, atol=1e-12)

    def test_scaled_sphere(self):
        """Test the ball of radius 2 in the plane has perimeter 4 pi"""
        measure = discretize("sphere", 8, dim=2, scale=2.0)
        assert measure.total_mass == pytest.approx(4 * pi)

    def test_unknown_spec(self):
        """Test unsupported measure kinds are rejected"""
        with pytest.raises(ValueError):
            discretize("torus", 4)


class TestClassify:

    def test_ball_is_full_dimensional(self, ball_measure):
        """Test sigma classifies as a full-dimensional body"""
        assert classify(ball_measure).tag is MeasureTag.FULL_DIM

    def test_zero_measure(self):
        """Test the zero measure is the point case"""
        assert classify(DiscreteMeasure.zero(3)).tag is MeasureTag.ZERO

    def test_flat_body(self):
        """Test a S (delta_u + delta_-u) is a flat body of area S along u"""
        measure = DiscreteMeasure(np.array([[0.0, 0.0, -1.0], [0.0, 0.0, 1.0]]),
                                  np.array([2.5, 2.5]))
        verdict = classify(measure)
        assert verdict.tag is MeasureTag.RANK_ONE
        assert verdict.surface_area == pytest.approx(2.5)
        assert np.allclose(verdict.axis, [0.0, 0.0, 1.0])

    def test_unbalanced_measure(self):
        """Test a single atom is no surface area measure"""
        assert classify(point_mass([1.0, 0.0, 0.0])).tag is MeasureTag.NOT_SURFACE_AREA

    def test_rank_two_measure(self):
        """Test a closed measure spanning a plane in R^3 is rejected"""
        atoms = np.array([[1.0, 0, 0], [-1.0, 0, 0], [0, 1.0, 0], [0, -1.0, 0]])
        assert classify(DiscreteMeasure(atoms, np.ones(4))).tag is MeasureTag.NOT_SURFACE_AREA

    def test_moment_matrix_of_cube(self, cube_measure):
        """Test the cube's moment matrix is 2 I"""
        moments = moment_matrix(cube_measure)
        assert np.allclose(moments.eigenvalues, 2.0)


class TestDudley:

    def test_identical_measures(self, pyramid_measure):
        """Test the distance of a measure to itself is zero"""
        assert dudley(pyramid_measure, pyramid_measure) == pytest.approx(0.0, abs=1e-12)

    def test_against_zero_measure(self):
        """Test the distance to the zero measure is the mass"""
        assert dudley(point_mass([0.0, 1.0], 3.0), DiscreteMeasure.zero(2)) == pytest.approx(3.0)

    @pytest.mark.parametrize("v", [[-1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
    def test_two_point_masses(self, v):
        """Test unit point masses at distance d are 2d / (2 + d) apart"""
        d = float(np.linalg.norm(np.array([1.0, 0.0, 0.0]) - np.array(v)))
        value = dudley(point_mass([1.0, 0.0, 0.0]), point_mass(v))
        assert value == pytest.approx(2 * d / (2 + d), abs=1e-9)

    def test_symmetric(self, cube_measure, pyramid_measure):
        """Test d(mu, nu) = d(nu, mu)"""
        assert dudley(cube_measure, pyramid_measure) == pytest.approx(
            dudley(pyramid_measure, cube_measure), abs=1e-9)

    def test_triangle_inequality(self, rng):
        """Test the triangle inequality on random 4-atom measures"""
        def random_measure():
            atoms = rng.standard_normal((4, 3))
            atoms /= np.linalg.norm(atoms, axis=1)[:, None]
            return DiscreteMeasure(atoms, rng.uniform(0.1, 1.0, 4))

        for _ in range(10):
            a, b, c = random_measure(), random_measure(), random_measure()
            assert dudley(a, c) <= dudley(a, b) + dudley(b, c) + 1e-8

    def test_dimension_mismatch(self):
        """Test measures on different spheres are rejected"""
        with pytest.raises(ValueError):
            dudley(point_mass([1.0, 0.0]), point_mass([1.0, 0.0, 0.0]))

    def test_orthogonal_directions_in_plane(self):
        """Test the closed form for orthogonal point masses on the circle"""
        d = sqrt(2.0)
        assert dudley(point_mass([1.0, 0.0]), point_mass([0.0, 1.0])) == pytest.approx(
            2 * d / (2 + d), abs=1e-9)

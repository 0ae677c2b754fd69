# File: backend/tests/test_uniqueness.py

from math import sqrt

import numpy as np
import pytest

from core.measures.classify import classify, first_moment
from core.models import DiscreteMeasure, MeasureTag
from core.tensors.bijection import harmonic_vector
from core.uniqueness.certificate import (affine_spanning_subset, build_certificate,
                                         determinacy_degree, sobol_sphere)
from core.uniqueness.counterexamples import (agreement_rank, agreement_table, cone_lift,
                                             counterexample_pair, disc_measure,
                                             polygon_disc_pair)

CUBE_NORMALS = np.vstack([np.eye(3), -np.eye(3)])


class TestCertificate:

    @pytest.mark.parametrize("mode", ["full_dim", "general"])
    def test_vanishes_at_support(self, mode):
        """Test p(u_j) = 0 at every support vector"""
        certificate = build_certificate(CUBE_NORMALS, mode)
        assert np.max(np.abs(certificate(CUBE_NORMALS))) < 1e-10

    def test_degrees(self):
        """Test degree m - n + 2 for affinely spanning supports, m otherwise"""
        assert build_certificate(CUBE_NORMALS, "full_dim").degree == 5
        assert build_certificate(CUBE_NORMALS, "general").degree == 6
        assert determinacy_degree(CUBE_NORMALS) == 5

    @pytest.mark.parametrize("mode", ["full_dim", "general"])
    def test_positive_elsewhere(self, mode):
        """Test p > 0 on quasi-random points away from the support"""
        certificate = build_certificate(CUBE_NORMALS, mode)
        assert certificate.min_outside_caps(samples=10_000, cap=1e-3) > 0

    def test_factor_polynomials(self):
        """Test p_i vanishes at every u_j except u_i"""
        certificate = build_certificate(CUBE_NORMALS, "full_dim")
        for i in range(len(CUBE_NORMALS)):
            values = certificate.factor(i, CUBE_NORMALS)
            others = np.delete(values, i)
            assert np.max(np.abs(others)) < 1e-10
            assert values[i] > 0

    def test_planar_supports(self):
        """Test support vectors in a plane fall back to degree m"""
        square = np.array([[1.0, 0, 0], [-1.0, 0, 0], [0, 1.0, 0], [0, -1.0, 0]])
        with pytest.raises(ValueError):
            affine_spanning_subset(square)
        assert determinacy_degree(square) == 4

    def test_unknown_mode(self):
        """Test only full_dim and general are accepted"""
        with pytest.raises(ValueError):
            build_certificate(CUBE_NORMALS, "sparse")

    def test_readable_factors(self):
        """Test the general certificate lists one factor per direction"""
        assert len(build_certificate(CUBE_NORMALS, "general").factors()) == 6

    def test_sobol_points_on_sphere(self):
        """Test quasi-random samples are unit vectors"""
        points = sobol_sphere(3, 100)
        assert points.shape == (100, 3)
        assert np.allclose(np.linalg.norm(points, axis=1), 1.0)


class TestPolygonDiscPair:

    @pytest.mark.parametrize("sides", [3, 5, 8])
    def test_agreement_below_sides(self, sides):
        """Test the m-gon and the disc agree up to degree m - 1 and differ at m"""
        polygon, disc = polygon_disc_pair(sides)
        table = agreement_table(polygon.surface_measure(), disc, sides)
        assert table['max_abs_diff'].iloc[:sides].max() < 1e-9
        assert table['max_abs_diff'].iloc[sides] > 1e-3
        assert agreement_rank(table) == sides - 1

    def test_pentagon_gap_value(self):
        """Test the degree-5 difference of the pentagon is 2 sqrt(pi)"""
        polygon, disc = polygon_disc_pair(5)
        gap = (harmonic_vector(polygon.surface_measure(), 5)
               - harmonic_vector(disc, 5)).block(5)
        assert np.max(np.abs(gap)) == pytest.approx(2 * sqrt(np.pi), rel=1e-9)

    def test_disc_measure(self):
        """Test the disc measure has the circle's length"""
        assert disc_measure(10).total_mass == pytest.approx(2 * np.pi)

    def test_too_few_sides(self):
        """Test a 2-gon is rejected"""
        with pytest.raises(ValueError):
            polygon_disc_pair(2)


class TestConeLift:

    def test_square_lift(self):
        """Test the lifted square has 5 atoms, mass S (1 + alpha) and is closed"""
        square = DiscreteMeasure(np.array([[1.0, 0], [0, 1.0], [-1.0, 0], [0, -1.0]]),
                                 np.full(4, 2.0))
        lifted = cone_lift(square, 0.5)
        assert lifted.size == 5
        assert lifted.total_mass == pytest.approx(8.0 * 1.5)
        assert np.linalg.norm(first_moment(lifted)) < 1e-12
        assert classify(lifted).tag is MeasureTag.FULL_DIM

    def test_alpha_range(self):
        """Test alpha outside (0, 1) is rejected"""
        with pytest.raises(ValueError):
            cone_lift(disc_measure(6), 1.0)

    def test_open_measure(self):
        """Test measures with nonzero first moment cannot be lifted"""
        with pytest.raises(ValueError):
            cone_lift(DiscreteMeasure(np.array([[1.0, 0.0]]), np.ones(1)))

    @pytest.mark.parametrize("facets", [5, 6, 8])
    def test_lifted_pair(self, facets):
        """Test the lifted pair agrees up to rank m - n + 1 and differs at m - n + 2"""
        polytope_measure, other = counterexample_pair(3, facets)
        assert polytope_measure.size == facets
        table = agreement_table(polytope_measure, other, facets - 1)
        assert agreement_rank(table) == facets - 2
        assert table['max_abs_diff'].iloc[facets - 1] > 1e-4

    def test_pair_arguments(self):
        """Test unsupported dimensions and too few facets"""
        with pytest.raises(ValueError):
            counterexample_pair(4, 8)
        with pytest.raises(ValueError):
            counterexample_pair(3, 3)

    def test_table_shape(self):
        """Test one row per degree"""
        mu, nu = counterexample_pair(2, 4)
        table = agreement_table(mu, nu, 6)
        assert list(table.columns) == ['degree', 'max_abs_diff', 'agree']
        assert len(table) == 7

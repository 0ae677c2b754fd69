# File: backend/tests/test_bodies.py

from math import pi, sqrt

import numpy as np
import pytest

from core.bodies.distances import hausdorff, translative_hausdorff
from core.bodies.grids import direction_grid, icosphere, tangent_basis
from core.bodies.polytope import Polytope, halfspace_intersection
from core.bodies.radii import elongation_axis, inclusion_radii, noise_robust_radii
from core.bodies.reference import (cube, pyramid, reference_body, regular_polygon,
                                   surface_area_measure)
from core.exceptions import EmptyInteriorError, UnboundedPolytopeError
from core.measures.classify import classify
from core.models import BodySpec, MeasureTag
from core.stability.experiments import contained_between
from core.tensors.moments import surface_tensor


class TestGrids:

    def test_icosphere_counts(self):
        """Test 10 * 4^level + 2 unit vectors per level"""
        for level in range(3):
            grid = np.asarray(icosphere(level))
            assert len(grid) == 10 * 4 ** level + 2
            assert np.allclose(np.linalg.norm(grid, axis=1), 1.0)

    def test_planar_grid_matches_count(self):
        """Test the circle grid has as many points as the icosphere"""
        assert len(direction_grid(2, 2)) == len(direction_grid(3, 2))

    def test_tangent_basis_orientation(self):
        """Test e1, e2, u form a right-handed orthonormal frame"""
        u = np.array([0.3, -0.4, sqrt(0.75)])
        e1, e2 = tangent_basis(u)
        assert np.allclose([e1 @ u, e2 @ u, e1 @ e2], 0.0, atol=1e-12)
        assert np.allclose(np.cross(e1, e2), u)


class TestPolytope:

    def test_unit_cube(self, unit_cube):
        """Test volume, surface area and facets of the unit cube"""
        assert unit_cube.volume == pytest.approx(1.0)
        assert unit_cube.surface_area == pytest.approx(6.0)
        assert unit_cube.facet_count == 6
        assert unit_cube.kind == "full"
        assert unit_cube.support(np.array([1.0, 0.0, 0.0])) == pytest.approx(0.5)

    def test_pyramid_facets(self):
        """Test the pyramid has a unit base and four slant facets of area sqrt(5) / 4"""
        measure = pyramid(1.0, 1.0).surface_measure()
        assert measure.size == 5
        base = np.argmin(measure.atoms[:, 2])
        assert np.allclose(measure.atoms[base], [0.0, 0.0, -1.0])
        assert measure.weights[base] == pytest.approx(1.0)
        slants = np.delete(measure.weights, base)
        assert np.allclose(slants, sqrt(5) / 4)

    @pytest.mark.parametrize("sides", [3, 5, 8])
    def test_regular_polygon_perimeter(self, sides):
        """Test the m-gon's perimeter equals that of the unit disc"""
        polygon = regular_polygon(sides)
        assert polygon.facet_count == sides
        assert polygon.surface_area == pytest.approx(2 * pi)

    def test_random_hull_is_closed(self, rng):
        """Test sum a_i u_i = 0 for the hull of random points"""
        points = rng.standard_normal((30, 3))
        body = Polytope.from_vertices(points)
        assert np.linalg.norm(body.closedness()) < 1e-9

    def test_flat_square(self):
        """Test a square in R^3 is flat with both sides counted"""
        square = Polytope.from_vertices(
            np.array([[0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0]], dtype=float))
        assert square.kind == "flat"
        assert square.surface_area == pytest.approx(2.0)
        assert classify(square.surface_measure()).tag is MeasureTag.RANK_ONE

    def test_point(self):
        """Test a point has no surface measure"""
        point = Polytope.point(3)
        assert point.kind == "point"
        assert point.surface_measure().size == 0

    def test_transformations(self, unit_cube):
        """Test translation and dilation"""
        moved = unit_cube.translate(np.array([1.0, 2.0, 3.0]))
        assert np.allclose(moved.centroid, [1.0, 2.0, 3.0])
        grown = unit_cube.scale(2.0)
        assert grown.volume == pytest.approx(8.0)
        assert grown.surface_area == pytest.approx(24.0)
        assert np.allclose(moved.centered().centroid, 0.0, atol=1e-12)

    def test_unbounded_halfspaces(self):
        """Test normals in one orthant do not bound a body"""
        normals = np.array([[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]], dtype=float)
        with pytest.raises(UnboundedPolytopeError):
            halfspace_intersection(normals, np.ones(4))

    def test_empty_interior(self):
        """Test contradicting halfspaces are rejected"""
        normals = np.vstack([np.eye(3), -np.eye(3)])
        supports = np.array([-1.0, 1.0, 1.0, 0.0, 1.0, 1.0])
        with pytest.raises(EmptyInteriorError):
            halfspace_intersection(normals, supports)


class TestReferenceBodies:

    def test_ball_measure_mass(self):
        """Test the unit ball's surface measure has mass 4 pi"""
        measure = surface_area_measure(BodySpec.ball(), "fine")
        assert measure.total_mass == pytest.approx(4 * pi, abs=1e-6)

    def test_inscribed_ball_polytope(self):
        """Test the ball polytope lies inside the unit ball"""
        body = reference_body(BodySpec.ball(), "coarse")
        assert np.max(np.linalg.norm(body.vertices, axis=1)) <= 1.0 + 1e-12
        assert body.volume < 4 * pi / 3

    def test_unknown_resolution(self):
        """Test resolutions outside coarse/medium/fine are rejected"""
        with pytest.raises(ValueError):
            reference_body(BodySpec.cube(), "ultra")

    def test_cube_spec(self):
        """Test a cube spec builds the cube of that side"""
        assert reference_body(BodySpec.cube(side=2.0)).volume == pytest.approx(8.0)


class TestDistances:

    def test_translation_invariance(self, unit_cube):
        """Test the translative distance ignores translations"""
        moved = unit_cube.translate(np.array([5.0, 0.0, 0.0]))
        assert translative_hausdorff(unit_cube, moved) <= 1e-6
        assert hausdorff(unit_cube, moved) == pytest.approx(5.0, rel=1e-3)

    def test_translation_is_returned(self, unit_cube):
        """Test the optimal translation undoes the shift"""
        moved = unit_cube.translate(np.array([0.0, -2.0, 1.0]))
        _, x = translative_hausdorff(moved, unit_cube, return_translation=True)
        assert np.allclose(x, [0.0, -2.0, 1.0], atol=1e-6)

    def test_nested_cubes(self, unit_cube):
        """Test the distance of concentric cubes of side 1 and 2 is sqrt(3) / 2"""
        assert hausdorff(unit_cube, cube(2.0)) == pytest.approx(sqrt(3) / 2, abs=1e-3)

    def test_symmetry(self, unit_cube):
        """Test hausdorff(K, L) = hausdorff(L, K)"""
        other = pyramid(1.0, 1.5)
        assert hausdorff(unit_cube, other) == pytest.approx(hausdorff(other, unit_cube))

    def test_dimension_mismatch(self, unit_cube):
        """Test bodies in different dimensions are rejected"""
        with pytest.raises(ValueError):
            hausdorff(unit_cube, regular_polygon(4))


class TestRadii:

    def test_cube_radii_contain_cube(self, unit_cube, cube_measure):
        """Test r B^3 inside the cube inside R B^3"""
        inner, outer = inclusion_radii(surface_tensor(cube_measure, 2), unit_cube.surface_area)
        assert 0 < inner <= 0.5
        assert outer >= sqrt(3) / 2

    @pytest.mark.parametrize("seed", range(20))
    def test_random_polytopes_lie_in_annulus(self, seed):
        """Test r B^3 inside K - c(K) inside R B^3 for random hulls"""
        points = np.random.default_rng(seed).standard_normal((15, 3))
        body = Polytope.from_vertices(points * [1.0, 1.5, 0.7])
        inner, outer = inclusion_radii(surface_tensor(body.surface_measure(), 2),
                                       body.surface_area)
        assert 0 < inner < outer
        assert contained_between(body, inner, outer)

    def test_noise_robust_radii(self):
        """Test the robust annulus is (r / 2, 2R)"""
        assert noise_robust_radii(0.4, 3.0) == (0.2, 6.0)

    def test_ellipsoid_elongation(self):
        """Test the long axis of the (1, 1, 2) ellipsoid is e_3"""
        measure = surface_area_measure(BodySpec.ellipsoid(), "medium")
        axis = elongation_axis(surface_tensor(measure, 2))
        assert abs(axis[2]) > 0.99
        assert axis[np.argmax(np.abs(axis))] > 0

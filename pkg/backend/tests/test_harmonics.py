# File: backend/tests/test_harmonics.py

from math import pi, sqrt

import numpy as np
import pytest

from core.exceptions import (IndexOutOfRangeError, QuadratureExactnessError,
                             UnsupportedDimensionError)
from core.harmonics.basis import HarmonicBasis, eval_harmonic, harmonic_basis
from core.harmonics.projection import project
from core.harmonics.quadrature import quadrature
from core.harmonics.special import (basis_dim, gegenbauer, projection_constants,
                                    sphere_area, total_dim)


def random_directions(rng, count, dim):
    points = rng.standard_normal((count, dim))
    return points / np.linalg.norm(points, axis=1)[:, None]


class TestSpecialFunctions:

    def test_sphere_areas(self):
        """Test omega_1, omega_2 and omega_3"""
        assert sphere_area(1) == pytest.approx(2.0)
        assert sphere_area(2) == pytest.approx(2 * pi)
        assert sphere_area(3) == pytest.approx(4 * pi)

    @pytest.mark.parametrize("s", [0, 1, 2, 5, 9])
    def test_total_dimension(self, s):
        """Test m_s = 2s + 1 in the plane and (s + 1)^2 in space"""
        assert total_dim(2, s) == 2 * s + 1
        assert total_dim(3, s) == (s + 1) ** 2

    def test_basis_dimension_sums_to_total(self):
        """Test sum of N(n, k) over k <= s equals m_s"""
        for n in (2, 3):
            assert sum(basis_dim(n, k) for k in range(7)) == total_dim(n, 6)

    def test_unsupported_dimension(self):
        """Test dimension 4 is rejected"""
        with pytest.raises(UnsupportedDimensionError):
            total_dim(4, 2)

    def test_gegenbauer_half_is_legendre(self):
        """Test C_2^{1/2} is the Legendre polynomial P_2"""
        x = np.linspace(-1, 1, 11)
        assert np.allclose(gegenbauer(2, 0.5, x), 1.5 * x ** 2 - 0.5)

    def test_projection_coefficient_of_constants(self):
        """Test the degree-0 multiplier of Pi_k is one"""
        for n in (2, 3):
            _, coefficients = projection_constants(n, 6)
            assert coefficients[0] == pytest.approx(1.0, rel=1e-12)


class TestQuadrature:

    @pytest.mark.parametrize("n", [2, 3])
    def test_weights_sum_to_sphere_area(self, n):
        """Test the weights integrate the constant 1 to omega_n"""
        rule = quadrature(n, 12)
        assert rule.weights.sum() == pytest.approx(sphere_area(n), abs=1e-12)

    def test_monomial_integrals(self):
        """Test exact integrals of x^2 and x^2 y^2 z^2 on S^2"""
        rule = quadrature(3, 6)
        x, y, z = rule.nodes.T
        assert rule.integrate(x ** 2) == pytest.approx(4 * pi / 3, abs=1e-10)
        assert rule.integrate(x ** 2 * y ** 2 * z ** 2) == pytest.approx(4 * pi / 105, abs=1e-10)
        assert rule.integrate(x * y ** 3) == pytest.approx(0.0, abs=1e-10)

    def test_circle_rule_is_equispaced(self):
        """Test the circle rule has exact + 1 nodes of equal weight"""
        rule = quadrature(2, 9)
        assert rule.size == 10
        assert np.allclose(rule.weights, 2 * pi / 10)

    def test_nodes_are_read_only(self):
        """Test cached rules cannot be mutated"""
        rule = quadrature(3, 4)
        with pytest.raises(ValueError):
            rule.weights[0] = 1.0


class TestHarmonicBasis:

    @pytest.mark.parametrize("n", [2, 3])
    def test_gram_matrix_is_identity(self, n):
        """Test orthonormality up to degree 8 with a rule exact to degree 16"""
        rule = quadrature(n, 16)
        values = harmonic_basis(n, 8).evaluate(rule.nodes)
        gram = values.T @ (rule.weights[:, None] * values)
        assert np.max(np.abs(gram - np.eye(len(gram)))) < 1e-9

    @pytest.mark.parametrize("n", [2, 3])
    def test_addition_theorem(self, n, rng):
        """Test sum_j H_{nkj}(u)^2 = N(n, k) / omega_n at random directions"""
        points = random_directions(rng, 100, n)
        basis = harmonic_basis(n, 8)
        for k in range(9):
            block = basis.evaluate_degree(points, k)
            expected = basis_dim(n, k) / sphere_area(n)
            assert np.max(np.abs((block ** 2).sum(axis=1) - expected)) < 1e-9

    def test_constant_harmonic(self):
        """Test H_{n01} = 1 / sqrt(omega_n)"""
        assert eval_harmonic(3, 0, 1, np.array([0.0, 0.0, 1.0])) == pytest.approx(
            1 / sqrt(4 * pi))
        assert eval_harmonic(2, 0, 1, np.array([1.0, 0.0])) == pytest.approx(1 / sqrt(2 * pi))

    def test_degree_one_is_linear(self):
        """Test degree-1 harmonics on S^2 are multiples of coordinates"""
        u = np.array([0.0, 0.0, 1.0])
        values = [eval_harmonic(3, 1, j, u) for j in (1, 2, 3)]
        assert max(abs(v) for v in values) == pytest.approx(sqrt(3 / (4 * pi)))
        assert sorted(abs(v) for v in values)[:2] == pytest.approx([0.0, 0.0], abs=1e-12)

    def test_cross_degree_orthogonality(self):
        """Test H_{3,4,j} and H_{3,2,i} integrate to zero against each other"""
        rule = quadrature(3, 6)
        basis = HarmonicBasis(3, 4)
        inner = (basis.evaluate_degree(rule.nodes, 4).T
                 @ (rule.weights[:, None] * basis.evaluate_degree(rule.nodes, 2)))
        assert np.max(np.abs(inner)) < 1e-10

    def test_validated_normalizers_agree(self):
        """Test closed-form normalizers pass the quadrature check unchanged"""
        closed = HarmonicBasis(3, 6)
        validated = HarmonicBasis(3, 6, validate=True)
        for key, value in closed.normalizers.items():
            assert validated.normalizers[key] == pytest.approx(value, rel=1e-10)

    def test_rejects_non_unit_vectors(self):
        """Test evaluation off the sphere fails"""
        with pytest.raises(ValueError):
            eval_harmonic(3, 2, 1, np.array([1.0, 1.0, 0.0]))

    def test_rejects_bad_index(self):
        """Test j outside 1..N(n, k) fails"""
        with pytest.raises(IndexOutOfRangeError):
            eval_harmonic(3, 2, 6, np.array([1.0, 0.0, 0.0]))
        with pytest.raises(IndexOutOfRangeError):
            eval_harmonic(2, 0, 2, np.array([1.0, 0.0]))


class TestProjection:

    @pytest.mark.parametrize("method", ["kernel", "harmonic"])
    def test_constant_is_fixed(self, method):
        """Test Pi_k 1 = 1"""
        rule = quadrature(3, 10)
        projected = project(np.ones(rule.size), rule, 5, method=method)
        assert np.allclose(projected, 1.0, atol=1e-10)

    @pytest.mark.parametrize("n", [2, 3])
    def test_kernel_and_harmonic_paths_agree(self, n, rng):
        """Test both projection paths give the same values"""
        rule = quadrature(n, 14)
        f = np.exp(rule.nodes[:, 0]) + rule.nodes[:, 1] ** 3
        points = random_directions(rng, 25, n)
        kernel = project(f, rule, 6, method="kernel", points=points)
        harmonic = project(f, rule, 6, method="harmonic", points=points)
        assert np.max(np.abs(kernel - harmonic)) < 1e-8

    def test_insufficient_exactness(self):
        """Test a rule exact below 2k is refused"""
        rule = quadrature(3, 7)
        with pytest.raises(QuadratureExactnessError):
            project(np.ones(rule.size), rule, 4)

    def test_unknown_method(self):
        """Test unknown projection methods are rejected"""
        rule = quadrature(2, 8)
        with pytest.raises(ValueError):
            project(np.ones(rule.size), rule, 2, method="fourier")

# File: backend/tests/test_reconstruct.py

import numpy as np
import pytest

from core.exceptions import InfeasibleMinkowskiDataError, NoExactFitError
from core.harmonics.special import total_dim
from core.measures.classify import classify, first_moment
from core.models import (CaseTag, DiscreteMeasure, FitMode, FitTarget, HarmonicVector,
                         MeasureTag)
from core.reconstruct.algorithms import (ShapeReconstructor, algorithm_hiv_lsq,
                                         algorithm_surface_tensor, lower_dimensional_body)
from core.reconstruct.config import SolverConfig
from core.reconstruct.fitting import (MeasureFitter, PenalizedResidual,
                                      angles_from_directions, closed_weights,
                                      descend_on_face, directions_from_angles,
                                      harmonic_values)
from core.reconstruct.noise import (convergence_rate, noise_model, relative_sigma,
                                    summability_driver, variance_schedule)
from core.tensors.bijection import harmonic_map, harmonic_vector
from core.tensors.moments import tensor_set


class TestSolverConfig:

    def test_defaults(self):
        """Test default penalties grow by the penalty factor"""
        config = SolverConfig()
        assert config.penalties() == [1.0, 10.0, 100.0, 1000.0]
        assert config.atoms is None

    def test_invalid_values(self):
        """Test nonsensical settings are rejected"""
        with pytest.raises(ValueError):
            SolverConfig(starts=0)
        with pytest.raises(ValueError):
            SolverConfig(exact_tol=0.0)
        with pytest.raises(ValueError):
            SolverConfig(penalty_factor=0.5)

    def test_unknown_keys(self):
        """Test from_dict refuses settings it does not know"""
        with pytest.raises(ValueError):
            SolverConfig.from_dict({'starts': 3, 'temperature': 1.0})

    def test_file_round_trip(self, tmp_path):
        """Test saving and loading a configuration"""
        path = tmp_path / "solver.json"
        SolverConfig(starts=5, seed=9).save_to_file(str(path))
        loaded = SolverConfig.from_file(str(path))
        assert loaded.starts == 5
        assert loaded.seed == 9


class TestParametrization:

    @pytest.mark.parametrize("dim", [2, 3])
    def test_angles_invert_directions(self, dim, rng):
        """Test directions survive the trip through angles"""
        directions = rng.standard_normal((10, dim))
        directions /= np.linalg.norm(directions, axis=1)[:, None]
        again = directions_from_angles(angles_from_directions(directions), dim)
        assert np.allclose(again, directions, atol=1e-12)

    @pytest.mark.parametrize("dim,degree", [(2, 3), (3, 2), (3, 4)])
    def test_jacobian_matches_finite_differences(self, dim, degree, rng):
        """Test the analytic Jacobian of the penalized residual"""
        fmap = harmonic_map(dim, degree)
        atoms = 5
        residual_fn = PenalizedResidual(fmap, rng.standard_normal(fmap.size), atoms)
        residual_fn.rho = 10.0
        x = rng.uniform(0.3, 2.5, atoms * (dim - 1) + atoms)
        analytic = residual_fn.jacobian(x)
        step = 1e-6
        numeric = np.empty_like(analytic)
        for i in range(len(x)):
            up, down = x.copy(), x.copy()
            up[i] += step
            down[i] -= step
            numeric[:, i] = (residual_fn(up) - residual_fn(down)) / (2 * step)
        assert np.max(np.abs(analytic - numeric)) < 1e-6

    def test_residual_layout(self, rng):
        """Test the residual stacks harmonic misfit and closure"""
        fmap = harmonic_map(3, 2)
        residual_fn = PenalizedResidual(fmap, np.zeros(fmap.size), 4)
        x = rng.uniform(0.1, 3.0, 4 * 2 + 4)
        assert residual_fn(x).shape == (fmap.size + 3,)


class TestMeasureFitter:

    def test_zero_target(self, fast_config):
        """Test the zero target gives the zero measure without optimizing"""
        target = FitTarget(3, 2, np.zeros(9))
        outcome = MeasureFitter(fast_config).fit(target)
        assert outcome.measure.size == 0
        assert outcome.residual == 0.0

    def test_exact_target_rejects_degree_one(self):
        """Test exact targets must have vanishing degree-1 entries"""
        values = np.zeros(9)
        values[1] = 1.0
        with pytest.raises(ValueError):
            FitTarget(3, 2, values, FitMode.EXACT)

    @pytest.mark.slow
    def test_exact_fit_of_cube(self, cube_measure, fast_config):
        """Test the cube's degree-2 target is fitted exactly by a closed measure"""
        target = FitTarget.from_harmonics(harmonic_vector(cube_measure, 2))
        fitter = MeasureFitter(fast_config)
        outcome = fitter.fit(target)
        assert outcome.residual <= 1e-6 * target.norm()
        assert np.all(outcome.measure.weights >= 0)
        closure = np.linalg.norm(outcome.measure.weights @ outcome.measure.atoms)
        assert closure <= 1e-8 * outcome.measure.total_mass
        fitted = tensor_set(outcome.measure, 2).vector()
        assert np.allclose(fitted, tensor_set(cube_measure, 2).vector(), atol=1e-6)
        assert fitter.get_statistics()['fits'] == 1

    @pytest.mark.slow
    def test_ball_target(self, ball_measure, fast_config):
        """Test sigma's moments up to degree 4 are matched by a few atoms"""
        target = FitTarget.from_harmonics(harmonic_vector(ball_measure, 4))
        outcome = MeasureFitter(fast_config).fit(target)
        assert outcome.residual <= 1e-6 * target.norm()
        assert outcome.measure.size <= total_dim(3, 4)

    def test_unreachable_exact_target(self):
        """Test a target outside the moment cone raises NoExactFitError"""
        values = np.zeros(9)
        values[0] = -1.0
        config = SolverConfig(starts=2, penalty_stages=2, max_nfev=200)
        with pytest.raises(NoExactFitError):
            MeasureFitter(config).fit(FitTarget(3, 2, values, FitMode.EXACT))

    def test_harmonic_values_of_empty_measure(self):
        """Test the zero measure maps to the zero vector"""
        assert np.all(harmonic_values(harmonic_map(2, 3), DiscreteMeasure.zero(2)) == 0)

    @pytest.mark.parametrize("seed", range(40))
    def test_polish_keeps_measures_closed(self, seed):
        """Test polished weights of few random atoms against noisy targets are closed"""
        rng = np.random.default_rng(seed)
        fmap = harmonic_map(3, 4)
        atoms = rng.standard_normal((6, 3))
        atoms /= np.linalg.norm(atoms, axis=1)[:, None]
        measure = DiscreteMeasure(atoms, rng.uniform(0.1, 1.0, 6))
        target = harmonic_values(fmap, measure) + rng.normal(0.0, 0.05, fmap.size)

        polished = MeasureFitter(SolverConfig()).polish(fmap, target, measure)
        assert np.all(polished.weights > 0)
        assert classify(polished).tag in (MeasureTag.FULL_DIM, MeasureTag.ZERO)
        closure = np.linalg.norm(first_moment(polished))
        assert closure <= 1e-8 * max(polished.total_mass, 1e-300)

    def test_polish_without_closed_combination(self):
        """Test atoms in an open half-space polish to the zero measure"""
        fmap = harmonic_map(3, 2)
        atoms = np.array([[1.0, 0, 0], [0, 1.0, 0], [0, 0, 1.0]])
        measure = DiscreteMeasure(atoms, np.ones(3))
        polished = MeasureFitter(SolverConfig()).polish(fmap, harmonic_values(fmap, measure),
                                                        measure)
        assert polished.size == 0

    def test_polish_never_worsens_closed_start(self, cube_measure):
        """Test the polish of a closed measure fits at least as well as the measure itself"""
        fmap = harmonic_map(3, 3)
        rng = np.random.default_rng(11)
        target = harmonic_values(fmap, cube_measure) + rng.normal(0.0, 0.1, fmap.size)
        polished = MeasureFitter(SolverConfig()).polish(fmap, target, cube_measure)
        before = np.linalg.norm(harmonic_values(fmap, cube_measure) - target)
        after = np.linalg.norm(harmonic_values(fmap, polished) - target)
        assert after <= before + 1e-12
        assert np.linalg.norm(first_moment(polished)) <= 1e-8 * polished.total_mass

    def test_closed_weights_projection(self):
        """Test an almost closed octahedron measure is projected exactly onto closure"""
        atoms = np.vstack([np.eye(3), -np.eye(3)])
        alpha = closed_weights(atoms, np.array([1.0, 1.0, 1.0, 0.9, 1.0, 1.1]))
        assert np.all(alpha > 0)
        assert np.allclose(alpha @ atoms, 0.0, atol=1e-14)
        assert alpha == pytest.approx([0.95, 1.0, 1.05, 0.95, 1.0, 1.05])

    def test_descend_on_face_reaches_face_minimum(self):
        """Test the descent on the octahedron face matches the unconstrained solve"""
        fmap = harmonic_map(3, 2)
        atoms = np.vstack([np.eye(3), -np.eye(3)])
        goal = np.array([2.0, 1.0, 3.0, 2.0, 1.0, 3.0])
        design = fmap.design(atoms).T
        alpha = descend_on_face(design, atoms, design @ goal, np.ones(6))
        assert alpha == pytest.approx(goal, abs=1e-10)


class TestReconstruction:

    def test_lower_dimensional_square(self):
        """Test the Case 2 body is a centered square of area alpha"""
        body = lower_dimensional_body(np.array([0.0, 0.0, 1.0]), 2.25)
        assert body.kind == "flat"
        assert body.surface_area == pytest.approx(4.5)
        assert np.allclose(body.vertices[:, 2], 0.0)

    def test_lower_dimensional_segment(self):
        """Test the Case 2 body in the plane is a segment of length alpha"""
        body = lower_dimensional_body(np.array([1.0, 0.0]), 3.0)
        assert body.surface_area == pytest.approx(6.0)
        assert np.allclose(body.vertices[:, 0], 0.0)

    def test_zero_measurements_give_point(self, fast_config):
        """Test Case 1 for the zero harmonic vector"""
        result = algorithm_hiv_lsq(HarmonicVector(3, 2, np.zeros(9)), fast_config)
        assert result.case is CaseTag.CASE1_POINT
        assert result.polytope.kind == "point"
        assert result.to_dict()['case'] == "Case1_Point"

    def test_needs_degree_two(self, fast_config):
        """Test s_o = 1 is refused"""
        with pytest.raises(ValueError):
            algorithm_hiv_lsq(HarmonicVector(3, 1, np.zeros(4)), fast_config)

    def test_minkowski_closure_follows_tol_rel(self, cube_measure):
        """Test the Minkowski step accepts exactly the closure that classification accepts"""
        weights = cube_measure.weights.copy()
        weights[np.argmax(cube_measure.atoms[:, 0])] += 6e-7
        measure = DiscreteMeasure(cube_measure.atoms, weights)
        with pytest.raises(InfeasibleMinkowskiDataError):
            ShapeReconstructor(SolverConfig())._minkowski(measure)
        body = ShapeReconstructor(SolverConfig(tol_rel=1e-6))._minkowski(measure)
        assert body.facet_count == 6

    @pytest.mark.slow
    def test_cube_from_surface_tensors(self, cube_measure, fast_config):
        """Test the output polytope reproduces the cube's tensors up to rank 2"""
        tensors = tensor_set(cube_measure, 2)
        result = algorithm_surface_tensor(tensors, fast_config)
        assert result.case is CaseTag.CASE3_POLYTOPE
        assert result.polytope.facet_count <= total_dim(3, 2)
        assert result.diagnostics['tensor_fidelity'] <= 1e-4
        record = result.to_dict()
        assert record['kind'] == 'result'
        assert 'polytope' in record

    @pytest.mark.slow
    def test_flat_body_measurements(self, fast_config):
        """Test measurements of a flat body give Case 2"""
        flat = DiscreteMeasure(np.array([[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]]), np.ones(2))
        result = algorithm_hiv_lsq(harmonic_vector(flat, 2), fast_config)
        assert result.case is CaseTag.CASE2_LOWER_DIM
        assert result.polytope.surface_area == pytest.approx(2.0, rel=1e-6)

    @pytest.mark.slow
    def test_planar_measure_has_no_output(self, fast_config):
        """Test a closed measure spanning a plane of R^3 gives Case 4"""
        atoms = np.array([[1.0, 0, 0], [-1.0, 0, 0], [0, 1.0, 0], [0, -1.0, 0]])
        reconstructor = ShapeReconstructor(fast_config)
        planar = DiscreteMeasure(atoms, np.ones(4))
        result = reconstructor.from_harmonics(harmonic_vector(planar, 2))
        assert result.case is CaseTag.CASE4_NO_OUTPUT
        assert result.polytope is None
        assert not result.has_output
        assert reconstructor.get_statistics()['cases']['Case4_NoOutput'] == 1

    @pytest.mark.slow
    def test_noiseless_pyramid_measurements(self, pyramid_measure, fast_config):
        """Test exact measurements of a pyramid give a Case 3 polytope"""
        result = algorithm_hiv_lsq(harmonic_vector(pyramid_measure, 3), fast_config)
        assert result.case is CaseTag.CASE3_POLYTOPE
        assert result.diagnostics['harmonic_gap'] < 1e-4


class TestNoise:

    def test_degree_one_is_noise_free(self):
        """Test noise leaves the degree-1 block at zero"""
        noise = noise_model(3, 4, 0.3, seed=1)
        assert np.all(noise.block(1) == 0.0)
        assert np.any(noise.block(2) != 0.0)

    def test_reproducible(self):
        """Test equal seeds give equal noise"""
        first = noise_model(2, 5, 0.1, seed=7).values
        second = noise_model(2, 5, 0.1, seed=7).values
        assert np.array_equal(first, second)

    def test_per_degree_sigma(self):
        """Test a per-degree sigma silences the degrees set to zero"""
        noise = noise_model(3, 2, [0.0, 0.0, 1.0], seed=2)
        assert np.all(noise.block(0) == 0.0)
        assert np.any(noise.block(2) != 0.0)

    def test_negative_sigma(self):
        """Test negative standard deviations are rejected"""
        with pytest.raises(ValueError):
            noise_model(3, 2, -1.0)

    def test_relative_sigma(self, cube_measure):
        """Test sigmas are fractions of the degree-0 entry"""
        h = harmonic_vector(cube_measure, 2)
        sigmas = relative_sigma(h, (0.0, 0.1))
        assert sigmas == pytest.approx([0.0, 0.1 * h.values[0]])

    def test_variance_schedules(self):
        """Test the two admissible variance decays"""
        assert variance_schedule(3, 4, 0.5) == pytest.approx(4 ** -5.5)
        assert variance_schedule(3, 4, 0.5, "probability") == pytest.approx(4 ** -4.5)
        with pytest.raises(ValueError):
            variance_schedule(3, 4, 1.5)

    def test_summability_driver_without_noise(self):
        """Test the driver vanishes for zero variance"""
        assert summability_driver(3, 3, sigma2=0.0, draws=5) == 0.0

    def test_summability_driver_decreases(self):
        """Test m_s E|eps|^2 decreases along the almost-sure schedule"""
        values = [summability_driver(3, s, draws=200, seed=4) for s in (2, 4, 8)]
        assert values[0] > values[1] > values[2]

    def test_convergence_rate(self):
        """Test the reference rate s^-((1 - eps) / (4n))"""
        assert convergence_rate(3, 16, 0.5) == pytest.approx(16 ** (-0.5 / 12))

    @pytest.mark.slow
    def test_empirical_variance(self):
        """Test the sample variance of 10^4 draws is within 5% of sigma^2"""
        sigma = 0.3
        seeds = np.random.SeedSequence(17).spawn(10_000)
        draws = np.array([noise_model(3, 2, sigma, s).values for s in seeds])
        noisy = np.delete(draws, [1, 2, 3], axis=1)
        assert np.var(noisy) == pytest.approx(sigma ** 2, rel=0.05)
        assert np.all(draws[:, 1:4] == 0.0)


@pytest.mark.slow
class TestNoisyFit:

    @pytest.fixture
    def noisy_target(self, pyramid_measure):
        exact = harmonic_vector(pyramid_measure, 2)
        noise = noise_model(3, 2, relative_sigma(exact, (0.05,))[0], seed=8)
        return exact + noise

    def test_same_seed_same_fit(self, noisy_target, fast_config):
        """Test two runs with the same seed fit equal harmonic vectors"""
        first = algorithm_hiv_lsq(noisy_target, fast_config)
        second = algorithm_hiv_lsq(noisy_target, fast_config)
        h1 = harmonic_vector(first.measure, 2).values
        h2 = harmonic_vector(second.measure, 2).values
        assert np.allclose(h1, h2, atol=1e-6)
        assert first.case is second.case

    def test_fitted_moments_do_not_depend_on_seed(self, noisy_target):
        """Test the closest point of the moment cone is found from different seeds"""
        fits = [MeasureFitter(SolverConfig(starts=6, seed=seed)).fit(
                    FitTarget.from_harmonics(noisy_target, FitMode.NOISY))
                for seed in (1, 2)]
        h1, h2 = (harmonic_vector(fit.measure, 2).values for fit in fits)
        tolerance = 1e-6 * noisy_target.norm()
        assert np.allclose(h1, h2, atol=tolerance)
        assert fits[0].residual == pytest.approx(fits[1].residual, abs=tolerance)

    @pytest.mark.parametrize("case", range(20))
    def test_halved_noise_fits_better(self, case, cube_measure, pyramid_measure, fast_config):
        """Test the residual does not grow when the noise vector is halved"""
        measure = cube_measure if case % 2 == 0 else pyramid_measure
        exact = harmonic_vector(measure, 2)
        noise = noise_model(3, 2, relative_sigma(exact, (0.2,))[0], seed=case)
        fitter = MeasureFitter(fast_config)
        full = fitter.fit(FitTarget.from_harmonics(exact + noise, FitMode.NOISY))
        half = fitter.fit(FitTarget.from_harmonics(exact + 0.5 * noise.values, FitMode.NOISY))
        assert half.residual <= full.residual + 1e-6 * exact.norm()

"""
Fitting a discrete measure to a harmonic target.

The fit minimizes

    || sum_j alpha_j H(u_j) - target ||^2      over alpha_j >= 0, |u_j| = 1,
                                               sum_j alpha_j u_j = 0,

where H(u) is the vector of all harmonics up to degree s_o. The harmonic vector
of a measure is F times its moment vector with F invertible, so for a target
coming from exact tensors the harmonic objective is zero exactly where the
moment objective is. The harmonic form is used in both modes: its rows are
orthonormal functions, while the raw moment coordinates mix scales
s! omega_{s+1} that differ by orders of magnitude at moderate s_o.

Unit vectors are parametrized by angles and weights by alpha = beta^2; the
centroid constraint enters as a penalty rho |sum alpha_j u_j|^2 with rho
increasing over stages. A final polish solves for the weights alone with
bounds and then exactly inside the closed cone {alpha >= 0, sum alpha u = 0}.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import sqrt
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np
from scipy.linalg import null_space
from scipy.optimize import least_squares, lsq_linear

from core.exceptions import FitError, NoExactFitError
from core.harmonics.special import sphere_area, total_dim
from core.minkowski.atoms import merge_atoms, prune_atoms
from core.models import DiscreteMeasure, FitMode, FitTarget
from core.reconstruct.config import SolverConfig
from core.tensors.bijection import HarmonicMap, harmonic_map

logger = logging.getLogger(__name__)

POLISH_WEIGHT = 1e4


# ============= PARAMETRIZATION =============


def directions_from_angles(angles: np.ndarray, dim: int) -> np.ndarray:
    """
    Unit vectors from angles.

    n = 2: t -> (cos t, sin t); n = 3: (theta, phi) ->
    (sin theta sin phi, sin theta cos phi, cos theta).
    """
    angles = np.asarray(angles, dtype=float).reshape(-1, dim - 1)
    if dim == 2:
        t = angles[:, 0]
        return np.column_stack([np.cos(t), np.sin(t)])
    theta, phi = angles[:, 0], angles[:, 1]
    return np.column_stack([
        np.sin(theta) * np.sin(phi),
        np.sin(theta) * np.cos(phi),
        np.cos(theta),
    ])


def angles_from_directions(directions: np.ndarray) -> np.ndarray:
    """Inverse of directions_from_angles, shape (N, n - 1)"""
    directions = np.atleast_2d(np.asarray(directions, dtype=float))
    if directions.shape[1] == 2:
        return np.arctan2(directions[:, 1], directions[:, 0])[:, None]
    theta = np.arccos(np.clip(directions[:, 2], -1.0, 1.0))
    phi = np.arctan2(directions[:, 0], directions[:, 1])
    return np.column_stack([theta, phi])


def direction_derivatives(angles: np.ndarray, dim: int) -> np.ndarray:
    """du/d(angle), shape (N, n - 1, n)"""
    angles = np.asarray(angles, dtype=float).reshape(-1, dim - 1)
    if dim == 2:
        t = angles[:, 0]
        return np.column_stack([-np.sin(t), np.cos(t)])[:, None, :]
    theta, phi = angles[:, 0], angles[:, 1]
    d_theta = np.column_stack([
        np.cos(theta) * np.sin(phi),
        np.cos(theta) * np.cos(phi),
        -np.sin(theta),
    ])
    d_phi = np.column_stack([
        np.sin(theta) * np.cos(phi),
        -np.sin(theta) * np.sin(phi),
        np.zeros_like(theta),
    ])
    return np.stack([d_theta, d_phi], axis=1)


class PenalizedResidual:
    """
    Residual [G^T alpha - target; sqrt(rho) U^T alpha] and its Jacobian.

    Parameters x = (angles of all atoms, row-major; beta), alpha = beta^2.
    """

    def __init__(self, fmap: HarmonicMap, target: np.ndarray, atoms: int):
        self.fmap = fmap
        self.dim = fmap.dim
        self.target = target
        self.atoms = atoms
        self.rho = 1.0

    def split(self, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        cut = self.atoms * (self.dim - 1)
        return x[:cut].reshape(self.atoms, self.dim - 1), x[cut:]

    def pack(self, angles: np.ndarray, beta: np.ndarray) -> np.ndarray:
        return np.concatenate([np.asarray(angles).ravel(), np.asarray(beta)])

    def __call__(self, x: np.ndarray) -> np.ndarray:
        angles, beta = self.split(x)
        alpha = beta ** 2
        directions = directions_from_angles(angles, self.dim)
        fitted = self.fmap.design(directions).T @ alpha
        closure = directions.T @ alpha
        return np.concatenate([fitted - self.target, sqrt(self.rho) * closure])

    def jacobian(self, x: np.ndarray) -> np.ndarray:
        angles, beta = self.split(x)
        alpha = beta ** 2
        directions = directions_from_angles(angles, self.dim)
        d_dir = direction_derivatives(angles, self.dim)
        design = self.fmap.design(directions)
        mono_jac = self.fmap.monomial_jacobian(directions)

        # d monomials / d angle, then through F
        tangent = np.einsum('jan,jmn->jam', d_dir, mono_jac)
        d_harm = (tangent @ self.fmap.matrix.T) * alpha[:, None, None]
        d_close = d_dir * alpha[:, None, None]

        n_angles = self.atoms * (self.dim - 1)
        top = np.empty((len(self.target), n_angles + self.atoms))
        top[:, :n_angles] = d_harm.reshape(n_angles, -1).T
        top[:, n_angles:] = (design * (2.0 * beta)[:, None]).T
        bottom = np.empty((self.dim, n_angles + self.atoms))
        bottom[:, :n_angles] = d_close.reshape(n_angles, -1).T
        bottom[:, n_angles:] = (directions * (2.0 * beta)[:, None]).T
        return np.vstack([top, sqrt(self.rho) * bottom])


# ============= RESULTS =============


@dataclass
class StartOutcome:
    """Result of one start of the multistart fit (normalized units)"""

    index: int
    measure: DiscreteMeasure
    residual: float
    evaluations: int


@dataclass
class FitOutcome:
    """Best measure of a multistart fit together with per-start diagnostics"""

    measure: DiscreteMeasure
    residual: float
    best_start: int
    start_residuals: List[Optional[float]] = field(default_factory=list)
    evaluations: int = 0

    @property
    def starts_run(self) -> int:
        return sum(1 for r in self.start_residuals if r is not None)


# ============= FITTER =============


class MeasureFitter:
    """
    Multistart fit of a discrete measure in the centroid-closed class to a
    harmonic target.
    """

    def __init__(self, config: Optional[SolverConfig] = None):
        self.config = config or SolverConfig()
        self.stats = {
            'fits': 0,
            'starts': 0,
            'failed_starts': 0,
            'evaluations': 0,
            'best_residuals': [],
        }

    def fit(self, target: FitTarget) -> FitOutcome:
        """
        Fit a measure to the target.

        Returns:
            FitOutcome with the best measure and sqrt of the objective

        Raises:
            FitError: If every start fails
            NoExactFitError: In exact mode, if the best residual exceeds
                exact_tol * |target|
        """
        cfg = self.config
        dim = target.dim
        self.stats['fits'] += 1
        target_norm = target.norm()
        if target_norm == 0.0:
            logger.info("Zero target: returning the zero measure")
            return FitOutcome(DiscreteMeasure.zero(dim), 0.0, 0, [0.0], 0)

        fmap = harmonic_map(dim, target.max_degree)
        normalized = target.values / target_norm
        atoms = cfg.atoms or total_dim(dim, target.max_degree)
        mass = sqrt(sphere_area(dim)) * float(normalized[0])
        if mass <= 0:
            mass = 1.0

        seeds = np.random.SeedSequence(cfg.seed).spawn(cfg.starts)
        start_residuals: List[Optional[float]] = [None] * cfg.starts
        exact_level = cfg.exact_tol
        best: Optional[StartOutcome] = None
        evaluations = 0

        for index, outcome in self._run_starts(fmap, normalized, atoms, mass, seeds):
            if outcome is None:
                self.stats['failed_starts'] += 1
                continue
            self.stats['starts'] += 1
            evaluations += outcome.evaluations
            start_residuals[index] = outcome.residual * target_norm
            logger.debug("Start %d: residual %.3e (%d atoms)",
                         index, start_residuals[index], outcome.measure.size)
            if best is None or outcome.residual < best.residual:
                best = outcome
            if (cfg.stop_on_exact and target.mode is FitMode.EXACT
                    and outcome.residual <= exact_level):
                break

        self.stats['evaluations'] += evaluations
        if best is None:
            raise FitError(f"All {cfg.starts} starts of the measure fit failed")

        residual = best.residual * target_norm
        measure = best.measure.scaled(target_norm)
        self.stats['best_residuals'].append(residual)
        logger.info("Measure fit: residual %.3e from start %d, %d atoms",
                    residual, best.index, measure.size)

        if target.mode is FitMode.EXACT and residual > cfg.exact_tol * target_norm:
            raise NoExactFitError(residual, cfg.exact_tol * target_norm)
        return FitOutcome(measure, residual, best.index, start_residuals, evaluations)

    def _run_starts(self, fmap: HarmonicMap, target: np.ndarray, atoms: int, mass: float,
                    seeds: List[np.random.SeedSequence]
                    ) -> Iterator[Tuple[int, Optional[StartOutcome]]]:
        """Outcomes in start order, lazily, so callers may stop early"""
        jobs = [(i, seed) for i, seed in enumerate(seeds)]
        if self.config.threads == 1:
            for i, seed in jobs:
                yield i, self._safe_start(fmap, target, atoms, mass, i, seed)
            return

        with ThreadPoolExecutor(max_workers=self.config.threads) as pool:
            futures = [pool.submit(self._safe_start, fmap, target, atoms, mass, i, seed)
                       for i, seed in jobs]
            try:
                for i, future in enumerate(futures):
                    yield i, future.result()
            finally:
                for future in futures:
                    future.cancel()

    def _safe_start(self, fmap, target, atoms, mass, index, seed) -> Optional[StartOutcome]:
        try:
            return self._single_start(fmap, target, atoms, mass, index, seed)
        except (FitError, ValueError, np.linalg.LinAlgError, FloatingPointError) as e:
            logger.warning("Start %d failed: %s", index, e)
            return None

    def _single_start(self, fmap: HarmonicMap, target: np.ndarray, atoms: int, mass: float,
                      index: int, seed: np.random.SeedSequence) -> StartOutcome:
        cfg = self.config
        dim = fmap.dim
        rng = np.random.default_rng(seed)
        directions = rng.standard_normal((atoms, dim))
        directions /= np.linalg.norm(directions, axis=1, keepdims=True)
        beta = np.full(atoms, sqrt(mass / atoms))

        residual_fn = PenalizedResidual(fmap, target, atoms)
        x = residual_fn.pack(angles_from_directions(directions), beta)
        evaluations = 0
        for rho in cfg.penalties():
            residual_fn.rho = rho
            x, nfev = self._solve(residual_fn, x)
            evaluations += nfev

        # Refine on the cleaned-up atom set with the strongest penalty
        measure = self._measure(residual_fn, x)
        cleaned = merge_atoms(prune_atoms(measure, cfg.prune_tol), cfg.refine_merge_tol)
        if 0 < cleaned.size < measure.size:
            residual_fn = PenalizedResidual(fmap, target, cleaned.size)
            residual_fn.rho = cfg.penalties()[-1]
            x = residual_fn.pack(angles_from_directions(cleaned.atoms),
                                 np.sqrt(cleaned.weights))
            x, nfev = self._solve(residual_fn, x)
            evaluations += nfev
            measure = self._measure(residual_fn, x)

        measure = self.polish(fmap, target, measure)
        fitted = harmonic_values(fmap, measure)
        residual = float(np.linalg.norm(fitted - target))
        return StartOutcome(index, measure, residual, evaluations)

    def _solve(self, residual_fn: PenalizedResidual, x: np.ndarray) -> Tuple[np.ndarray, int]:
        cfg = self.config
        result = least_squares(
            residual_fn, x, jac=residual_fn.jacobian, method='trf',
            ftol=cfg.ftol, xtol=cfg.xtol, gtol=cfg.gtol, max_nfev=cfg.max_nfev,
        )
        if not np.all(np.isfinite(result.x)):
            raise ValueError("least_squares returned non-finite parameters")
        return result.x, int(result.nfev)

    @staticmethod
    def _measure(residual_fn: PenalizedResidual, x: np.ndarray) -> DiscreteMeasure:
        angles, beta = residual_fn.split(x)
        return DiscreteMeasure(directions_from_angles(angles, residual_fn.dim), beta ** 2)

    def polish(self, fmap: HarmonicMap, target: np.ndarray,
               measure: DiscreteMeasure) -> DiscreteMeasure:
        """
        Re-fit the weights for fixed atoms inside the closed cone
        {alpha >= 0, sum alpha_j u_j = 0}.

        A bounded least-squares solve with the closure as a weighted row gives a
        start; it is projected onto the cone by dropping atoms, and an active-set
        descent then minimizes |G^T alpha - target| over the face of the cone
        spanned by the remaining atoms. When the atoms admit no closed positive
        combination the result is the zero measure.

        Raises:
            FitError: If the polished weights miss the closure by more than
                tol_rel times their mass
        """
        measure = prune_atoms(measure, self.config.prune_tol)
        if measure.size == 0:
            return measure
        directions = measure.atoms
        design = fmap.design(directions).T
        system = np.vstack([design, POLISH_WEIGHT * directions.T])
        rhs = np.concatenate([target, np.zeros(fmap.dim)])
        result = lsq_linear(system, rhs, bounds=(0.0, np.inf), method='bvls')

        alpha = closed_weights(directions, np.clip(result.x, 0.0, None))
        alpha = descend_on_face(design, directions, target, alpha)
        alpha = closed_weights(directions, alpha)

        keep = alpha > 0
        if not np.any(keep):
            return DiscreteMeasure.zero(fmap.dim)
        polished = DiscreteMeasure(directions[keep], alpha[keep])
        closure = float(np.linalg.norm(polished.weights @ polished.atoms))
        if closure > self.config.tol_rel * polished.total_mass:
            raise FitError(
                f"Polished weights miss the closure by {closure:.3e} "
                f"(mass {polished.total_mass:.3e})"
            )
        return polished

    def get_statistics(self) -> Dict:
        return dict(self.stats)


def harmonic_values(fmap: HarmonicMap, measure: DiscreteMeasure) -> np.ndarray:
    """Harmonic vector of a measure through the map's design matrix"""
    if measure.size == 0:
        return np.zeros(fmap.size)
    return fmap.design(measure.atoms).T @ measure.weights


def closed_weights(directions: np.ndarray, alpha: np.ndarray) -> np.ndarray:
    """
    Nonnegative weights with sum alpha_j u_j = 0, obtained from alpha by
    projecting its positive part onto the null space of U^T and dropping atoms
    that turn nonpositive. Zero when no atoms survive.
    """
    alpha = np.asarray(alpha, dtype=float).copy()
    support = alpha > 0
    while np.any(support):
        index = np.flatnonzero(support)
        spanned = directions[index].T
        weights = alpha[index] - np.linalg.pinv(spanned) @ (spanned @ alpha[index])
        negative = weights <= 0
        if not np.any(negative):
            alpha[:] = 0.0
            alpha[index] = weights
            return alpha
        support[index[negative]] = False
    return np.zeros_like(alpha)


def descend_on_face(design: np.ndarray, directions: np.ndarray, target: np.ndarray,
                    alpha: np.ndarray) -> np.ndarray:
    """
    Minimize |design alpha - target| over closed nonnegative weights supported
    on the support of alpha, which must itself be closed and nonnegative.

    Each round solves the unconstrained problem on the null space of the
    support's directions and moves towards its solution until a weight hits
    zero; that atom leaves the support. Every iterate stays closed and the
    objective never increases.
    """
    alpha = np.asarray(alpha, dtype=float).copy()
    support = alpha > 0
    for _ in range(len(alpha)):
        if not np.any(support):
            break
        index = np.flatnonzero(support)
        basis = null_space(directions[index].T)
        if basis.shape[1] == 0:
            alpha[:] = 0.0
            break
        coefficients = np.linalg.lstsq(design[:, index] @ basis, target, rcond=None)[0]
        goal = basis @ coefficients
        current = alpha[index]
        blocked = goal < 0
        if not np.any(blocked):
            alpha[index] = goal
            break
        ratios = current[blocked] / (current[blocked] - goal[blocked])
        step = float(np.min(ratios))
        moved = current + step * (goal - current)
        moved[np.flatnonzero(blocked)[np.argmin(ratios)]] = 0.0
        moved[moved < 0] = 0.0
        alpha[index] = moved
        support = alpha > 0
    return alpha


def fit_measure(target: FitTarget,
                config: Optional[SolverConfig] = None) -> Tuple[DiscreteMeasure, float]:
    """
    Discrete measure in the centroid-closed class closest to the target.

    Args:
        target: Harmonic target and fit mode
        config: Solver settings (defaults to SolverConfig())

    Returns:
        (measure, residual) with residual = |target - h(measure)|

    Raises:
        FitError: If the optimizer fails for every start
        NoExactFitError: In exact mode when no start reaches exact_tol
    """
    outcome = MeasureFitter(config).fit(target)
    return outcome.measure, outcome.residual

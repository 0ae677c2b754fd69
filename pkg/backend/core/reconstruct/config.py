"""
Solver settings shared by the measure fit, the Minkowski step and the
experiment harness.
"""

import json
from dataclasses import asdict, dataclass, fields
from typing import Dict, Optional


@dataclass
class SolverConfig:
    """
    Settings for measure fitting and polytope reconstruction.

    Tolerances named *_tol are relative (to the target norm or the total mass)
    unless stated otherwise.
    """

    # Multistart
    starts: int = 12
    atoms: Optional[int] = None  # None: m_{s_o}
    seed: int = 0
    threads: int = 1
    stop_on_exact: bool = True

    # Centroid penalty rho, multiplied by penalty_factor per stage
    penalty_start: float = 1.0
    penalty_factor: float = 10.0
    penalty_stages: int = 4

    # scipy.optimize.least_squares
    max_nfev: int = 2000
    ftol: float = 1e-15
    xtol: float = 1e-15
    gtol: float = 1e-15

    # Acceptance and clean-up
    exact_tol: float = 1e-6
    merge_tol: float = 1e-6  # radians
    refine_merge_tol: float = 1e-3  # radians
    prune_tol: float = 1e-10

    # Classification
    tol_abs: float = 1e-12
    tol_rel: float = 1e-8

    # Minkowski solver
    mink_max_iter: int = 500
    mink_gtol: float = 1e-11

    def __post_init__(self):
        for name in ('starts', 'penalty_stages', 'max_nfev', 'threads', 'mink_max_iter'):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 1:
                raise ValueError(f"{name} must be a positive integer, got {value!r}")
        if self.atoms is not None and (not isinstance(self.atoms, int) or self.atoms < 1):
            raise ValueError(f"atoms must be None or a positive integer, got {self.atoms!r}")
        for name in ('penalty_start', 'ftol', 'xtol', 'gtol', 'exact_tol', 'merge_tol',
                     'refine_merge_tol', 'prune_tol', 'tol_abs', 'tol_rel', 'mink_gtol'):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)!r}")
        if self.penalty_factor < 1:
            raise ValueError(f"penalty_factor must be >= 1, got {self.penalty_factor}")
        if self.seed < 0:
            raise ValueError(f"seed must be >= 0, got {self.seed}")

    def penalties(self):
        """Penalty weights of the stages, increasing"""
        return [self.penalty_start * self.penalty_factor ** k
                for k in range(self.penalty_stages)]

    def to_dict(self) -> Dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict) -> 'SolverConfig':
        """Create from dictionary; unknown keys are rejected"""
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ValueError(f"Unknown solver settings: {unknown}")
        return cls(**data)

    @classmethod
    def from_file(cls, config_file: str) -> 'SolverConfig':
        """Load configuration from JSON file"""
        with open(config_file, 'r') as f:
            data = json.load(f)
        return cls.from_dict(data)

    def save_to_file(self, config_file: str):
        """Save configuration to JSON file"""
        with open(config_file, 'w') as f:
            json.dump(self.to_dict(), f, indent=2, sort_keys=True)

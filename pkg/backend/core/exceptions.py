"""
Error types for the shapetensor core.

Every error raised on purpose by the library derives from ShapeTensorError so
the CLI can map it to an exit code. Argument errors additionally derive from
ValueError, matching how plain functions reject bad input.
"""

from typing import Optional


class ShapeTensorError(Exception):
    """Base class for all shapetensor errors"""


class UnsupportedDimensionError(ShapeTensorError, ValueError):
    """Raised when an operation is asked for an ambient dimension it lacks"""

    def __init__(self, n: int, supported: tuple = (2, 3)):
        self.n = n
        super().__init__(
            f"Unsupported dimension n={n}; supported: {', '.join(map(str, supported))}"
        )


class IndexOutOfRangeError(ShapeTensorError, ValueError):
    """Raised for a harmonic index (k, j) outside 1 <= j <= N(n, k)"""


class QuadratureExactnessError(ShapeTensorError, ValueError):
    """Raised when a quadrature rule is not exact to the degree required"""

    def __init__(self, required: int, available: int):
        self.required = required
        self.available = available
        super().__init__(
            f"Quadrature exact to degree {available}, need at least {required}"
        )


# ============= GEOMETRY =============


class PolytopeError(ShapeTensorError):
    """Base class for polytope construction failures"""


class UnboundedPolytopeError(PolytopeError):
    """Normals do not positively span R^n"""


class EmptyInteriorError(PolytopeError):
    """Halfspace intersection has no interior point"""


class LinearProgramError(ShapeTensorError):
    """A linear program that should always be solvable failed"""


# ============= MINKOWSKI =============


class MinkowskiError(ShapeTensorError):
    """Base class for Minkowski reconstruction failures"""


class NotFullDimensionalError(MinkowskiError):
    """Measure is not the surface area measure of a full-dimensional body"""


class InfeasibleMinkowskiDataError(MinkowskiError):
    """Weighted normals do not sum to zero within tolerance"""


class MinkowskiConvergenceError(MinkowskiError):
    """Solver stopped before the facet areas matched the targets"""


# ============= RECONSTRUCTION =============


class FitError(ShapeTensorError):
    """Measure fit failed on every start"""


class NoExactFitError(FitError):
    """Exact-mode fit did not reach the zero residual it is guaranteed to have"""

    def __init__(self, residual: float, tolerance: float):
        self.residual = residual
        self.tolerance = tolerance
        super().__init__(
            f"No exact fit found: residual {residual:.3e} > tolerance {tolerance:.3e}"
        )


class ReconstructionError(ShapeTensorError):
    """Reconstruction pipeline reached a state its input rules out"""


class BoundViolationError(ShapeTensorError):
    """A measured quantity exceeded the explicit bound it must satisfy"""

    def __init__(self, measured: float, bound: float, what: str = "bound"):
        self.measured = measured
        self.bound = bound
        super().__init__(f"{what} violated: measured {measured:.6e} > {bound:.6e}")


# ============= I/O =============


class RecordFormatError(ShapeTensorError, ValueError):
    """Input record could not be parsed; carries the offending location"""

    def __init__(self, message: str, source: Optional[str] = None,
                 location: Optional[str] = None):
        self.source = source
        self.location = location
        where = ""
        if source:
            where += f"{source}"
        if location:
            where += f" at {location}"
        super().__init__(f"{where}: {message}" if where else message)


class BasisConstructionError(ShapeTensorError):
    """Moment-to-harmonic matrix came out singular or badly conditioned"""

from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations_with_replacement, product
from math import comb, sqrt
from typing import Dict, List, Optional, Tuple

import numpy as np

from core.exceptions import RecordFormatError
from core.harmonics.special import (
    basis_dim,
    check_dimension,
    degree_offset,
    sphere_area,
    total_dim,
)

UNIT_TOLERANCE = 1e-9
NEGATIVE_WEIGHT_TOLERANCE = 1e-12

MultiIndex = Tuple[int, ...]


class MeasureTag(Enum):
    """Outcome of the second-moment classification of a measure"""

    FULL_DIM = "FullDim"
    RANK_ONE = "RankOne"
    NOT_SURFACE_AREA = "NotSurfaceArea"
    ZERO = "Zero"


class CaseTag(Enum):
    """Outcome taxonomy of the harmonic least-squares reconstruction"""

    CASE1_POINT = "Case1_Point"
    CASE2_LOWER_DIM = "Case2_LowerDim"
    CASE3_POLYTOPE = "Case3_Polytope"
    CASE4_NO_OUTPUT = "Case4_NoOutput"


class FitMode(Enum):
    """Whether the target is known to lie in the attainable set"""

    EXACT = "Exact"
    NOISY = "Noisy"


class BodyKind(Enum):
    """Supported body specifications"""

    BALL = "ball"
    ELLIPSOID = "ellipsoid"
    POLYTOPE = "polytope"
    REGULAR_POLYGON = "regular_polygon"
    PYRAMID = "pyramid"
    CUBE = "cube"
    PLANAR = "planar"


# ============= MEASURES =============


@dataclass(eq=False)
class DiscreteMeasure:
    """
    Finite measure on the unit sphere: atoms with nonnegative weights.

    Atoms are stored as an (m, n) array; an empty measure keeps shape (0, n)
    so its dimension is still known.
    """

    atoms: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        atoms = np.asarray(self.atoms, dtype=float)
        weights = np.asarray(self.weights, dtype=float).reshape(-1)
        if atoms.ndim != 2:
            raise ValueError(f"Atoms must be a 2D array, got shape {atoms.shape}")
        if len(atoms) != len(weights):
            raise ValueError(
                f"{len(atoms)} atoms but {len(weights)} weights"
            )
        if np.any(weights < -NEGATIVE_WEIGHT_TOLERANCE):
            raise ValueError(f"Negative weight {weights.min():.3e}")
        if len(atoms):
            norms = np.linalg.norm(atoms, axis=1)
            if np.any(np.abs(norms - 1.0) > UNIT_TOLERANCE):
                raise ValueError("Atoms must be unit vectors")
            atoms = atoms / norms[:, None]
        self.atoms = atoms
        self.weights = np.clip(weights, 0.0, None)

    @classmethod
    def zero(cls, dim: int) -> 'DiscreteMeasure':
        """The zero measure on S^{dim-1}"""
        return cls(np.zeros((0, dim)), np.zeros(0))

    @property
    def dim(self) -> int:
        return self.atoms.shape[1]

    @property
    def size(self) -> int:
        return len(self.weights)

    @property
    def total_mass(self) -> float:
        return float(self.weights.sum())

    def scaled(self, factor: float) -> 'DiscreteMeasure':
        """Measure multiplied by a nonnegative factor"""
        if factor < 0:
            raise ValueError(f"Scale factor must be >= 0, got {factor}")
        return DiscreteMeasure(self.atoms.copy(), self.weights * factor)

    def __add__(self, other: 'DiscreteMeasure') -> 'DiscreteMeasure':
        if other.dim != self.dim:
            raise ValueError("Cannot add measures on spheres of different dimension")
        return DiscreteMeasure(
            np.vstack([self.atoms, other.atoms]),
            np.concatenate([self.weights, other.weights]),
        )

    def to_dict(self) -> Dict:
        return {
            'n': self.dim,
            'atoms': self.atoms.tolist(),
            'weights': self.weights.tolist(),
        }

    @classmethod
    def from_dict(cls, data: Dict) -> 'DiscreteMeasure':
        try:
            n = int(data['n'])
            atoms = np.asarray(data['atoms'], dtype=float).reshape(-1, n)
            return cls(atoms, np.asarray(data['weights'], dtype=float))
        except KeyError as e:
            raise RecordFormatError(f"missing field {e.args[0]!r}", location="measure")
        except ValueError as e:
            raise RecordFormatError(str(e), location="measure")


@dataclass(eq=False)
class MomentMatrix:
    """Second-moment matrix M(mu) with its ascending eigen-decomposition"""

    matrix: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix))

    @property
    def min_eigenvalue(self) -> float:
        return float(self.eigenvalues[0])

    def quadratic_form(self, z: np.ndarray) -> float:
        z = np.asarray(z, dtype=float)
        return float(z @ self.matrix @ z)


@dataclass(eq=False)
class MeasureClass:
    """Classification of a measure; axis and surface_area only for RANK_ONE"""

    tag: MeasureTag
    mass: float
    axis: Optional[np.ndarray] = None
    surface_area: Optional[float] = None

    def __str__(self):
        if self.tag is MeasureTag.RANK_ONE:
            axis = np.round(self.axis, 6).tolist()
            return f"{self.tag.value}(axis={axis}, area={self.surface_area:.6g})"
        return self.tag.value


# ============= TENSORS =============


def multi_indices(dim: int, rank: int) -> List[MultiIndex]:
    """Sorted multi-indices (i_1 <= ... <= i_s) in lexicographic order"""
    return list(combinations_with_replacement(range(dim), rank))


@dataclass
class SymTensor:
    """
    Symmetric rank-s tensor over R^n stored by sorted multi-index.

    Indices are 0-based. `scaled` marks raw moment tensors that stand in for
    surface tensors without the 1/(s! omega_{s+1}) factor.
    """

    dim: int
    rank: int
    components: Dict[MultiIndex, float]
    scaled: bool = False

    def __post_init__(self):
        expected = comb(self.rank + self.dim - 1, self.dim - 1)
        if len(self.components) != expected:
            raise ValueError(
                f"Rank-{self.rank} tensor over R^{self.dim} needs {expected} "
                f"components, got {len(self.components)}"
            )

    @classmethod
    def from_values(cls, dim: int, rank: int, values: np.ndarray,
                    scaled: bool = False) -> 'SymTensor':
        """Build from component values in lexicographic multi-index order"""
        keys = multi_indices(dim, rank)
        values = np.asarray(values, dtype=float).reshape(-1)
        if len(values) != len(keys):
            raise ValueError(f"Expected {len(keys)} values, got {len(values)}")
        return cls(dim, rank, dict(zip(keys, values.tolist())), scaled)

    def values(self) -> np.ndarray:
        """Component values in lexicographic multi-index order"""
        return np.array([self.components[key] for key in multi_indices(self.dim, self.rank)])

    def __getitem__(self, index: MultiIndex) -> float:
        return self.components[tuple(sorted(index))]

    def to_dense(self) -> np.ndarray:
        """Full n x ... x n array"""
        dense = np.empty((self.dim,) * self.rank)
        for index in product(range(self.dim), repeat=self.rank):
            dense[index] = self.components[tuple(sorted(index))]
        return dense

    def matrix(self) -> np.ndarray:
        """Coefficient matrix {T(e_i, e_j)} of a rank-2 tensor"""
        if self.rank != 2:
            raise ValueError(f"matrix() needs a rank-2 tensor, got rank {self.rank}")
        return self.to_dense()

    def __call__(self, *vectors: np.ndarray) -> float:
        """Evaluate as a multilinear form T(v_1, ..., v_s)"""
        if len(vectors) != self.rank:
            raise ValueError(f"Expected {self.rank} arguments, got {len(vectors)}")
        result = self.to_dense()
        for v in vectors:
            result = np.tensordot(result, np.asarray(v, dtype=float), axes=(0, 0))
        return float(result)

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values()))) if self.components else 0.0


@dataclass
class TensorSet:
    """
    Surface tensors of one body up to rank s_o.

    Holds at least ranks s_o - 1 and s_o; vector() is the m_{s_o}-dimensional
    vector of distinct components (rank s_o - 1 block, then rank s_o).
    """

    dim: int
    max_rank: int
    tensors: Dict[int, SymTensor]
    scaled: bool = False

    def __post_init__(self):
        check_dimension(self.dim)
        for rank in self.required_ranks():
            if rank not in self.tensors:
                raise ValueError(f"TensorSet up to rank {self.max_rank} lacks rank {rank}")
        for rank, tensor in self.tensors.items():
            if tensor.rank != rank or tensor.dim != self.dim:
                raise ValueError(f"Tensor stored under rank {rank} has rank {tensor.rank}")

    def required_ranks(self) -> List[int]:
        return [s for s in (self.max_rank - 1, self.max_rank) if s >= 0]

    def vector(self) -> np.ndarray:
        return np.concatenate([self.tensors[s].values() for s in self.required_ranks()])

    @classmethod
    def from_vector(cls, dim: int, max_rank: int, values: np.ndarray,
                    scaled: bool = False) -> 'TensorSet':
        """Inverse of vector()"""
        values = np.asarray(values, dtype=float)
        if len(values) != total_dim(dim, max_rank):
            raise ValueError(
                f"Expected {total_dim(dim, max_rank)} values, got {len(values)}"
            )
        tensors, start = {}, 0
        for rank in [s for s in (max_rank - 1, max_rank) if s >= 0]:
            count = comb(rank + dim - 1, dim - 1)
            tensors[rank] = SymTensor.from_values(dim, rank, values[start:start + count], scaled)
            start += count
        return cls(dim, max_rank, tensors, scaled)


# ============= HARMONIC VECTORS =============


@dataclass(eq=False)
class HarmonicVector:
    """Harmonic intrinsic volumes up to degree s_o, ordered (k asc, j asc)"""

    dim: int
    max_degree: int
    values: np.ndarray

    def __post_init__(self):
        check_dimension(self.dim)
        self.values = np.asarray(self.values, dtype=float).reshape(-1)
        expected = total_dim(self.dim, self.max_degree)
        if len(self.values) != expected:
            raise ValueError(
                f"Harmonic vector up to degree {self.max_degree} in R^{self.dim} "
                f"needs {expected} entries, got {len(self.values)}"
            )

    def block(self, k: int) -> np.ndarray:
        """Entries of degree k"""
        if not 0 <= k <= self.max_degree:
            raise ValueError(f"Degree {k} outside 0..{self.max_degree}")
        start = degree_offset(self.dim, k)
        return self.values[start:start + basis_dim(self.dim, k)]

    def mass(self) -> float:
        """Total mass of the underlying measure, sqrt(omega_n) * psi_0"""
        return sqrt(sphere_area(self.dim)) * float(self.values[0])

    def norm(self) -> float:
        return float(np.linalg.norm(self.values))

    def truncated(self, max_degree: int) -> 'HarmonicVector':
        if max_degree > self.max_degree:
            raise ValueError("Cannot extend a harmonic vector")
        return HarmonicVector(
            self.dim, max_degree, self.values[:total_dim(self.dim, max_degree)].copy()
        )

    def __add__(self, other) -> 'HarmonicVector':
        other_values = other.values if isinstance(other, HarmonicVector) else np.asarray(other)
        return HarmonicVector(self.dim, self.max_degree, self.values + other_values)

    def __sub__(self, other: 'HarmonicVector') -> 'HarmonicVector':
        return HarmonicVector(self.dim, self.max_degree, self.values - other.values)


@dataclass(eq=False)
class FitTarget:
    """
    Target of the measure fit: a harmonic vector and how to treat it.

    In EXACT mode the degree-1 entries must vanish (surface area measures have
    zero first moments); they are zeroed after a tolerance check.
    """

    dim: int
    max_degree: int
    values: np.ndarray
    mode: FitMode = FitMode.EXACT

    DEGREE_ONE_TOLERANCE = 1e-8

    def __post_init__(self):
        check_dimension(self.dim)
        if self.max_degree < 2:
            raise ValueError(f"Fitting needs s_o >= 2, got {self.max_degree}")
        self.values = np.array(self.values, dtype=float).reshape(-1)
        expected = total_dim(self.dim, self.max_degree)
        if len(self.values) != expected:
            raise ValueError(f"Target needs {expected} entries, got {len(self.values)}")
        if self.mode is FitMode.EXACT:
            start = degree_offset(self.dim, 1)
            stop = start + basis_dim(self.dim, 1)
            scale = max(1.0, float(np.linalg.norm(self.values)))
            if np.max(np.abs(self.values[start:stop])) > self.DEGREE_ONE_TOLERANCE * scale:
                raise ValueError("Exact target has non-vanishing degree-1 entries")
            self.values[start:stop] = 0.0

    @classmethod
    def from_harmonics(cls, vector: HarmonicVector,
                       mode: FitMode = FitMode.EXACT) -> 'FitTarget':
        return cls(vector.dim, vector.max_degree, vector.values, mode)

    @property
    def size(self) -> int:
        return len(self.values)

    def norm(self) -> float:
        return float(np.linalg.norm(self.values))


# ============= BODIES =============


@dataclass
class BodySpec:
    """
    Declarative description of a reference body.

    Only the fields relevant to `kind` are used:
        BALL: radius; ELLIPSOID: semi_axes; POLYTOPE: normals + supports or
        vertices; REGULAR_POLYGON: sides; PYRAMID: base_side, height;
        CUBE: side; PLANAR: vertices spanning a hyperplane.
    """

    kind: BodyKind
    dim: int = 3
    radius: float = 1.0
    semi_axes: Optional[List[float]] = None
    normals: Optional[List[List[float]]] = None
    supports: Optional[List[float]] = None
    vertices: Optional[List[List[float]]] = None
    sides: int = 0
    base_side: float = 1.0
    height: float = 1.0
    side: float = 1.0
    name: str = field(default="")

    def __post_init__(self):
        if isinstance(self.kind, str):
            self.kind = BodyKind(self.kind)
        check_dimension(self.dim)
        if self.kind is BodyKind.BALL and self.radius <= 0:
            raise ValueError(f"Ball radius must be positive, got {self.radius}")
        if self.kind is BodyKind.ELLIPSOID:
            if self.semi_axes is None:
                self.semi_axes = [1.0, 1.0, 2.0] if self.dim == 3 else [1.0, 2.0]
            if len(self.semi_axes) != self.dim or min(self.semi_axes) <= 0:
                raise ValueError(f"Ellipsoid needs {self.dim} positive semi-axes")
        if self.kind is BodyKind.POLYTOPE:
            has_h = self.normals is not None and self.supports is not None
            if not has_h and self.vertices is None:
                raise ValueError("Polytope needs normals + supports or vertices")
        if self.kind is BodyKind.PLANAR and self.vertices is None:
            raise ValueError("Planar body needs vertices")
        if self.kind is BodyKind.REGULAR_POLYGON:
            self.dim = 2
            if self.sides < 3:
                raise ValueError(f"Regular polygon needs >= 3 sides, got {self.sides}")
        if self.kind is BodyKind.PYRAMID:
            self.dim = 3
            if self.base_side <= 0 or self.height <= 0:
                raise ValueError("Pyramid needs positive base side and height")
        if self.kind is BodyKind.CUBE and self.side <= 0:
            raise ValueError(f"Cube side must be positive, got {self.side}")
        if not self.name:
            self.name = self.kind.value

    # ----- presets -----

    @classmethod
    def ball(cls, radius: float = 1.0, dim: int = 3) -> 'BodySpec':
        return cls(BodyKind.BALL, dim=dim, radius=radius)

    @classmethod
    def ellipsoid(cls, semi_axes: Optional[List[float]] = None) -> 'BodySpec':
        axes = list(semi_axes) if semi_axes is not None else [1.0, 1.0, 2.0]
        return cls(BodyKind.ELLIPSOID, dim=len(axes), semi_axes=axes)

    @classmethod
    def pyramid(cls, base_side: float = 1.0, height: float = 1.0) -> 'BodySpec':
        return cls(BodyKind.PYRAMID, dim=3, base_side=base_side, height=height)

    @classmethod
    def cube(cls, side: float = 1.0, dim: int = 3) -> 'BodySpec':
        return cls(BodyKind.CUBE, dim=dim, side=side)

    @classmethod
    def regular_polygon(cls, sides: int) -> 'BodySpec':
        return cls(BodyKind.REGULAR_POLYGON, dim=2, sides=sides)

    @classmethod
    def polytope(cls, normals=None, supports=None, vertices=None) -> 'BodySpec':
        source = vertices if vertices is not None else normals
        dim = len(source[0])
        return cls(
            BodyKind.POLYTOPE, dim=dim,
            normals=None if normals is None else [list(map(float, u)) for u in normals],
            supports=None if supports is None else [float(h) for h in supports],
            vertices=None if vertices is None else [list(map(float, v)) for v in vertices],
        )

    @classmethod
    def preset(cls, name: str) -> 'BodySpec':
        """
        Named reference bodies: ball, ellipsoid, pyramid, cube, square,
        polygonM (regular M-gon), e.g. "polygon5".

        Raises:
            ValueError: For an unknown name
        """
        key = name.strip().lower()
        if key == "ball":
            return cls.ball()
        if key == "ellipsoid":
            return cls.ellipsoid()
        if key == "pyramid":
            return cls.pyramid()
        if key == "cube":
            return cls.cube()
        if key == "square":
            return cls.cube(dim=2)
        if key.startswith("polygon") and key[len("polygon"):].isdigit():
            return cls.regular_polygon(int(key[len("polygon"):]))
        raise ValueError(f"Unknown body preset: {name}")

    # ----- serialization -----

    def to_dict(self) -> Dict:
        data = {'kind': 'body', 'type': self.kind.value, 'n': self.dim}
        if self.kind is BodyKind.BALL:
            data['radius'] = self.radius
        elif self.kind is BodyKind.ELLIPSOID:
            data['semi_axes'] = list(self.semi_axes)
        elif self.kind in (BodyKind.POLYTOPE, BodyKind.PLANAR):
            for key in ('normals', 'supports', 'vertices'):
                if getattr(self, key) is not None:
                    data[key] = getattr(self, key)
        elif self.kind is BodyKind.REGULAR_POLYGON:
            data['sides'] = self.sides
        elif self.kind is BodyKind.PYRAMID:
            data['base_side'] = self.base_side
            data['height'] = self.height
        elif self.kind is BodyKind.CUBE:
            data['side'] = self.side
        return data

    @classmethod
    def from_dict(cls, data: Dict, source: Optional[str] = None) -> 'BodySpec':
        """
        Parse a body record.

        Raises:
            RecordFormatError: Naming the offending field
        """
        if not isinstance(data, dict):
            raise RecordFormatError("body record must be a JSON object", source)
        if 'type' not in data:
            raise RecordFormatError("missing field 'type'", source, "body")
        try:
            kind = BodyKind(data['type'])
        except ValueError:
            raise RecordFormatError(f"unknown body type {data['type']!r}", source, "type")

        allowed = {'kind', 'type', 'n', 'radius', 'semi_axes', 'normals', 'supports',
                   'vertices', 'sides', 'base_side', 'height', 'side', 'name'}
        unknown = sorted(set(data) - allowed)
        if unknown:
            raise RecordFormatError(f"unknown field {unknown[0]!r}", source, unknown[0])

        kwargs = {key: data[key] for key in data if key not in ('kind', 'type', 'n')}
        if 'n' in data:
            kwargs['dim'] = int(data['n'])
        elif kind in (BodyKind.POLYTOPE, BodyKind.PLANAR):
            rows = data.get('vertices') or data.get('normals')
            if rows:
                kwargs['dim'] = len(rows[0])
        elif kind is BodyKind.ELLIPSOID and data.get('semi_axes'):
            kwargs['dim'] = len(data['semi_axes'])
        try:
            return cls(kind, **kwargs)
        except (TypeError, ValueError) as e:
            raise RecordFormatError(str(e), source, data['type'])

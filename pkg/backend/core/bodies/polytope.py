"""
Convex polytopes in R^2 and R^3.

A Polytope keeps both representations: outer unit normals with support numbers
(H-representation) and the vertices of the body, plus facet areas, facet vertex
lists, volume and centroid. Full-dimensional bodies come from a halfspace
intersection or a vertex hull; flat bodies (dimension n - 1) and single points
are supported so lower-dimensional reconstruction outputs have a record too.
"""

import logging
from dataclasses import dataclass, field
from math import factorial
from typing import List, Optional, Tuple

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import ConvexHull, HalfspaceIntersection, QhullError, cKDTree
from scipy.spatial.distance import pdist

from core.bodies.grids import tangent_basis
from core.exceptions import (
    EmptyInteriorError,
    LinearProgramError,
    PolytopeError,
    UnboundedPolytopeError,
)
from core.harmonics.special import check_dimension
from core.models import DiscreteMeasure

logger = logging.getLogger(__name__)

VERTEX_MERGE_TOLERANCE = 1e-10
NORMAL_GROUP_TOLERANCE = 1e-8
INTERIOR_TOLERANCE = 1e-12


# ============= HELPERS =============


def cluster_points(points: np.ndarray, radius: float) -> np.ndarray:
    """
    Greedy clustering: each unassigned point claims every unassigned point within
    radius. Returns one label per point, labels numbered in order of appearance.
    """
    labels = -np.ones(len(points), dtype=int)
    if len(points) == 0:
        return labels
    tree = cKDTree(points)
    current = 0
    for i in range(len(points)):
        if labels[i] >= 0:
            continue
        neighbours = np.array(tree.query_ball_point(points[i], radius), dtype=int)
        free = neighbours[labels[neighbours] < 0]
        labels[free] = current
        current += 1
    return labels


def _normalized(normals: np.ndarray) -> np.ndarray:
    normals = np.atleast_2d(np.asarray(normals, dtype=float))
    norms = np.linalg.norm(normals, axis=1)
    if np.any(norms <= 0):
        raise ValueError("Normals must be nonzero")
    return normals / norms[:, None]


def _check_bounded(normals: np.ndarray, supports: np.ndarray) -> None:
    """The intersection is bounded iff every coordinate is bounded above and below"""
    dim = normals.shape[1]
    free = [(None, None)] * dim
    for direction in np.vstack([np.eye(dim), -np.eye(dim)]):
        result = linprog(-direction, A_ub=normals, b_ub=supports, bounds=free,
                         method="highs")
        status = result.status
        if status == 4:
            # HiGHS may report "unbounded or infeasible"; a feasibility LP decides
            feasible = linprog(np.zeros(dim), A_ub=normals, b_ub=supports, bounds=free,
                               method="highs")
            status = 3 if feasible.status == 0 else 2
        if status == 3:
            raise UnboundedPolytopeError("Normals do not positively span R^n")
        if status == 2:
            raise EmptyInteriorError("Halfspace system is infeasible")
        if status != 0:
            raise LinearProgramError(f"Boundedness LP failed: {result.message}")


def chebyshev_center(normals: np.ndarray, supports: np.ndarray) -> Tuple[np.ndarray, float]:
    """
    Center and radius of the largest ball inside {x : <u_i, x> <= h_i}.

    Normals must be unit vectors. The radius is capped so the LP stays bounded
    for unbounded systems.
    """
    dim = normals.shape[1]
    cap = float(np.max(np.abs(supports))) + 1.0
    A = np.hstack([normals, np.ones((len(normals), 1))])
    objective = np.zeros(dim + 1)
    objective[-1] = -1.0
    bounds = [(None, None)] * dim + [(0.0, cap)]
    result = linprog(objective, A_ub=A, b_ub=supports, bounds=bounds, method="highs")
    # capped radius keeps the LP bounded, so status 4 also means infeasible
    if result.status in (2, 4):
        raise EmptyInteriorError("Halfspace system is infeasible")
    if result.status != 0:
        raise LinearProgramError(f"Chebyshev center LP failed: {result.message}")
    return result.x[:dim], float(result.x[-1])


def _simplex_measures(points: np.ndarray, simplices: np.ndarray) -> np.ndarray:
    """(n-1)-volumes of the boundary simplices of a hull (edges or triangles)"""
    if points.shape[1] == 2:
        return np.linalg.norm(points[simplices[:, 1]] - points[simplices[:, 0]], axis=1)
    a = points[simplices[:, 1]] - points[simplices[:, 0]]
    b = points[simplices[:, 2]] - points[simplices[:, 0]]
    return 0.5 * np.linalg.norm(np.cross(a, b), axis=1)


def _volume_centroid(points: np.ndarray, simplices: np.ndarray) -> Tuple[float, np.ndarray]:
    """Cone decomposition of the hull from the vertex mean"""
    dim = points.shape[1]
    apex = points.mean(axis=0)
    corners = points[simplices] - apex
    volumes = np.abs(np.linalg.det(corners)) / factorial(dim)
    total = float(volumes.sum())
    if total <= 0:
        return 0.0, apex
    centers = apex + corners.sum(axis=1) / (dim + 1)
    return total, volumes @ centers / total


def _order_facet(points: np.ndarray, indices: np.ndarray, normal: np.ndarray) -> List[int]:
    """Facet vertex indices counter-clockwise seen from outside"""
    if points.shape[1] == 2:
        a, b = points[indices[0]], points[indices[1]]
        # outward normal on the right of the walk a -> b
        cross = (b - a)[0] * normal[1] - (b - a)[1] * normal[0]
        first, second = int(indices[0]), int(indices[1])
        return [first, second] if cross < 0 else [second, first]
    basis = tangent_basis(normal)
    local = (points[indices] - points[indices].mean(axis=0)) @ basis.T
    angles = np.arctan2(local[:, 1], local[:, 0])
    return [int(i) for i in indices[np.argsort(angles)]]


# ============= POLYTOPE =============


@dataclass(eq=False)
class Polytope:
    """
    Convex polytope with H- and V-representation.

    normals[i], supports[i] and facet_areas[i] belong together; a normal whose
    halfspace is redundant keeps facet area 0 and an empty facet.
    """

    dim: int
    vertices: np.ndarray
    normals: np.ndarray
    supports: np.ndarray
    facet_areas: np.ndarray
    facets: List[List[int]] = field(default_factory=list)
    volume: float = 0.0
    centroid: Optional[np.ndarray] = None

    def __post_init__(self):
        check_dimension(self.dim)
        if self.centroid is None:
            self.centroid = (
                self.vertices.mean(axis=0) if len(self.vertices) else np.zeros(self.dim)
            )

    # ----- construction -----

    @classmethod
    def from_halfspaces(cls, normals: np.ndarray, supports: np.ndarray,
                        check_bounded: bool = True,
                        interior_point: Optional[np.ndarray] = None) -> 'Polytope':
        """
        Intersect the halfspaces <u_i, x> <= h_i.

        Args:
            normals: (m, n) outer normals (normalized here)
            supports: (m,) support numbers
            check_bounded: Verify boundedness with small LPs first
            interior_point: Known strictly interior point; skips the Chebyshev LP

        Raises:
            UnboundedPolytopeError: If the normals do not positively span R^n
            EmptyInteriorError: If the intersection has no interior
        """
        normals = _normalized(normals)
        supports = np.asarray(supports, dtype=float).reshape(-1)
        dim = normals.shape[1]
        check_dimension(dim)
        if len(supports) != len(normals):
            raise ValueError(f"{len(normals)} normals but {len(supports)} support numbers")
        if len(normals) < dim + 1:
            raise UnboundedPolytopeError(
                f"{len(normals)} halfspaces cannot bound a body in R^{dim}"
            )
        if check_bounded:
            _check_bounded(normals, supports)

        scale = max(float(np.max(np.abs(supports))), 1.0)
        if interior_point is None:
            interior_point, radius = chebyshev_center(normals, supports)
            if radius <= INTERIOR_TOLERANCE * scale:
                raise EmptyInteriorError(f"Intersection has inradius {radius:.3e}")

        halfspaces = np.hstack([normals, -supports[:, None]])
        try:
            interior = np.asarray(interior_point, dtype=float)
            intersection = HalfspaceIntersection(halfspaces, interior)
        except QhullError as e:
            raise PolytopeError(f"Halfspace intersection failed: {e}") from e

        raw = intersection.intersections
        labels = cluster_points(raw, VERTEX_MERGE_TOLERANCE * scale)
        vertices = np.array([raw[labels == k].mean(axis=0) for k in range(labels.max() + 1)])
        return cls._from_hull(vertices, normals, supports)

    @classmethod
    def _from_hull(cls, points: np.ndarray, normals: Optional[np.ndarray] = None,
                   supports: Optional[np.ndarray] = None) -> 'Polytope':
        """Build from a full-dimensional point set, assigning hull facets to normals"""
        dim = points.shape[1]
        try:
            hull = ConvexHull(points)
        except QhullError as e:
            raise PolytopeError(f"Convex hull failed: {e}") from e

        index_map = -np.ones(len(points), dtype=int)
        index_map[hull.vertices] = np.arange(len(hull.vertices))
        vertices = points[hull.vertices]
        simplices = index_map[hull.simplices]
        hull_normals = hull.equations[:, :dim]

        if normals is None:
            labels = cluster_points(hull_normals, NORMAL_GROUP_TOLERANCE)
            count = labels.max() + 1
            normals = np.array([hull_normals[labels == k][0] for k in range(count)])
            normals = _normalized(normals)
            supports = np.array([
                float(np.mean(-hull.equations[labels == k, dim])) for k in range(count)
            ])
        else:
            labels = np.argmax(hull_normals @ normals.T, axis=1)
            alignment = np.einsum("ij,ij->i", hull_normals, normals[labels])
            if np.any(alignment < 1.0 - 1e-6):
                logger.warning(
                    "%d hull facets do not match an input normal (min cosine %.9f)",
                    int(np.sum(alignment < 1.0 - 1e-6)), float(alignment.min())
                )

        pieces = _simplex_measures(vertices, simplices)
        areas = np.bincount(labels, weights=pieces, minlength=len(normals))
        facets: List[List[int]] = []
        for k in range(len(normals)):
            members = np.unique(simplices[labels == k])
            facets.append(_order_facet(vertices, members, normals[k]) if len(members) else [])

        volume, centroid = _volume_centroid(vertices, simplices)
        return cls(dim, vertices, normals, np.asarray(supports, dtype=float), areas,
                   facets, volume, centroid)

    @classmethod
    def from_vertices(cls, points: np.ndarray, rank_tol: float = 1e-9) -> 'Polytope':
        """
        Convex hull of a point set.

        Full-rank sets give a full polytope, sets spanning a hyperplane give a
        flat body, anything lower a point-like record without surface measure.
        """
        points = np.atleast_2d(np.asarray(points, dtype=float))
        dim = points.shape[1]
        check_dimension(dim)
        centered = points - points.mean(axis=0)
        singular = np.linalg.svd(centered, compute_uv=False)
        if singular.size == 0 or singular[0] <= 0:
            rank = 0
        else:
            rank = int(np.sum(singular > rank_tol * singular[0]))
        if rank == dim:
            return cls._from_hull(points)
        if rank == dim - 1:
            return cls.flat(points)
        return cls.point(dim, points.mean(axis=0))

    @classmethod
    def flat(cls, points: np.ndarray) -> 'Polytope':
        """
        Body spanning a hyperplane: a polygon in R^3 or a segment in R^2.

        Its surface area measure is S (delta_u + delta_{-u}).
        """
        points = np.atleast_2d(np.asarray(points, dtype=float))
        dim = points.shape[1]
        center = points.mean(axis=0)
        _, _, vt = np.linalg.svd(points - center)
        normal = vt[-1] / np.linalg.norm(vt[-1])

        if dim == 2:
            direction = vt[0]
            coords = (points - center) @ direction
            ends = [int(np.argmin(coords)), int(np.argmax(coords))]
            vertices = points[ends]
            area = float(np.linalg.norm(vertices[1] - vertices[0]))
            facet = _order_facet(vertices, np.array([0, 1]), normal)
            facets = [facet, facet[::-1]]
            centroid = vertices.mean(axis=0)
        else:
            basis = tangent_basis(normal)
            local = (points - center) @ basis.T
            try:
                hull = ConvexHull(local)
            except QhullError as e:
                raise PolytopeError(f"Planar hull failed: {e}") from e
            vertices = points[hull.vertices]
            area = float(hull.volume)
            # 2D hull vertices are counter-clockwise in the (e1, e2) chart, i.e. around +normal
            ccw = list(range(len(vertices)))
            facets = [ccw, ccw[::-1]]
            ring = local[hull.vertices]
            cross = ring[:, 0] * np.roll(ring[:, 1], -1) - np.roll(ring[:, 0], -1) * ring[:, 1]
            if abs(cross.sum()) > 0:
                cx = ((ring[:, 0] + np.roll(ring[:, 0], -1)) * cross).sum() / (3.0 * cross.sum())
                cy = ((ring[:, 1] + np.roll(ring[:, 1], -1)) * cross).sum() / (3.0 * cross.sum())
                centroid = center + cx * basis[0] + cy * basis[1]
            else:
                centroid = vertices.mean(axis=0)

        offset = float(normal @ vertices[0])
        return cls(
            dim, vertices, np.vstack([normal, -normal]), np.array([offset, -offset]),
            np.array([area, area]), facets, 0.0, centroid,
        )

    @classmethod
    def point(cls, dim: int, location: Optional[np.ndarray] = None) -> 'Polytope':
        """Single point; empty surface area measure"""
        location = np.zeros(dim) if location is None else np.asarray(location, dtype=float)
        return cls(dim, location.reshape(1, dim), np.zeros((0, dim)), np.zeros(0),
                   np.zeros(0), [], 0.0, location.copy())

    # ----- properties -----

    @property
    def kind(self) -> str:
        """One of full, flat or point"""
        if self.volume > 0:
            return "full"
        return "flat" if len(self.normals) else "point"

    @property
    def facet_count(self) -> int:
        return int(np.sum(self.facet_areas > 0))

    @property
    def surface_area(self) -> float:
        """Boundary measure S(K); a flat body counts both sides"""
        return float(self.facet_areas.sum())

    def surface_measure(self) -> DiscreteMeasure:
        """Facet normals weighted by facet areas (zero-area normals dropped)"""
        keep = self.facet_areas > 0
        if not np.any(keep):
            return DiscreteMeasure.zero(self.dim)
        return DiscreteMeasure(self.normals[keep], self.facet_areas[keep])

    def closedness(self) -> np.ndarray:
        """sum a_i u_i, zero for every closed polytope"""
        if len(self.normals) == 0:
            return np.zeros(self.dim)
        return self.facet_areas @ self.normals

    def support(self, u: np.ndarray) -> np.ndarray:
        """
        Support function h_K(u) = max over vertices of <v, u>.

        Returns a float for a single direction, else an array.
        """
        directions = np.asarray(u, dtype=float)
        values = np.max(np.atleast_2d(directions) @ self.vertices.T, axis=1)
        return float(values[0]) if directions.ndim == 1 else values

    def diameter(self) -> float:
        if len(self.vertices) < 2:
            return 0.0
        return float(pdist(self.vertices).max())

    # ----- transformations -----

    def translate(self, x: np.ndarray) -> 'Polytope':
        x = np.asarray(x, dtype=float)
        return Polytope(
            self.dim, self.vertices + x, self.normals.copy(), self.supports + self.normals @ x,
            self.facet_areas.copy(), [list(f) for f in self.facets], self.volume,
            self.centroid + x,
        )

    def scale(self, factor: float) -> 'Polytope':
        """Dilate about the origin by factor > 0"""
        if factor <= 0:
            raise ValueError(f"Scale factor must be positive, got {factor}")
        return Polytope(
            self.dim, self.vertices * factor, self.normals.copy(), self.supports * factor,
            self.facet_areas * factor ** (self.dim - 1), [list(f) for f in self.facets],
            self.volume * factor ** self.dim, self.centroid * factor,
        )

    def centered(self) -> 'Polytope':
        """Translate so the centroid is at the origin"""
        return self.translate(-self.centroid)

    def to_dict(self) -> dict:
        return {
            'n': self.dim,
            'vertices': self.vertices.tolist(),
            'normals': self.normals.tolist(),
            'supports': self.supports.tolist(),
            'facet_areas': self.facet_areas.tolist(),
            'facets': self.facets,
            'volume': self.volume,
        }

    def __repr__(self) -> str:
        return (
            f"Polytope(dim={self.dim}, kind={self.kind}, vertices={len(self.vertices)}, "
            f"facets={self.facet_count}, volume={self.volume:.6g})"
        )


def halfspace_intersection(normals: np.ndarray, supports: np.ndarray) -> Polytope:
    """Polytope {x : <u_i, x> <= h_i}; see Polytope.from_halfspaces"""
    return Polytope.from_halfspaces(normals, supports)

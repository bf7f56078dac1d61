"""
Compact convex domains and their deterministic sample grids

Every grid includes the extreme lattice corners / vertices of its set and is
ordered lexicographically in index space (first axis slowest).
"""

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, Optional, Tuple

import numpy as np
from scipy.optimize import nnls

from src import config
from src.errors import DimensionError, GeometryError
from src.geometry.distances import hull_distance
from src.geometry.points import Point, PointLike, as_point, as_points

logger = logging.getLogger(__name__)


def _unique_rows(points: np.ndarray) -> np.ndarray:
    """Drop exact duplicate rows, keeping first occurrences in order"""
    if len(points) == 0:
        return points
    _, first = np.unique(points, axis=0, return_index=True)
    return points[np.sort(first)]


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr, dtype=np.float64)
    arr.flags.writeable = False
    return arr


def _compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    """All nonnegative integer tuples of length parts summing to total, lexicographic"""
    if parts == 1:
        yield (total,)
        return
    for k in range(total + 1):
        for rest in _compositions(total - k, parts - 1):
            yield (k,) + rest


def _check_grid_size(count: int, resolution: int):
    if count > config.MAX_GRID_POINTS:
        raise GeometryError(f"Grid at resolution {resolution} would have {count} points, "
                            f"above the limit of {config.MAX_GRID_POINTS} (VI_MAX_GRID_POINTS)")


def _axis_lattice(lower: np.ndarray, upper: np.ndarray, resolution: int) -> np.ndarray:
    _check_grid_size(resolution ** len(lower), resolution)
    t = np.arange(resolution, dtype=np.float64) / (resolution - 1)
    axes = [(1.0 - t) * lo + t * hi for lo, hi in zip(lower, upper)]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.reshape(-1) for m in mesh], axis=1)


def _check_resolution(resolution: int):
    if int(resolution) != resolution or resolution < 2:
        raise GeometryError(f"Grid resolution must be an integer >= 2, got {resolution}")


class ConvexSet(ABC):
    """Nonempty compact convex subset of R^n"""

    @property
    @abstractmethod
    def dim(self) -> int:
        ...

    @abstractmethod
    def distance(self, p: Point) -> float:
        """Euclidean distance from p to the set (0 inside)"""

    @abstractmethod
    def bounding_box(self) -> Tuple[np.ndarray, np.ndarray]:
        ...

    @abstractmethod
    def _grid_points(self, resolution: int) -> Tuple[np.ndarray, float]:
        """Raw lattice points and the lattice spacing"""

    @abstractmethod
    def sample_uniform(self, rng: np.random.Generator, count: int) -> np.ndarray:
        """count seeded interior samples as an (count, n) array"""

    @abstractmethod
    def describe(self) -> Dict[str, Any]:
        """JSON-compatible description (instance-file form)"""

    def contains(self, p: PointLike, tol: float = 0.0) -> bool:
        if tol < 0:
            raise GeometryError(f"Membership tolerance must be >= 0, got {tol}")
        return self.distance(as_point(p, self.dim)) <= tol

    def sample_grid(self, resolution: int) -> "SampleGrid":
        _check_resolution(resolution)
        points, spacing = self._grid_points(resolution)
        return SampleGrid(points=_frozen(_unique_rows(points)), resolution=resolution,
                          set=self, spacing=float(spacing))


@dataclass(frozen=True, eq=False)
class Box(ConvexSet):
    lower: Point
    upper: Point

    def __post_init__(self):
        lower, upper = as_point(self.lower), as_point(self.upper)
        if lower.size != upper.size:
            raise DimensionError("Box bounds have different dimensions")
        if np.any(lower > upper):
            raise GeometryError(f"Box needs lower <= upper, got {lower.tolist()} / {upper.tolist()}")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @property
    def dim(self) -> int:
        return int(self.lower.size)

    def distance(self, p: Point) -> float:
        excess = np.maximum(np.maximum(self.lower - p, p - self.upper), 0.0)
        return float(np.linalg.norm(excess))

    def bounding_box(self):
        return self.lower, self.upper

    def corners(self) -> np.ndarray:
        return _axis_lattice(self.lower, self.upper, 2)

    def _grid_points(self, resolution):
        spacing = float(np.max(self.upper - self.lower)) / (resolution - 1)
        return _axis_lattice(self.lower, self.upper, resolution), spacing

    def sample_uniform(self, rng, count):
        return self.lower + (self.upper - self.lower) * rng.random((count, self.dim))

    def describe(self):
        return {"type": "box", "lower": self.lower.tolist(), "upper": self.upper.tolist()}


@dataclass(frozen=True, eq=False)
class Ball(ConvexSet):
    center: Point
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", as_point(self.center))
        if not np.isfinite(self.radius) or self.radius <= 0:
            raise GeometryError(f"Ball radius must be > 0, got {self.radius}")
        object.__setattr__(self, "radius", float(self.radius))

    @property
    def dim(self) -> int:
        return int(self.center.size)

    def distance(self, p: Point) -> float:
        return max(0.0, float(np.linalg.norm(p - self.center)) - self.radius)

    def bounding_box(self):
        return self.center - self.radius, self.center + self.radius

    def _grid_points(self, resolution):
        lower, upper = self.bounding_box()
        lattice = _axis_lattice(lower, upper, resolution)
        inside = np.linalg.norm(lattice - self.center, axis=1) <= self.radius
        points = lattice[inside]
        if not np.any(np.all(points == self.center, axis=1)):
            points = np.vstack([points, self.center])
        return points, 2.0 * self.radius / (resolution - 1)

    def sample_uniform(self, rng, count):
        directions = rng.standard_normal((count, self.dim))
        directions /= np.linalg.norm(directions, axis=1, keepdims=True)
        radii = self.radius * rng.random(count) ** (1.0 / self.dim)
        return self.center + directions * radii[:, None]

    def describe(self):
        return {"type": "ball", "center": self.center.tolist(), "radius": self.radius}


class _VertexSet(ConvexSet):
    vertices: np.ndarray

    @property
    def dim(self) -> int:
        return int(self.vertices.shape[1])

    def bounding_box(self):
        return self.vertices.min(axis=0), self.vertices.max(axis=0)

    def _grid_points(self, resolution):
        m = self.vertices.shape[0]
        _check_grid_size(math.comb(resolution - 2 + m, m - 1), resolution)
        weights = np.array(list(_compositions(resolution - 1, m)), dtype=np.float64) / (resolution - 1)
        diffs = self.vertices[:, None, :] - self.vertices[None, :, :]
        diameter = float(np.max(np.linalg.norm(diffs, axis=2)))
        return weights @ self.vertices, diameter / (resolution - 1)

    def sample_uniform(self, rng, count):
        weights = rng.dirichlet(np.ones(self.vertices.shape[0]), size=count)
        return weights @ self.vertices


@dataclass(frozen=True, eq=False)
class Simplex(_VertexSet):
    vertices: np.ndarray

    def __post_init__(self):
        vertices = as_points(self.vertices)
        n = vertices.shape[1]
        if vertices.shape[0] != n + 1:
            raise GeometryError(f"A simplex in R^{n} needs {n + 1} vertices, got {vertices.shape[0]}")
        if np.linalg.matrix_rank(vertices[1:] - vertices[0], tol=1e-10) != n:
            raise GeometryError("Simplex vertices are not affinely independent")
        object.__setattr__(self, "vertices", vertices)

    def barycentric(self, p: Point) -> np.ndarray:
        system = np.vstack([self.vertices.T, np.ones(self.vertices.shape[0])])
        return np.linalg.solve(system, np.append(p, 1.0))

    def distance(self, p: Point) -> float:
        if np.all(self.barycentric(p) >= 0.0):
            return 0.0
        return hull_distance(p, self.vertices)

    def describe(self):
        return {"type": "simplex", "vertices": self.vertices.tolist()}


@dataclass(frozen=True, eq=False)
class Hull(_VertexSet):
    vertices: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "vertices", as_points(self.vertices))

    def distance(self, p: Point) -> float:
        # exact convex-combination test first: [V^T; 1^T] w = [p; 1], w >= 0
        system = np.vstack([self.vertices.T, np.ones(self.vertices.shape[0])])
        _, residual = nnls(system, np.append(p, 1.0))
        if residual <= config.EXACT_TOL:
            return 0.0
        return hull_distance(p, self.vertices)

    def describe(self):
        return {"type": "hull", "vertices": self.vertices.tolist()}


@dataclass(frozen=True, eq=False)
class SampleGrid:
    """Finite ordered surrogate for a compact convex set"""
    points: np.ndarray
    resolution: int
    set: ConvexSet = field(repr=False)
    spacing: float

    def __len__(self) -> int:
        return int(self.points.shape[0])

    @property
    def dim(self) -> int:
        return int(self.points.shape[1])

    def index_of(self, p: PointLike) -> Optional[int]:
        p = as_point(p, self.dim)
        hits = np.flatnonzero(np.all(self.points == p, axis=1))
        return int(hits[0]) if hits.size else None

    def with_point(self, p: PointLike) -> Tuple["SampleGrid", int]:
        """Grid containing p (appended when absent) and p's index"""
        index = self.index_of(p)
        if index is not None:
            return self, index
        points = _frozen(np.vstack([self.points, as_point(p, self.dim)]))
        return SampleGrid(points, self.resolution, self.set, self.spacing), len(self)

    def union(self, other: "SampleGrid") -> "SampleGrid":
        points = _frozen(_unique_rows(np.vstack([self.points, other.points])))
        return SampleGrid(points, self.resolution, self.set, min(self.spacing, other.spacing))


def contains(convex_set: ConvexSet, p: PointLike, tol: float = 0.0) -> bool:
    """True iff p lies within distance tol of the set"""
    return convex_set.contains(p, tol)


def sample_grid(convex_set: ConvexSet, resolution: int) -> SampleGrid:
    """Deterministic lattice of the set with `resolution` points per axis"""
    return convex_set.sample_grid(resolution)


def convex_set_from_description(description: Dict[str, Any]) -> ConvexSet:
    kind = description.get("type")
    if kind == "box":
        return Box(description["lower"], description["upper"])
    if kind == "ball":
        return Ball(description["center"], description["radius"])
    if kind == "simplex":
        return Simplex(description["vertices"])
    if kind == "hull":
        return Hull(description["vertices"])
    raise GeometryError(f"Unknown convex set type: {kind!r}")

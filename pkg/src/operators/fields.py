"""
Vector fields: evaluable maps R^n -> R^m that house both A and a
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Sequence, Tuple

import numpy as np

from src.errors import DimensionError, OperatorError
from src.exprlang import Expression, evaluate as evaluate_expression, to_source
from src.geometry.points import Point, PointLike, as_point

logger = logging.getLogger(__name__)


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


def ordered_matvec(rows: np.ndarray, matrix: np.ndarray) -> np.ndarray:
    """rows @ matrix.T summed left to right, matching the order of an expression sum"""
    acc = rows[:, 0:1] * matrix[None, :, 0]
    for j in range(1, matrix.shape[1]):
        acc = acc + rows[:, j:j + 1] * matrix[None, :, j]
    return acc


class VectorField(ABC):
    """Base class; subclasses implement _evaluate and optionally _evaluate_many"""

    dim_in: int
    dim_out: int

    @abstractmethod
    def _evaluate(self, p: np.ndarray) -> np.ndarray:
        ...

    def _evaluate_many(self, points: np.ndarray) -> np.ndarray:
        return np.array([self._evaluate(p) for p in points], dtype=np.float64).reshape(len(points), self.dim_out)

    @abstractmethod
    def describe(self) -> Dict[str, Any]:
        ...

    def evaluate(self, p: PointLike) -> Point:
        p = as_point(p)
        if p.size != self.dim_in:
            raise DimensionError(f"Field expects points of dimension {self.dim_in}, got {p.size}")
        value = np.asarray(self._evaluate(p), dtype=np.float64).reshape(self.dim_out)
        if not np.all(np.isfinite(value)):
            raise OperatorError(f"Field {self.describe()} is non-finite at {p.tolist()}")
        return as_point(value)

    def evaluate_many(self, points: np.ndarray) -> np.ndarray:
        points = np.asarray(points, dtype=np.float64)
        if points.ndim != 2 or points.shape[1] != self.dim_in:
            raise DimensionError(f"Field expects an (N, {self.dim_in}) array, got shape {points.shape}")
        if len(points) == 0:
            return np.zeros((0, self.dim_out))
        values = np.asarray(self._evaluate_many(points), dtype=np.float64)
        bad = ~np.all(np.isfinite(values), axis=1)
        if np.any(bad):
            where = points[int(np.argmax(bad))]
            raise OperatorError(f"Field {self.describe()} is non-finite at {where.tolist()}")
        return _frozen(values)

    def __call__(self, p: PointLike) -> Point:
        return self.evaluate(p)


@dataclass(frozen=True, eq=False)
class CatalogField(VectorField):
    """Closed-form field; closed_form maps an (N, dim_in) array to (N, dim_out)"""
    name: str
    dim_in: int
    dim_out: int
    closed_form: Callable[[np.ndarray], np.ndarray] = field(repr=False)

    def _evaluate(self, p):
        return self.closed_form(p[None, :])[0]

    def _evaluate_many(self, points):
        return self.closed_form(points)

    def describe(self):
        return {"body": "catalog", "name": self.name, "dim": self.dim_in}


@dataclass(frozen=True, eq=False)
class ExprField(VectorField):
    """Componentwise field, one expression per output coordinate"""
    components: Tuple[Expression, ...]

    def __post_init__(self):
        if not self.components:
            raise OperatorError("An expression field needs at least one component")
        dims = {c.dim for c in self.components}
        if len(dims) != 1:
            raise DimensionError(f"Expression components disagree on dimension: {sorted(dims)}")

    @property
    def dim_in(self) -> int:
        return self.components[0].dim

    @property
    def dim_out(self) -> int:
        return len(self.components)

    def _evaluate(self, p):
        coords = p.tolist()
        return np.array([evaluate_expression(c, coords) for c in self.components])

    def describe(self):
        return {"body": "expr", "components": [to_source(c) for c in self.components]}


@dataclass(frozen=True, eq=False)
class IdentityField(VectorField):
    dim: int

    @property
    def dim_in(self) -> int:
        return self.dim

    @property
    def dim_out(self) -> int:
        return self.dim

    def _evaluate(self, p):
        return p.copy()

    def _evaluate_many(self, points):
        return points.copy()

    def describe(self):
        return {"body": "identity", "dim": self.dim}


@dataclass(frozen=True, eq=False)
class AffineField(VectorField):
    """p -> M p + b"""
    matrix: np.ndarray
    offset: np.ndarray

    def __post_init__(self):
        matrix = np.array(self.matrix, dtype=np.float64, ndmin=2)
        offset = np.array(self.offset, dtype=np.float64).reshape(-1)
        if matrix.shape[0] != offset.size:
            raise DimensionError(f"Affine matrix has {matrix.shape[0]} rows but offset has {offset.size} entries")
        if not (np.all(np.isfinite(matrix)) and np.all(np.isfinite(offset))):
            raise OperatorError("Affine coefficients must be finite")
        object.__setattr__(self, "matrix", _frozen(matrix))
        object.__setattr__(self, "offset", _frozen(offset))

    @property
    def dim_in(self) -> int:
        return int(self.matrix.shape[1])

    @property
    def dim_out(self) -> int:
        return int(self.matrix.shape[0])

    def _evaluate(self, p):
        return self._evaluate_many(p[None, :])[0]

    def _evaluate_many(self, points):
        return ordered_matvec(points, self.matrix) + self.offset

    def describe(self):
        return {"body": "affine", "matrix": self.matrix.tolist(), "offset": self.offset.tolist()}


@dataclass(frozen=True, eq=False)
class ResidualField(VectorField):
    """p -> p - F(p)"""
    inner: VectorField

    def __post_init__(self):
        if self.inner.dim_in != self.inner.dim_out:
            raise DimensionError("id - F needs F to map R^n into R^n")

    @property
    def dim_in(self) -> int:
        return self.inner.dim_in

    @property
    def dim_out(self) -> int:
        return self.inner.dim_out

    def _evaluate(self, p):
        return p - self.inner.evaluate(p)

    def _evaluate_many(self, points):
        return points - self.inner.evaluate_many(points)

    def describe(self):
        return {"body": "residual", "inner": self.inner.describe()}


@dataclass(frozen=True, eq=False)
class PullbackField(VectorField):
    """p -> M inner(p)"""
    matrix: np.ndarray
    inner: VectorField

    def __post_init__(self):
        matrix = np.array(self.matrix, dtype=np.float64, ndmin=2)
        if matrix.shape[1] != self.inner.dim_out:
            raise DimensionError("Pullback matrix does not match the inner field's output")
        object.__setattr__(self, "matrix", _frozen(matrix))

    @property
    def dim_in(self) -> int:
        return self.inner.dim_in

    @property
    def dim_out(self) -> int:
        return int(self.matrix.shape[0])

    def _evaluate(self, p):
        return ordered_matvec(self.inner.evaluate(p)[None, :], self.matrix)[0]

    def _evaluate_many(self, points):
        return ordered_matvec(self.inner.evaluate_many(points), self.matrix)

    def describe(self):
        return {"body": "pullback", "matrix": self.matrix.tolist(), "inner": self.inner.describe()}


def constant_field(value: Sequence[float], dim_in: int) -> AffineField:
    value = np.asarray(value, dtype=np.float64).reshape(-1)
    return AffineField(np.zeros((value.size, dim_in)), value)


def evaluate(f: VectorField, p: PointLike) -> Point:
    """The field's value at p"""
    return f.evaluate(p)


def evaluate_many(f: VectorField, points: np.ndarray) -> np.ndarray:
    """Row-wise values at an (N, dim_in) array of points"""
    return f.evaluate_many(points)

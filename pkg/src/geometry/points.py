"""
Point construction and validation
A point is a read-only 1-D float64 numpy array
"""

from typing import Iterable, Optional, Union

import numpy as np

from src.errors import DimensionError, GeometryError

Point = np.ndarray
PointLike = Union[np.ndarray, Iterable[float]]


def as_point(coords: PointLike, dim: Optional[int] = None) -> Point:
    """Validate coordinates and freeze them into a Point"""
    arr = np.atleast_1d(np.array(coords, dtype=np.float64)).reshape(-1)
    if arr.size == 0:
        raise GeometryError("A point needs at least one coordinate")
    if not np.all(np.isfinite(arr)):
        raise GeometryError(f"Point has non-finite coordinates: {arr.tolist()}")
    if dim is not None and arr.size != dim:
        raise DimensionError(f"Expected a point of dimension {dim}, got {arr.size}")
    arr.flags.writeable = False
    return arr


def as_points(rows: Iterable[PointLike], dim: Optional[int] = None) -> np.ndarray:
    """Stack rows into a read-only (N, n) array"""
    arr = np.array([np.asarray(r, dtype=np.float64).reshape(-1) for r in rows], dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] == 0:
        raise GeometryError("Expected a nonempty list of points")
    if not np.all(np.isfinite(arr)):
        raise GeometryError("Point list has non-finite coordinates")
    if dim is not None and arr.shape[1] != dim:
        raise DimensionError(f"Expected points of dimension {dim}, got {arr.shape[1]}")
    arr.flags.writeable = False
    return arr


def check_same_dim(*points: np.ndarray):
    dims = {p.shape[-1] for p in points}
    if len(dims) != 1:
        raise DimensionError(f"Dimension mismatch: {sorted(dims)}")

"""
Inequality left-hand sides, scalar and vectorised

Both forms build the difference vector first and take the dot product as
sum(u * v) so the self-pair is exactly zero and exchanging A with a
reproduces the same products.
"""

import logging
from typing import Tuple

import numpy as np

from src.errors import ExpressionError, FieldEvaluationError, OperatorError
from src.geometry import PointLike, as_point
from src.operators import VectorField
from src.vi_core.instance import VIKind

logger = logging.getLogger(__name__)


def _inner(u: np.ndarray, v: np.ndarray) -> float:
    return float(np.sum(u * v)) + 0.0


def evaluate_checked(field: VectorField, p: PointLike, role: str) -> np.ndarray:
    try:
        return field.evaluate(p)
    except (OperatorError, ExpressionError) as exc:
        point = np.asarray(p, dtype=np.float64).tolist()
        raise FieldEvaluationError(f"{role} failed at {point}: {exc}", point) from exc


def evaluate_rows(field: VectorField, points: np.ndarray, role: str) -> np.ndarray:
    """evaluate_many, reporting the first offending row on failure"""
    try:
        return field.evaluate_many(points)
    except (OperatorError, ExpressionError):
        for row in points:
            evaluate_checked(field, row, role)
        raise


def lhs_from_values(kind: VIKind, Ax: np.ndarray, ax: np.ndarray, Ay: np.ndarray, ay: np.ndarray) -> float:
    kind = VIKind(kind)
    if kind is VIKind.S:
        return _inner(Ax, ay - ax)
    if kind is VIKind.iS:
        return _inner(Ay - Ax, ax)
    if kind is VIKind.M:
        return _inner(Ay, ay - ax)
    return _inner(Ay - Ax, ay)


def inequality_lhs(kind: VIKind, A: VectorField, a: VectorField, x: PointLike, y: PointLike) -> float:
    """Left-hand side of the kind's inequality at the pair (x, y)"""
    x, y = as_point(x, A.dim_in), as_point(y, A.dim_in)
    return lhs_from_values(
        kind,
        evaluate_checked(A, x, "A"), evaluate_checked(a, x, "a"),
        evaluate_checked(A, y, "A"), evaluate_checked(a, y, "a"),
    )


def lhs_block(kind: VIKind, Ax: np.ndarray, ax: np.ndarray, Ay: np.ndarray, ay: np.ndarray) -> np.ndarray:
    """(k, m) matrix of left-hand sides for k x-rows against m y-rows"""
    kind = VIKind(kind)
    if kind is VIKind.S:
        u, v = Ax[:, None, :], ay[None, :, :] - ax[:, None, :]
    elif kind is VIKind.iS:
        u, v = Ay[None, :, :] - Ax[:, None, :], ax[:, None, :]
    elif kind is VIKind.M:
        u, v = Ay[None, :, :], ay[None, :, :] - ax[:, None, :]
    else:
        u, v = Ay[None, :, :] - Ax[:, None, :], ay[None, :, :]
    return (u * v).sum(axis=-1) + 0.0


def pairwise_lhs(kind: VIKind, A: VectorField, a: VectorField, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Left-hand sides for every (X[i], Y[j]) pair"""
    X = np.asarray(X, dtype=np.float64)
    Y = np.asarray(Y, dtype=np.float64)
    return lhs_block(kind, evaluate_rows(A, X, "A"), evaluate_rows(a, X, "a"),
                     evaluate_rows(A, Y, "A"), evaluate_rows(a, Y, "a"))


def field_values(A: VectorField, a: VectorField, points: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    return evaluate_rows(A, points, "A"), evaluate_rows(a, points, "a")

"""
Seeded sampling shared by the checkers
"""

from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from src import config
from src.errors import CheckerError, ExpressionError, OperatorError
from src.geometry import ConvexSet, PointLike, as_point
from src.operators import VectorField


def resolve_seed(seed: Optional[int]) -> int:
    return config.DEFAULT_SEED if seed is None else int(seed)


def resolve_tol(tol: Optional[float]) -> float:
    tol = config.DEFAULT_TOL if tol is None else float(tol)
    if tol < 0:
        raise CheckerError(f"tol must be >= 0, got {tol}")
    return tol


def require_trials(trials: int, forced: Optional[Sequence]):
    if trials < 0 or (trials == 0 and not forced):
        raise CheckerError(f"trials must be >= 1 (or forced samples given), got {trials}")


def sample_pairs(D: ConvexSet, trials: int, seed: Optional[int] = None,
                 distinct: bool = False) -> Tuple[np.ndarray, np.ndarray]:
    """trials seeded (x, y) pairs in D, as two (trials, n) arrays"""
    rng = np.random.default_rng(resolve_seed(seed))
    X = D.sample_uniform(rng, trials)
    Y = D.sample_uniform(rng, trials)
    if distinct:
        same = np.all(X == Y, axis=1)
        while np.any(same):
            Y[same] = D.sample_uniform(rng, int(same.sum()))
            same = np.all(X == Y, axis=1)
    return X, Y


def t_values(t_samples: int) -> np.ndarray:
    """Interior segment parameters k / (t_samples + 1), k = 1..t_samples"""
    if t_samples < 1:
        raise CheckerError(f"t_samples must be >= 1, got {t_samples}")
    return np.arange(1, t_samples + 1, dtype=np.float64) / (t_samples + 1)


def safe_rows(field: VectorField, points: np.ndarray) -> Tuple[np.ndarray, Dict[int, str]]:
    """Row values with NaN where evaluation failed, plus the failure messages by row"""
    points = np.asarray(points, dtype=np.float64).reshape(-1, field.dim_in)
    try:
        return np.array(field.evaluate_many(points)), {}
    except (OperatorError, ExpressionError):
        pass
    values = np.full((len(points), field.dim_out), np.nan)
    errors: Dict[int, str] = {}
    for i, p in enumerate(points):
        try:
            values[i] = field.evaluate(p)
        except (OperatorError, ExpressionError) as exc:
            errors[i] = str(exc)
    return values, errors


def forced_point(value: PointLike, dim: int) -> np.ndarray:
    return np.array(as_point(value, dim))

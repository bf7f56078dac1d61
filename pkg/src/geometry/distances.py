"""
Segment and convex-hull distance primitives

hull_projection uses Wolfe's min-norm-point method: a linear minimisation
step over the vertices picks the next vertex, and affine "corral" steps keep
the iterate the min-norm point of the affine hull of the active vertices
whenever that point has positive weights.
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src import config
from src.errors import ConvergenceError, GeometryError
from src.geometry.points import Point, PointLike, as_point, as_points, check_same_dim

logger = logging.getLogger(__name__)


def project_onto_segment(p: PointLike, a: PointLike, b: PointLike) -> Tuple[float, Point]:
    """Return (t, (1-t)a + tb) for the projection of p onto [a, b]"""
    p, a, b = as_point(p), as_point(a), as_point(b)
    check_same_dim(p, a, b)
    d = b - a
    dd = float(d @ d)
    if dd == 0.0:
        return 0.0, a
    t = min(1.0, max(0.0, float((p - a) @ d) / dd))
    return t, as_point((1.0 - t) * a + t * b)


def segment_distance(p: PointLike, a: PointLike, b: PointLike) -> float:
    """Euclidean distance from p to the closed segment [a, b]"""
    _, proj = project_onto_segment(p, a, b)
    return float(np.linalg.norm(as_point(p) - proj))


@dataclass(frozen=True)
class HullProjection:
    """Result of a min-norm-point run"""
    distance: float
    weights: np.ndarray
    nearest: Point
    iterations: int
    bound: float  # distance minus a certified lower bound on the true distance
    converged: bool


def _affine_minimizer(corral: np.ndarray) -> np.ndarray:
    """Weights (summing to one) of the min-norm point in the affine hull of the rows"""
    k = corral.shape[0]
    if k == 1:
        return np.ones(1)
    kkt = np.zeros((k + 1, k + 1))
    kkt[:k, :k] = corral @ corral.T
    kkt[:k, k] = 1.0
    kkt[k, :k] = 1.0
    rhs = np.zeros(k + 1)
    rhs[k] = 1.0
    solution = np.linalg.lstsq(kkt, rhs, rcond=None)[0]
    alpha = solution[:k]
    return alpha / alpha.sum()


def hull_projection(p: PointLike,
                    vertices: Sequence[PointLike],
                    max_iter: Optional[int] = None,
                    tol: Optional[float] = None) -> HullProjection:
    """Nearest point of co(vertices) to p with a certified error bound"""
    if vertices is None or len(vertices) == 0:
        raise GeometryError("hull_distance needs at least one vertex")
    max_iter = config.HULL_MAX_ITER if max_iter is None else max_iter
    tol = config.GEOMETRY_TOL if tol is None else tol

    V = as_points(vertices)
    p = as_point(p, V.shape[1])
    Q = V - p
    m = Q.shape[0]

    start = int(np.argmin(np.einsum("ij,ij->i", Q, Q)))
    active: List[int] = [start]
    lam = np.ones(1)
    x = Q[start].copy()
    bound = math.inf
    converged = False
    iterations = 0

    for iterations in range(1, max_iter + 1):
        xx = float(x @ x)
        dist = math.sqrt(xx)
        if dist <= tol:
            bound = dist
            converged = True
            break
        scores = Q @ x
        j = int(np.argmin(scores))
        # every hull point z has <x, z> >= scores[j], so ||z|| >= scores[j] / ||x||
        bound = (xx - float(scores[j])) / dist
        if bound <= tol:
            converged = True
            break
        if j in active:
            logger.debug(f"min-norm point stalled at bound {bound:.3e}")
            break

        active.append(j)
        lam = np.append(lam, 0.0)
        while True:
            alpha = _affine_minimizer(Q[active])
            if np.all(alpha > 0.0):
                lam = alpha
                break
            # walk from lam toward alpha until the first weight hits zero
            denom = lam - alpha
            safe = np.where(denom > 0.0, denom, 1.0)
            ratios = np.where(alpha <= 0.0, np.where(denom > 0.0, lam / safe, 0.0), np.inf)
            drop = int(np.argmin(ratios))
            theta = min(1.0, float(ratios[drop]))
            lam = theta * alpha + (1.0 - theta) * lam
            keep = [i for i in range(len(active)) if i != drop and lam[i] > 0.0]
            active = [active[i] for i in keep]
            lam = lam[keep]
            lam = lam / lam.sum()
            if len(active) == 1:
                break
        x = lam @ Q[active]

    weights = np.zeros(m)
    weights[active] = lam
    weights.flags.writeable = False
    return HullProjection(
        distance=float(np.linalg.norm(x)),
        weights=weights,
        nearest=as_point(p + x),
        iterations=iterations,
        bound=float(bound),
        converged=converged,
    )


def hull_distance(p: PointLike,
                  vertices: Sequence[PointLike],
                  max_iter: Optional[int] = None,
                  tol: Optional[float] = None) -> float:
    """Distance from p to co(vertices); raises ConvergenceError if the bound is not met"""
    result = hull_projection(p, vertices, max_iter=max_iter, tol=tol)
    if not result.converged:
        raise ConvergenceError(
            f"hull distance did not reach tolerance after {result.iterations} iterations "
            f"(distance {result.distance:.3e}, bound {result.bound:.3e})",
            bound=result.bound,
            iterations=result.iterations,
        )
    return result.distance


def convex_sample(vertices: Sequence[PointLike], seed: int) -> Tuple[Point, np.ndarray]:
    """Seeded random point of co(vertices) together with its convex weights"""
    if vertices is None or len(vertices) == 0:
        raise GeometryError("convex_sample needs at least one vertex")
    V = as_points(vertices)
    m = V.shape[0]
    if m == 1:
        weights = np.ones(1)
    else:
        rng = np.random.default_rng(seed)
        u = rng.random(m)
        if u.sum() == 0.0:
            u = np.ones(m)
        weights = u / u.sum()
        weights[int(np.argmax(weights))] += 1.0 - math.fsum(weights)
    weights.flags.writeable = False
    return as_point(weights @ V), weights

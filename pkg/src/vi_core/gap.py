"""
Gap functions over finite sample sets

g(x) = max over sampled y of -LHS(x, y). With x among the samples the
self-pair contributes 0, so g(x) >= 0. Ties resolve to the lowest y index.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Dict, Optional, Tuple

import numpy as np

from src import config
from src.errors import GeometryError
from src.geometry import ConvexSet, PointLike, SampleGrid, as_point
from src.metrics import lhs_evaluations_total
from src.operators import VectorField
from src.vi_core.instance import VIInstance, VIKind
from src.vi_core.lhs import evaluate_checked, field_values, lhs_block

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GapReport:
    x: np.ndarray
    gap: float
    worst_y: np.ndarray
    resolution: int
    tol: float
    is_solution: bool
    kind: str
    samples: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "x": self.x.tolist(),
            "gap": self.gap,
            "worst_y": self.worst_y.tolist(),
            "resolution": self.resolution,
            "samples": self.samples,
            "tol": self.tol,
            "is_solution": self.is_solution,
        }


@dataclass(frozen=True)
class GapField:
    """Gap value and worst-y index for every row of X against a y-universe"""
    gaps: np.ndarray
    worst_index: np.ndarray

    def argmin(self) -> int:
        return int(np.argmin(self.gaps))


def gap_field(kind: VIKind, A: VectorField, a: VectorField, X: np.ndarray, Y: np.ndarray,
              max_workers: Optional[int] = None, chunk_rows: Optional[int] = None) -> GapField:
    """Gaps of every x in X over the universe Y

    Rows of X are processed in blocks on a thread pool; results are combined
    in block order so the output does not depend on scheduling.
    """
    kind = VIKind(kind)
    X = np.asarray(X, dtype=np.float64)
    Y = np.asarray(Y, dtype=np.float64)
    max_workers = max_workers or config.MAX_WORKERS
    chunk_rows = chunk_rows or config.CHUNK_ROWS

    AX, aX = field_values(A, a, X)
    AY, aY = field_values(A, a, Y)

    def block(start: int) -> Tuple[np.ndarray, np.ndarray]:
        stop = min(start + chunk_rows, len(X))
        violation = -lhs_block(kind, AX[start:stop], aX[start:stop], AY, aY)
        worst = np.argmax(violation, axis=1)
        return violation[np.arange(stop - start), worst] + 0.0, worst

    starts = range(0, len(X), chunk_rows)
    if max_workers > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as executor:
            blocks = list(executor.map(block, starts))
    else:
        blocks = [block(s) for s in starts]

    lhs_evaluations_total.labels(kind=kind.value).inc(len(X) * len(Y))
    if not blocks:
        return GapField(np.zeros(0), np.zeros(0, dtype=np.int64))
    gaps = np.concatenate([b[0] for b in blocks])
    worst = np.concatenate([b[1] for b in blocks]).astype(np.int64)
    return GapField(gaps, worst)


def gap(kind: VIKind, A: VectorField, a: VectorField, K: ConvexSet, x: PointLike, samples: SampleGrid,
        tol: Optional[float] = None) -> GapReport:
    """Gap of x over the samples (x appended when absent)"""
    kind = VIKind(kind)
    tol = config.DEFAULT_TOL if tol is None else float(tol)
    x = as_point(x, K.dim)
    if not K.contains(x, config.EXACT_TOL):
        raise GeometryError(f"x = {x.tolist()} lies outside the domain")
    grid, _ = samples.with_point(x)

    Ax = evaluate_checked(A, x, "A")[None, :]
    ax = evaluate_checked(a, x, "a")[None, :]
    AY, aY = field_values(A, a, grid.points)
    violation = -lhs_block(kind, Ax, ax, AY, aY)[0]
    worst = int(np.argmax(violation))
    value = float(violation[worst]) + 0.0
    lhs_evaluations_total.labels(kind=kind.value).inc(len(grid))

    return GapReport(
        x=x,
        gap=value,
        worst_y=as_point(grid.points[worst]),
        resolution=grid.resolution,
        tol=tol,
        is_solution=value <= tol,
        kind=kind.value,
        samples=len(grid),
    )


def is_solution(instance: VIInstance, x: PointLike, resolution: int,
                tol: Optional[float] = None) -> Tuple[bool, GapReport]:
    """Build the grid, compute the gap at x and return (verdict, certificate)"""
    report = gap(instance.kind, instance.A, instance.a, instance.K, x,
                 instance.K.sample_grid(resolution), tol)
    return report.is_solution, report


def default_search_tol(instance: VIInstance, grid: SampleGrid) -> float:
    """0.05 * spacing * largest field norm seen on the grid"""
    AX, aX = field_values(instance.A, instance.a, grid.points)
    magnitude = max(float(np.max(np.linalg.norm(AX, axis=1))), float(np.max(np.linalg.norm(aX, axis=1))))
    return 0.05 * grid.spacing * magnitude

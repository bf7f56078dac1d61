"""
Fixed points of self-maps via the inverted Stampacchia problem

With A = id and a = id - F, x solves the iS problem iff
<y - x, x - F(x)> >= 0 for all y in K. Taking y = F(x) gives
-||F(x) - x||^2 >= 0, so solutions are exactly the fixed points of F.
"""

from dataclasses import dataclass
from typing import Any, Dict, Iterator, Optional, Tuple

import numpy as np

from src import config
from src.errors import DimensionError, RangeViolation
from src.geometry import ConvexSet, Point
from src.operators import IdentityField, ResidualField, VectorField
from src.solvers.grid_solver import SolveReport, refine, solve_grid
from src.vi_core import VIInstance, VIKind, evaluate_checked, evaluate_rows
from utils.structured_logger import StructuredLogger

logger = StructuredLogger(__name__)


@dataclass(frozen=True)
class FixedPointResult:
    point: Point
    residual: float
    level_residuals: Tuple[float, ...]
    report: SolveReport
    tol: float

    @property
    def converged(self) -> bool:
        return self.residual <= self.tol

    def __iter__(self) -> Iterator[Any]:
        # unpacks as (point, residual)
        yield self.point
        yield self.residual

    def to_dict(self) -> Dict[str, Any]:
        return {
            "point": self.point.tolist(),
            "residual": self.residual,
            "level_residuals": list(self.level_residuals),
            "tol": self.tol,
            "converged": self.converged,
            "solve": self.report.to_dict(),
        }


def check_self_map(F: VectorField, K: ConvexSet, points: np.ndarray):
    """Raise RangeViolation at the first grid point F sends outside K"""
    images = evaluate_rows(F, points, "F")
    for p, image in zip(points, images):
        if not K.contains(image, config.EXACT_TOL):
            raise RangeViolation(
                f"F maps grid point {p.tolist()} to {image.tolist()}, outside the domain",
                p.tolist(), image.tolist(),
            )


def fixed_point_residual(F: VectorField, x: Point) -> float:
    return float(np.linalg.norm(evaluate_checked(F, x, "F") - x))


def brouwer_fixed_point(F: VectorField, K: ConvexSet, resolution: int, levels: int = 3,
                        tol: Optional[float] = None, shrink: float = 0.5) -> FixedPointResult:
    """Grid-solve the fixed-point instance, then refine

    tol is the residual threshold; it defaults to the coarse grid spacing.
    """
    if F.dim_in != K.dim or F.dim_out != K.dim:
        raise DimensionError(f"F must map R^{K.dim} into itself, got {F.dim_in} -> {F.dim_out}")
    grid = K.sample_grid(resolution)
    check_self_map(F, K, grid.points)

    instance = VIInstance(VIKind.iS, IdentityField(K.dim), ResidualField(F), K)
    report = solve_grid(instance, resolution)
    if levels > 0:
        report = refine(instance, report, levels, shrink)

    level_residuals = tuple(fixed_point_residual(F, record.best_x) for record in report.history)
    residual = fixed_point_residual(F, report.best_x)
    tol = grid.spacing if tol is None else float(tol)

    logger.info(
        "Fixed point search finished",
        point=report.best_x,
        residual=residual,
        level_residuals=list(level_residuals),
    )
    return FixedPointResult(report.best_x, residual, level_residuals, report, tol)

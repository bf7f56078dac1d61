"""
Exhaustive grid oracle for the four VI kinds, with local refinement
"""

import time
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from src import config
from src.errors import SolverError
from src.geometry import Box, as_point
from src.metrics import solve_duration_seconds
from src.solvers.certificates import LipschitzModuli, NonexistenceCertificate, nonexistence_certificate
from src.vi_core import VIInstance, default_search_tol, gap_field
from utils.structured_logger import StructuredLogger, log_execution_time

logger = StructuredLogger(__name__)


class Verdict(str, Enum):
    SOLUTION_FOUND = "SolutionFound"
    NO_SOLUTION_AT_RESOLUTION = "NoSolutionAtResolution"


@dataclass(frozen=True)
class LevelRecord:
    level: int
    best_x: np.ndarray
    best_gap: float
    candidates: int
    universe: int
    spacing: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "level": self.level,
            "best_x": self.best_x.tolist(),
            "best_gap": self.best_gap,
            "candidates": self.candidates,
            "universe": self.universe,
            "spacing": self.spacing,
        }


@dataclass(frozen=True)
class SolveReport:
    kind: str
    best_x: np.ndarray
    best_gap: float
    worst_y: np.ndarray
    resolution: int
    refinement_levels: int
    evaluations: int
    verdict: Verdict
    tol: float
    spacing: float
    history: Tuple[LevelRecord, ...]
    universe: np.ndarray
    certificate: Optional[NonexistenceCertificate] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "best_x": self.best_x.tolist(),
            "best_gap": self.best_gap,
            "worst_y": self.worst_y.tolist(),
            "resolution": self.resolution,
            "refinement_levels": self.refinement_levels,
            "evaluations": self.evaluations,
            "verdict": self.verdict.value,
            "tol": self.tol,
            "spacing": self.spacing,
            "history": [record.to_dict() for record in self.history],
            "certificate": self.certificate.to_dict() if self.certificate else None,
        }


def _verdict(best_gap: float, tol: float) -> Verdict:
    return Verdict.SOLUTION_FOUND if best_gap <= tol else Verdict.NO_SOLUTION_AT_RESOLUTION


def _unique_rows(points: np.ndarray) -> np.ndarray:
    _, first = np.unique(points, axis=0, return_index=True)
    return points[np.sort(first)]


@log_execution_time
def solve_grid(instance: VIInstance, resolution: int, tol: Optional[float] = None,
               lipschitz: Optional[LipschitzModuli] = None) -> SolveReport:
    """Minimise the grid gap over the grid itself (N^2 left-hand sides)

    tol defaults to 0.05 * spacing * largest field norm on the grid. With
    Lipschitz moduli, a negative verdict carries a nonexistence certificate.
    """
    started = time.perf_counter()
    grid = instance.K.sample_grid(resolution)
    tol = default_search_tol(instance, grid) if tol is None else float(tol)

    field = gap_field(instance.kind, instance.A, instance.a, grid.points, grid.points)
    best = field.argmin()
    best_gap = float(field.gaps[best])
    best_x = as_point(grid.points[best])
    verdict = _verdict(best_gap, tol)

    certificate = None
    if lipschitz is not None and verdict is Verdict.NO_SOLUTION_AT_RESOLUTION:
        certificate = nonexistence_certificate(instance, best_gap, grid, lipschitz)

    solve_duration_seconds.labels(stage="solve").observe(time.perf_counter() - started)
    logger.info(
        "Grid solve finished",
        kind=instance.kind.value,
        resolution=resolution,
        points=len(grid),
        best_gap=best_gap,
        verdict=verdict.value,
    )

    return SolveReport(
        kind=instance.kind.value,
        best_x=best_x,
        best_gap=best_gap,
        worst_y=as_point(grid.points[field.worst_index[best]]),
        resolution=resolution,
        refinement_levels=0,
        evaluations=len(grid) ** 2,
        verdict=verdict,
        tol=tol,
        spacing=grid.spacing,
        history=(LevelRecord(0, best_x, best_gap, len(grid), len(grid), grid.spacing),),
        universe=grid.points,
        certificate=certificate,
    )


@log_execution_time
def refine(instance: VIInstance, coarse: SolveReport, levels: int, shrink: float = 0.5,
           tol: Optional[float] = None, resolution: Optional[int] = None) -> SolveReport:
    """Re-solve on shrinking boxes around the incumbent

    Level k searches the lattice of the box centred at the incumbent with
    half-width shrink^k * extent / 2, intersected with K. The y-universe keeps
    the coarse global grid and accumulates every local lattice. The incumbent
    stays a candidate, so ties keep it.
    """
    if levels < 1:
        raise SolverError(f"levels must be >= 1, got {levels}")
    if not 0.0 < shrink < 1.0:
        raise SolverError(f"shrink must lie in (0, 1), got {shrink}")
    started = time.perf_counter()
    tol = coarse.tol if tol is None else float(tol)
    resolution = resolution or coarse.resolution
    K = instance.K
    lower, upper = K.bounding_box()
    half_extent = (upper - lower) / 2.0

    universe = coarse.universe
    center = coarse.best_x
    best_gap = coarse.best_gap
    worst_y = coarse.worst_y
    evaluations = coarse.evaluations
    history: List[LevelRecord] = list(coarse.history)
    spacing = coarse.spacing

    for level in range(1, levels + 1):
        half_width = shrink ** level * half_extent
        local_box = Box(np.maximum(center - half_width, lower), np.minimum(center + half_width, upper))
        local = local_box.sample_grid(resolution)
        inside = np.array([K.contains(p, config.EXACT_TOL) for p in local.points], dtype=bool)
        local_points = local.points[inside]

        candidates = _unique_rows(np.vstack([center[None, :], local_points]))
        universe = _unique_rows(np.vstack([universe, local_points]))
        field = gap_field(instance.kind, instance.A, instance.a, candidates, universe)
        best = field.argmin()

        center = as_point(candidates[best])
        best_gap = float(field.gaps[best])
        worst_y = as_point(universe[field.worst_index[best]])
        evaluations += len(candidates) * len(universe)
        spacing = local.spacing
        history.append(LevelRecord(level, center, best_gap, len(candidates), len(universe), spacing))

        logger.debug(
            "Refinement level finished",
            refinement_level=level,
            best_gap=best_gap,
            candidates=len(candidates),
            universe=len(universe),
        )

    solve_duration_seconds.labels(stage="refine").observe(time.perf_counter() - started)
    verdict = _verdict(best_gap, tol)
    logger.info("Refinement finished", levels=levels, best_gap=best_gap, verdict=verdict.value)

    return SolveReport(
        kind=coarse.kind,
        best_x=center,
        best_gap=best_gap,
        worst_y=worst_y,
        resolution=coarse.resolution,
        refinement_levels=coarse.refinement_levels + levels,
        evaluations=evaluations,
        verdict=verdict,
        tol=tol,
        spacing=spacing,
        history=tuple(history),
        universe=universe,
        certificate=coarse.certificate if verdict is Verdict.NO_SOLUTION_AT_RESOLUTION else None,
    )

"""
Deterministic dense checks for one-dimensional fields

On an ordered grid, type ql means no interior value leaves the interval
spanned by any value to its left and any value to its right, which holds
exactly when the sampled values are monotone. Both sides are computed here
so the equivalence can be observed directly.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from src.errors import CheckerError
from src.geometry import ConvexSet, segment_distance
from src.metrics import checker_trials_total
from src.operators import VectorField
from src.checkers.reports import SAMPLED_NOTE, PropertyReport, Witness
from src.checkers.sampling import resolve_tol
from src.vi_core import evaluate_rows

DENSE_POINTS = 100_000


class Monotonicity(Enum):
    """Monotonicity of a sampled sequence.

     * Nondecreasing: v[i+1] >= v[i] for all i
     * Nonincreasing: v[i+1] <= v[i] for all i
     * Constant: both
     * Nonmonotone: neither
    """
    Nondecreasing = 0
    Nonincreasing = 1
    Constant = 2
    Nonmonotone = 3

    def is_monotone(self) -> bool:
        return self != Monotonicity.Nonmonotone


@dataclass(frozen=True)
class MonotonicityScan:
    monotonicity: Monotonicity
    points: int
    first_increase: Optional[int]
    first_decrease: Optional[int]

    @property
    def passed(self) -> bool:
        return self.monotonicity.is_monotone()

    def to_dict(self):
        return {
            "monotonicity": self.monotonicity.name,
            "points": self.points,
            "first_increase": self.first_increase,
            "first_decrease": self.first_decrease,
            "passed": self.passed,
        }


def _dense_values(A: VectorField, D: ConvexSet, points: int) -> Tuple[np.ndarray, np.ndarray]:
    if D.dim != 1 or A.dim_in != 1 or A.dim_out != 1:
        raise CheckerError("Dense scans need a field from R into R on a one-dimensional domain")
    grid = D.sample_grid(points)
    return grid.points[:, 0], evaluate_rows(A, grid.points, "A")[:, 0]


def monotonicity_scan_1d(A: VectorField, D: ConvexSet, points: int = DENSE_POINTS,
                         tol: Optional[float] = None) -> MonotonicityScan:
    """Sign-constancy of consecutive differences over a dense ordered grid"""
    tol = resolve_tol(tol)
    _, values = _dense_values(A, D, points)
    steps = np.diff(values)
    ups = np.flatnonzero(steps > tol)
    downs = np.flatnonzero(steps < -tol)
    if ups.size and downs.size:
        monotonicity = Monotonicity.Nonmonotone
    elif ups.size:
        monotonicity = Monotonicity.Nondecreasing
    elif downs.size:
        monotonicity = Monotonicity.Nonincreasing
    else:
        monotonicity = Monotonicity.Constant
    return MonotonicityScan(
        monotonicity, len(values),
        int(ups[0]) if ups.size else None,
        int(downs[0]) if downs.size else None,
    )


def check_ql_dense_1d(A: VectorField, D: ConvexSet, points: int = DENSE_POINTS,
                      tol: Optional[float] = None) -> PropertyReport:
    """Exact all-triples ql test on a dense 1-D grid via prefix/suffix extrema

    Trial k is the interior grid point k; it fails when its value exceeds
    (or undercuts) some value on each side by more than tol.
    """
    tol = resolve_tol(tol)
    xs, values = _dense_values(A, D, points)
    if len(values) < 3:
        raise CheckerError("Dense ql scan needs at least 3 points")
    prefix_min = np.minimum.accumulate(values)[:-2]
    prefix_max = np.maximum.accumulate(values)[:-2]
    suffix_min = np.minimum.accumulate(values[::-1])[::-1][2:]
    suffix_max = np.maximum.accumulate(values[::-1])[::-1][2:]
    interior = values[1:-1]
    above = interior - np.maximum(prefix_min, suffix_min)
    below = np.minimum(prefix_max, suffix_max) - interior
    excess = np.maximum(above, below)
    failing = np.flatnonzero(excess > tol)

    witness = None
    if failing.size:
        k = int(failing[0]) + 1
        if above[k - 1] >= below[k - 1]:
            i = int(np.argmin(values[:k]))
            j = k + 1 + int(np.argmin(values[k + 1:]))
        else:
            i = int(np.argmax(values[:k]))
            j = k + 1 + int(np.argmax(values[k + 1:]))
        distance = segment_distance([values[k]], [values[i]], [values[j]])
        witness = Witness(
            k - 1, "outside_segment",
            {"x": [xs[i]], "y": [xs[j]], "z": [xs[k]], "A(x)": [values[i]], "A(y)": [values[j]], "A(z)": [values[k]]},
            -distance, float((xs[k] - xs[i]) / (xs[j] - xs[i])), {"distance": distance},
        )

    trials = len(interior)
    violations = int(failing.size)
    checker_trials_total.labels(property="ql_dense_1d", status="fail").inc(violations)
    checker_trials_total.labels(property="ql_dense_1d", status="pass").inc(trials - violations)
    return PropertyReport(
        property="ql_dense_1d",
        trials=trials,
        passed=witness is None,
        witness=witness,
        tol=tol,
        seed=0,
        violations=violations,
        notes=(SAMPLED_NOTE, f"deterministic grid of {len(values)} points"),
        parameters={"points": points},
    )

"""
Re-evaluation of failing witnesses from scratch
"""

from typing import Optional

import numpy as np

from src.errors import CheckerError, VIToolkitError
from src.geometry import ConvexSet, hull_distance, segment_distance
from src.operators import VectorField
from src.checkers.classes import monotone_value, stuck_length
from src.checkers.reports import PropertyReport, RecheckResult
from src.checkers.theorems import kkm_value, minty_candidates, minty_gaps
from src.vi_core import VIKind, evaluate_checked, lhs_from_values


def _point(witness, key) -> np.ndarray:
    return np.asarray(witness.points[key], dtype=np.float64)


def recheck(report: PropertyReport, A: VectorField, a: Optional[VectorField] = None,
            K: Optional[ConvexSet] = None) -> RecheckResult:
    """Recompute a failing report's witness; violated=True reproduces the failure

    a is needed for monotone_relative, a_pseudomonotone, kkm and minty; K
    (the checked domain) for minty.
    """
    witness = report.witness
    if witness is None:
        raise CheckerError(f"Report for '{report.property}' passed; there is no witness to recheck")

    if witness.reason == "evaluation_error":
        return RecheckResult(float("nan"), not _evaluates(witness, A, a))
    if witness.reason == "not_converged":
        try:
            result = _recompute_quantitative(report, A, a, K)
        except VIToolkitError:
            return RecheckResult(float("nan"), True)
        return result
    return _recompute_quantitative(report, A, a, K)


def _evaluates(witness, A: VectorField, a: Optional[VectorField]) -> bool:
    rows = []
    for value in witness.points.values():
        arr = np.asarray(value, dtype=np.float64)
        rows.extend(arr.reshape(-1, A.dim_in))
    try:
        for row in rows:
            evaluate_checked(A, row, "A")
            if a is not None:
                evaluate_checked(a, row, "a")
    except VIToolkitError:
        return False
    return True


def _recompute_quantitative(report: PropertyReport, A: VectorField, a: Optional[VectorField],
                            K: Optional[ConvexSet]) -> RecheckResult:
    witness, tol, prop = report.witness, report.tol, report.property

    if prop in ("ql", "strict_ql", "ql_dense_1d"):
        x, y = _point(witness, "x"), _point(witness, "y")
        Ax, Ay = evaluate_checked(A, x, "A"), evaluate_checked(A, y, "A")
        if witness.reason == "degenerate":
            gap = float(np.linalg.norm(Ax - Ay))
            return RecheckResult(-float(np.linalg.norm(y - x)), gap <= tol)
        z = _point(witness, "z") if prop == "ql_dense_1d" else (1.0 - witness.t) * x + witness.t * y
        Az = evaluate_checked(A, z, "A")
        if witness.reason == "empty_segment":
            moved = float(np.linalg.norm(Az - Ax))
            return RecheckResult(-moved, float(np.linalg.norm(Ax - Ay)) <= tol and moved > tol)
        if witness.reason == "endpoint":
            margin = float(report.parameters.get("strict_margin", 0.0))
            nearest = min(float(np.linalg.norm(Az - Ax)), float(np.linalg.norm(Az - Ay)))
            return RecheckResult(-stuck_length(x, y, z, Ax, Ay, Az), nearest <= margin)
        distance = segment_distance(Az, Ax, Ay)
        return RecheckResult(-distance, -distance < -tol)

    if prop == "hull_image":
        points = np.asarray(witness.points["points"], dtype=np.float64)
        images = np.array([evaluate_checked(A, p, "A") for p in points])
        distance = hull_distance(evaluate_checked(A, _point(witness, "x"), "A"), images)
        return RecheckResult(-distance, -distance < -tol)

    if a is None:
        raise CheckerError(f"Rechecking '{prop}' needs the field a")

    if prop == "monotone_relative":
        x, y = _point(witness, "x"), _point(witness, "y")
        value = monotone_value(evaluate_checked(A, x, "A"), evaluate_checked(A, y, "A"),
                               evaluate_checked(a, x, "a"), evaluate_checked(a, y, "a"))
        return RecheckResult(value, value < -tol)

    if prop == "a_pseudomonotone":
        x, y = _point(witness, "x"), _point(witness, "y")
        values = (evaluate_checked(A, x, "A"), evaluate_checked(a, x, "a"),
                  evaluate_checked(A, y, "A"), evaluate_checked(a, y, "a"))
        antecedent = lhs_from_values(VIKind.S, *values)
        consequent = lhs_from_values(VIKind.M, *values)
        return RecheckResult(consequent, antecedent >= -tol and consequent < -tol)

    if prop == "kkm":
        value, _ = kkm_value(A, a, np.asarray(witness.points["points"], dtype=np.float64), _point(witness, "x"))
        return RecheckResult(value, value < -tol)

    if prop == "minty":
        if K is None:
            raise CheckerError("Rechecking 'minty' needs the domain K")
        x = _point(witness, "x")
        grid = K.sample_grid(int(report.parameters["resolution"]))
        candidates, universe = minty_candidates(K, grid.points, [x])
        gaps_iS, gaps_iM = minty_gaps(A, a, candidates, universe)
        missing = gaps_iM[0] if witness.reason == "not_in_iM" else gaps_iS[0]
        present = gaps_iS[0] if witness.reason == "not_in_iM" else gaps_iM[0]
        return RecheckResult(-float(missing), present <= tol and -float(missing) < -tol)

    raise CheckerError(f"Unknown property '{prop}'")

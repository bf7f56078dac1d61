"""
Sampled checks of theorem-level relations: images of convex combinations,
the KKM covering property of G(y) = {x : <A(y) - A(x), a(x)> >= 0}, and
inclusions between the inverted Stampacchia and Minty solution sets
"""

import logging
from enum import Enum
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from src import config
from src.errors import CheckerError, ConvergenceError, VIToolkitError
from src.geometry import ConvexSet, PointLike, as_point, as_points, convex_sample, hull_distance
from src.operators import VectorField
from src.checkers.classes import check_a_pseudomonotone, check_monotone_relative, check_strict_ql
from src.checkers.reports import PropertyReport, Tally, Witness
from src.checkers.sampling import forced_point, require_trials, resolve_seed, resolve_tol, safe_rows
from src.vi_core import VIInstance, VIKind, evaluate_checked, gap_field, lhs_from_values

logger = logging.getLogger(__name__)


class MintyDirection(str, Enum):
    IS_SUBSET_IM = "iS_subset_iM"
    IM_SUBSET_IS = "iM_subset_iS"


def _combination_trials(D: ConvexSet, n_points: int, trials: int, seed: int,
                        forced: Optional[Sequence[Mapping[str, Any]]]) -> List[Tuple[np.ndarray, np.ndarray, np.ndarray]]:
    """(points, weights, x) per trial; forced entries give points plus weights or x"""
    if n_points < 1:
        raise CheckerError(f"n_points must be >= 1, got {n_points}")
    out = []
    for item in forced or ():
        points = np.array(as_points(item["points"], D.dim))
        if item.get("weights") is not None:
            weights = np.asarray(item["weights"], dtype=np.float64)
            if weights.shape != (len(points),) or np.any(weights < 0) or abs(weights.sum() - 1.0) > config.EXACT_TOL:
                raise CheckerError("Forced weights must be nonnegative, one per point, summing to 1")
            x = weights @ points
        else:
            weights = np.full(len(points), np.nan)
            x = forced_point(item["x"], D.dim)
        out.append((points, weights, x))
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        points = D.sample_uniform(rng, n_points)
        x, weights = convex_sample(points, int(rng.integers(2 ** 32)))
        out.append((points, np.array(weights), np.array(x)))
    return out


def check_hull_image(A: VectorField, D: ConvexSet, n_points: int = 4, trials: int = 1000,
                     tol: Optional[float] = None, seed: Optional[int] = None,
                     forced: Optional[Sequence[Mapping[str, Any]]] = None) -> PropertyReport:
    """Falsify A(x) in co{A(x_1), ..., A(x_n)} for x a convex combination of the x_i"""
    tol, seed = resolve_tol(tol), resolve_seed(seed)
    require_trials(trials, forced)
    tally = Tally("hull_image")
    for i, (points, weights, x) in enumerate(_combination_trials(D, n_points, trials, seed, forced)):
        images, e1 = safe_rows(A, points)
        Ax, e2 = safe_rows(A, x[None, :])
        if e1 or e2:
            error = next(iter({**e2, **e1}.values()))
            tally.failed_trial(Witness(i, "evaluation_error", {"points": points, "x": x}, float("nan"),
                                       detail={"error": error}))
            continue
        try:
            distance = hull_distance(Ax[0], images)
        except ConvergenceError as exc:
            tally.failed_trial(Witness(i, "not_converged", {"points": points, "x": x}, float("nan"),
                                       detail={"error": str(exc), "bound": exc.bound}))
            continue
        if distance > tol:
            tally.failed_trial(Witness(
                i, "outside_hull",
                {"points": points, "weights": weights, "x": x, "A(x)": Ax[0], "images": images},
                -distance, detail={"distance": distance},
            ))
        else:
            tally.passed_trial()
    return tally.report(tol, seed, {"n_points": n_points, "trials": trials, "forced": list(forced or [])})


def kkm_value(A: VectorField, a: VectorField, ys: np.ndarray, x: PointLike) -> Tuple[float, int]:
    """max_i <A(y_i) - A(x), a(x)> and the first index attaining it"""
    Ax = evaluate_checked(A, x, "A")
    ax = evaluate_checked(a, x, "a")
    values = [lhs_from_values(VIKind.iS, Ax, ax, evaluate_checked(A, y, "A"), evaluate_checked(a, y, "a")) for y in ys]
    best = int(np.argmax(values))
    return float(values[best]), best


def kkm_map_contains(A: VectorField, a: VectorField, y: PointLike, x: PointLike, tol: Optional[float] = None) -> bool:
    """x in G(y), i.e. <A(y) - A(x), a(x)> >= -tol"""
    value, _ = kkm_value(A, a, np.array([as_point(y)]), x)
    return value >= -resolve_tol(tol)


def check_kkm(A: VectorField, a: VectorField, K: ConvexSet, n_points: int = 3, trials: int = 1000,
              tol: Optional[float] = None, seed: Optional[int] = None,
              forced: Optional[Sequence[Mapping[str, Any]]] = None) -> PropertyReport:
    """Falsify co{y_1..y_n} in G(y_1) u ... u G(y_n) on sampled convex combinations"""
    tol, seed = resolve_tol(tol), resolve_seed(seed)
    require_trials(trials, forced)
    tally = Tally("kkm")
    for i, (points, weights, x) in enumerate(_combination_trials(K, n_points, trials, seed, forced)):
        try:
            value, best = kkm_value(A, a, points, x)
        except VIToolkitError as exc:
            tally.failed_trial(Witness(i, "evaluation_error", {"points": points, "x": x}, float("nan"),
                                       detail={"error": str(exc)}))
            continue
        if value < -tol:
            tally.failed_trial(Witness(
                i, "escapes_union", {"points": points, "weights": weights, "x": x}, value,
                detail={"max_lhs": value, "best_index": best},
            ))
        else:
            tally.passed_trial()
    return tally.report(tol, seed, {"n_points": n_points, "trials": trials, "forced": list(forced or [])})


def kkm_intersection(instance: VIInstance, resolution: int, tol: Optional[float] = None) -> np.ndarray:
    """Grid points lying in G(y) for every grid y (the grid-scale solution set of the iS problem)"""
    tol = resolve_tol(tol)
    grid = instance.K.sample_grid(resolution)
    field = gap_field(VIKind.iS, instance.A, instance.a, grid.points, grid.points)
    return grid.points[field.gaps <= tol]


def minty_candidates(K: ConvexSet, grid_points: np.ndarray, points: Optional[Sequence[PointLike]]) -> Tuple[np.ndarray, np.ndarray]:
    if points is None:
        return grid_points, grid_points
    candidates = np.array(as_points(points, K.dim))
    for p in candidates:
        if not K.contains(p, config.EXACT_TOL):
            raise CheckerError(f"Candidate {p.tolist()} lies outside the domain")
    missing = [p for p in candidates if not np.any(np.all(grid_points == p, axis=1))]
    universe = np.vstack([grid_points] + [p[None, :] for p in missing]) if missing else grid_points
    return candidates, universe


def minty_gaps(A: VectorField, a: VectorField, candidates: np.ndarray, universe: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    gaps_iS = gap_field(VIKind.iS, A, a, candidates, universe).gaps
    gaps_iM = gap_field(VIKind.iM, A, a, candidates, universe).gaps
    return gaps_iS, gaps_iM


def check_minty_inclusion(A: VectorField, a: VectorField, K: ConvexSet, resolution: int = 33,
                          tol: Optional[float] = None, direction: str = MintyDirection.IS_SUBSET_IM,
                          points: Optional[Sequence[PointLike]] = None, hypotheses: bool = False,
                          seed: Optional[int] = None, hypothesis_trials: int = 200) -> PropertyReport:
    """Compare the grid solution sets of the inverted Stampacchia and Minty problems

    points restricts the candidate x's (the y-universe stays the full grid
    plus those points). With hypotheses=True the relevant hypotheses are
    sample-checked and recorded: monotone relative to a and a-pseudomonotone
    for iS_subset_iM, strict ql for iM_subset_iS.
    """
    tol, seed = resolve_tol(tol), resolve_seed(seed)
    direction = MintyDirection(direction)
    grid = K.sample_grid(resolution)
    candidates, universe = minty_candidates(K, grid.points, points)
    gaps_iS, gaps_iM = minty_gaps(A, a, candidates, universe)
    in_iS, in_iM = gaps_iS <= tol, gaps_iM <= tol

    tally = Tally("minty")
    for i, x in enumerate(candidates):
        detail = {"gap_iS": float(gaps_iS[i]), "gap_iM": float(gaps_iM[i])}
        if direction is MintyDirection.IS_SUBSET_IM and in_iS[i] and not in_iM[i]:
            tally.failed_trial(Witness(i, "not_in_iM", {"x": x}, -float(gaps_iM[i]), detail=detail))
        elif direction is MintyDirection.IM_SUBSET_IS and in_iM[i] and not in_iS[i]:
            tally.failed_trial(Witness(i, "not_in_iS", {"x": x}, -float(gaps_iS[i]), detail=detail))
        else:
            tally.passed_trial()

    checked: Dict[str, bool] = {}
    if hypotheses:
        if direction is MintyDirection.IS_SUBSET_IM:
            checked["monotone_relative"] = check_monotone_relative(A, a, K, hypothesis_trials, tol, seed).passed
            checked["a_pseudomonotone"] = check_a_pseudomonotone(A, a, K, hypothesis_trials, tol, seed).passed
        else:
            checked["strict_ql"] = check_strict_ql(A, K, hypothesis_trials, tol=tol, seed=seed).passed
            tally.notes.append("continuity of a on line segments is assumed, not checked")
    tally.notes.append(
        f"solution sets: |S_iS| = {int(in_iS.sum())}, |S_iM| = {int(in_iM.sum())} of {len(candidates)} candidates"
    )
    parameters = {"resolution": resolution, "direction": direction.value,
                  "points": None if points is None else candidates}
    return tally.report(tol, seed, parameters, checked)

"""
Sampled falsifiers for operator classes: type ql, strict ql, monotonicity
relative to a, and a-pseudomonotonicity
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Mapping, Optional, Sequence

import numpy as np

from src.errors import CheckerError
from src.geometry import ConvexSet, segment_distance
from src.operators import VectorField
from src.checkers.reports import PropertyReport, Tally, Witness
from src.checkers.sampling import (
    forced_point,
    require_trials,
    resolve_seed,
    resolve_tol,
    safe_rows,
    sample_pairs,
    t_values,
)
from src.vi_core import VIKind, lhs_from_values

logger = logging.getLogger(__name__)

STRICT_QL_CONVENTION = (
    "pairs with A(x) = A(y) (within tol) have an empty open segment: the trial fails unless "
    "A(z) equals them too, in which case it is counted as degenerate and the report does not pass; "
    "endpoint and degenerate slacks are minus the length of the x-segment whose image sits on an endpoint"
)


@dataclass
class SegmentTrial:
    index: int
    x: np.ndarray
    y: np.ndarray
    ts: np.ndarray
    zs: np.ndarray
    Ax: np.ndarray
    Ay: np.ndarray
    Az: np.ndarray
    error: Optional[str]


def _segment_trials(A: VectorField, D: ConvexSet, trials: int, t_samples: int, seed: int,
                    forced: Optional[Sequence[Mapping[str, Any]]], distinct: bool) -> List[SegmentTrial]:
    n = D.dim
    default_ts = t_values(t_samples)
    xs, ys, tss = [], [], []
    for item in forced or ():
        x, y = forced_point(item["x"], n), forced_point(item["y"], n)
        if distinct and np.array_equal(x, y):
            raise CheckerError(f"Forced trial needs x != y, got x = y = {x.tolist()}")
        xs.append(x)
        ys.append(y)
        if distinct and item.get("t") is not None and not 0.0 < float(item["t"]) < 1.0:
            raise CheckerError(f"Forced strict trial needs t in (0, 1), got {item['t']}")
        tss.append(np.array([float(item["t"])]) if item.get("t") is not None else default_ts)
    if trials:
        X, Y = sample_pairs(D, trials, seed, distinct=distinct)
        xs.extend(X)
        ys.extend(Y)
        tss.extend([default_ts] * trials)

    zs = [(1.0 - ts)[:, None] * x[None, :] + ts[:, None] * y[None, :] for x, y, ts in zip(xs, ys, tss)]
    AX, x_errors = safe_rows(A, np.array(xs))
    AY, y_errors = safe_rows(A, np.array(ys))
    AZ, z_errors = safe_rows(A, np.vstack(zs))

    out = []
    start = 0
    for i, (x, y, ts, z) in enumerate(zip(xs, ys, tss, zs)):
        stop = start + len(ts)
        error = x_errors.get(i) or y_errors.get(i)
        if error is None:
            error = next((z_errors[k] for k in range(start, stop) if k in z_errors), None)
        out.append(SegmentTrial(i, x, y, ts, z, AX[i], AY[i], AZ[start:stop], error))
        start = stop
    return out


def stuck_length(x: np.ndarray, y: np.ndarray, z: np.ndarray, Ax: np.ndarray, Ay: np.ndarray,
                 Az: np.ndarray) -> float:
    """Length of [x, z] or [z, y], whichever ends at the point whose image A(z) is nearest"""
    if np.linalg.norm(Az - Ax) <= np.linalg.norm(Az - Ay):
        return float(np.linalg.norm(z - x))
    return float(np.linalg.norm(y - z))


def _error_witness(trial: int, points: Dict[str, Any], error: str) -> Witness:
    return Witness(trial, "evaluation_error", points, float("nan"), detail={"error": error})


def check_ql(A: VectorField, D: ConvexSet, trials: int = 1000, t_samples: int = 9,
             tol: Optional[float] = None, seed: Optional[int] = None,
             forced: Optional[Sequence[Mapping[str, Any]]] = None) -> PropertyReport:
    """Falsify A(z) in [A(x), A(y)] for z on sampled segments [x, y] of D

    forced trials ({"x", "y", optional "t"}) run first and keep the lowest
    trial indices.
    """
    tol, seed = resolve_tol(tol), resolve_seed(seed)
    require_trials(trials, forced)
    tally = Tally("ql")
    for trial in _segment_trials(A, D, trials, t_samples, seed, forced, distinct=False):
        if trial.error:
            tally.failed_trial(_error_witness(trial.index, {"x": trial.x, "y": trial.y}, trial.error))
            continue
        for t, z, Az in zip(trial.ts, trial.zs, trial.Az):
            distance = segment_distance(Az, trial.Ax, trial.Ay)
            if distance > tol:
                tally.failed_trial(Witness(
                    trial.index, "outside_segment",
                    {"x": trial.x, "y": trial.y, "z": z, "A(x)": trial.Ax, "A(y)": trial.Ay, "A(z)": Az},
                    -distance, float(t), {"distance": distance},
                ))
                break
        else:
            tally.passed_trial()
    return tally.report(tol, seed, {"trials": trials, "t_samples": t_samples, "forced": list(forced or [])})


def check_strict_ql(A: VectorField, D: ConvexSet, trials: int = 1000, t_samples: int = 9,
                    tol: Optional[float] = None, strict_margin: float = 0.0, seed: Optional[int] = None,
                    forced: Optional[Sequence[Mapping[str, Any]]] = None) -> PropertyReport:
    """Falsify A(z) in the open segment (A(x), A(y)) for x != y"""
    tol, seed = resolve_tol(tol), resolve_seed(seed)
    require_trials(trials, forced)
    tally = Tally("strict_ql")
    tally.notes.append(STRICT_QL_CONVENTION)
    for trial in _segment_trials(A, D, trials, t_samples, seed, forced, distinct=True):
        if trial.error:
            tally.failed_trial(_error_witness(trial.index, {"x": trial.x, "y": trial.y}, trial.error))
            continue
        images_equal = float(np.linalg.norm(trial.Ax - trial.Ay)) <= tol
        outcome = None
        for t, z, Az in zip(trial.ts, trial.zs, trial.Az):
            points = {"x": trial.x, "y": trial.y, "z": z, "A(x)": trial.Ax, "A(y)": trial.Ay, "A(z)": Az}
            to_x = float(np.linalg.norm(Az - trial.Ax))
            to_y = float(np.linalg.norm(Az - trial.Ay))
            if images_equal:
                if to_x > tol:
                    outcome = Witness(trial.index, "empty_segment", points, -to_x, float(t), {"distance": to_x})
                    break
                continue
            distance = segment_distance(Az, trial.Ax, trial.Ay)
            if distance > tol:
                outcome = Witness(trial.index, "outside_segment", points, -distance, float(t), {"distance": distance})
                break
            nearest_end = min(to_x, to_y)
            if nearest_end <= strict_margin:
                stuck = stuck_length(trial.x, trial.y, z, trial.Ax, trial.Ay, Az)
                outcome = Witness(trial.index, "endpoint", points, -stuck, float(t),
                                  {"distance": distance, "endpoint_distance": nearest_end, "stuck_length": stuck})
                break
        if outcome is not None:
            tally.failed_trial(outcome)
        elif images_equal:
            tally.degenerate_trial(Witness(
                trial.index, "degenerate",
                {"x": trial.x, "y": trial.y, "A(x)": trial.Ax, "A(y)": trial.Ay},
                -float(np.linalg.norm(trial.y - trial.x)),
                detail={"image_gap": float(np.linalg.norm(trial.Ax - trial.Ay))},
            ))
        else:
            tally.passed_trial()
    parameters = {"trials": trials, "t_samples": t_samples, "strict_margin": strict_margin,
                  "forced": list(forced or [])}
    return tally.report(tol, seed, parameters)


def _pair_values(A: VectorField, a: VectorField, D: ConvexSet, trials: int, seed: int,
                 forced: Optional[Sequence[Mapping[str, Any]]]):
    n = D.dim
    xs = [forced_point(item["x"], n) for item in forced or ()]
    ys = [forced_point(item["y"], n) for item in forced or ()]
    if trials:
        X, Y = sample_pairs(D, trials, seed)
        xs.extend(X)
        ys.extend(Y)
    X, Y = np.array(xs), np.array(ys)
    AX, e1 = safe_rows(A, X)
    AY, e2 = safe_rows(A, Y)
    aX, e3 = safe_rows(a, X)
    aY, e4 = safe_rows(a, Y)
    errors = {**e4, **e3, **e2, **e1}
    return X, Y, AX, AY, aX, aY, errors


def monotone_value(Ax: np.ndarray, Ay: np.ndarray, ax: np.ndarray, ay: np.ndarray) -> float:
    """<A(x) - A(y), a(x) - a(y)>"""
    return float(np.sum((Ax - Ay) * (ax - ay))) + 0.0


def check_monotone_relative(A: VectorField, a: VectorField, D: ConvexSet, trials: int = 1000,
                            tol: Optional[float] = None, seed: Optional[int] = None,
                            forced: Optional[Sequence[Mapping[str, Any]]] = None) -> PropertyReport:
    """Falsify <A(x) - A(y), a(x) - a(y)> >= 0 on sampled pairs"""
    tol, seed = resolve_tol(tol), resolve_seed(seed)
    require_trials(trials, forced)
    tally = Tally("monotone_relative")
    X, Y, AX, AY, aX, aY, errors = _pair_values(A, a, D, trials, seed, forced)
    for i in range(len(X)):
        if i in errors:
            tally.failed_trial(_error_witness(i, {"x": X[i], "y": Y[i]}, errors[i]))
            continue
        value = monotone_value(AX[i], AY[i], aX[i], aY[i])
        if value < -tol:
            tally.failed_trial(Witness(i, "negative_pairing", {"x": X[i], "y": Y[i]}, value,
                                       detail={"value": value}))
        else:
            tally.passed_trial()
    return tally.report(tol, seed, {"trials": trials, "forced": list(forced or [])})


def check_a_pseudomonotone(A: VectorField, a: VectorField, D: ConvexSet, trials: int = 1000,
                           tol: Optional[float] = None, seed: Optional[int] = None,
                           forced: Optional[Sequence[Mapping[str, Any]]] = None) -> PropertyReport:
    """Falsify <A(x), a(y)-a(x)> >= 0  =>  <A(y), a(y)-a(x)> >= 0 on sampled ordered pairs

    Pairs whose antecedent fails are vacuous passes, counted separately.
    """
    tol, seed = resolve_tol(tol), resolve_seed(seed)
    require_trials(trials, forced)
    tally = Tally("a_pseudomonotone")
    X, Y, AX, AY, aX, aY, errors = _pair_values(A, a, D, trials, seed, forced)
    for i in range(len(X)):
        if i in errors:
            tally.failed_trial(_error_witness(i, {"x": X[i], "y": Y[i]}, errors[i]))
            continue
        antecedent = lhs_from_values(VIKind.S, AX[i], aX[i], AY[i], aY[i])
        if antecedent < -tol:
            tally.vacuous_trial()
            continue
        consequent = lhs_from_values(VIKind.M, AX[i], aX[i], AY[i], aY[i])
        if consequent < -tol:
            tally.failed_trial(Witness(i, "consequent_fails", {"x": X[i], "y": Y[i]}, consequent,
                                       detail={"antecedent": antecedent, "consequent": consequent}))
        else:
            tally.passed_trial()
    return tally.report(tol, seed, {"trials": trials, "forced": list(forced or [])})

"""
Command implementations behind the `vi` entry point

Every command returns a RunReport whose exit_code follows one convention:
0 success or pass, 2 a valid negative outcome, 1 an error.
"""

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Dict, Optional, Tuple

import numpy as np
import pandas as pd

from src import config
from src.errors import CheckerError, InstanceError, VIToolkitError
from src.checkers import (
    PropertyReport,
    check_a_pseudomonotone,
    check_hull_image,
    check_kkm,
    check_minty_inclusion,
    check_monotone_relative,
    check_ql,
    check_ql_dense_1d,
    check_strict_ql,
    monotonicity_scan_1d,
    recheck,
)
from src.cli.instance_file import CheckSpec, LoadedInstance, canonical_json, load_instance
from src.cli.report import EXIT_NEGATIVE, EXIT_OK, RunReport
from src.solvers import LipschitzModuli, Verdict, brouwer_fixed_point, refine, solve_grid
from src.vi_core import VIKind, gap, gap_field, inequality_lhs
from utils.structured_logger import RunContext

MAX_EXPORT_DIM = 3


@dataclass(frozen=True)
class Overrides:
    """Global command-line overrides; None keeps the instance file's value"""
    seed: Optional[int] = None
    resolution: Optional[int] = None
    tol: Optional[float] = None

    def echo(self) -> Dict[str, Any]:
        return {"seed": self.seed, "resolution": self.resolution, "tol": self.tol}


def _fields(loaded: LoadedInstance):
    if loaded.A is None or loaded.a is None:
        raise InstanceError("The instance file defines no A and a")
    return loaded.A, loaded.a


def _moduli(loaded: LoadedInstance) -> Optional[LipschitzModuli]:
    spec = loaded.spec.lipschitz
    if spec is None:
        return None
    return LipschitzModuli(spec.L_A, spec.L_a, spec.bound_A, spec.bound_a)


# solve

def cmd_solve(path: str, overrides: Overrides = Overrides()) -> RunReport:
    loaded = load_instance(path)
    instance = loaded.vi_instance()
    solver = loaded.spec.solver
    resolution = overrides.resolution or solver.resolution
    tol = overrides.tol if overrides.tol is not None else solver.tol

    with RunContext("solve", "grid_search") as ctx:
        report = solve_grid(instance, resolution, tol, _moduli(loaded))
        if solver.refine_levels:
            report = refine(instance, report, solver.refine_levels, solver.shrink)
        ctx.add_metric("best_gap", report.best_gap)
        ctx.add_metric("verdict", report.verdict.value)

    exit_code = EXIT_OK if report.verdict is Verdict.SOLUTION_FOUND else EXIT_NEGATIVE
    return RunReport(
        command={"name": "solve", **overrides.echo()},
        instance_digest=loaded.digest,
        payload={"solve": report.to_dict()},
        exit_code=exit_code,
    )


# check

def _kwargs(params: Dict[str, Any], *names: str) -> Dict[str, Any]:
    return {name: params[name] for name in names if name in params}


def _run_ql(loaded, p):
    return check_ql(loaded.A, loaded.K, **_kwargs(p, "trials", "t_samples", "tol", "seed", "forced"))


def _run_strict_ql(loaded, p):
    return check_strict_ql(loaded.A, loaded.K,
                           **_kwargs(p, "trials", "t_samples", "tol", "strict_margin", "seed", "forced"))


def _run_monotone_relative(loaded, p):
    A, a = _fields(loaded)
    return check_monotone_relative(A, a, loaded.K, **_kwargs(p, "trials", "tol", "seed", "forced"))


def _run_a_pseudomonotone(loaded, p):
    A, a = _fields(loaded)
    return check_a_pseudomonotone(A, a, loaded.K, **_kwargs(p, "trials", "tol", "seed", "forced"))


def _run_hull_image(loaded, p):
    return check_hull_image(loaded.A, loaded.K, **_kwargs(p, "n_points", "trials", "tol", "seed", "forced"))


def _run_kkm(loaded, p):
    A, a = _fields(loaded)
    return check_kkm(A, a, loaded.K, **_kwargs(p, "n_points", "trials", "tol", "seed", "forced"))


def _run_minty(loaded, p):
    A, a = _fields(loaded)
    kwargs = _kwargs(p, "resolution", "tol", "direction", "points", "hypotheses", "seed")
    if "trials" in p:
        kwargs["hypothesis_trials"] = p["trials"]
    return check_minty_inclusion(A, a, loaded.K, **kwargs)


def _dense_kwargs(p):
    kwargs = _kwargs(p, "tol")
    if "dense_points" in p:
        kwargs["points"] = p["dense_points"]
    return kwargs


def _run_ql_dense_1d(loaded, p):
    return check_ql_dense_1d(loaded.A, loaded.K, **_dense_kwargs(p))


def _run_monotonicity_scan(loaded, p):
    return monotonicity_scan_1d(loaded.A, loaded.K, **_dense_kwargs(p))


PROPERTIES: Dict[str, Callable[[LoadedInstance, Dict[str, Any]], Any]] = {
    "ql": _run_ql,
    "strict_ql": _run_strict_ql,
    "monotone_relative": _run_monotone_relative,
    "a_pseudomonotone": _run_a_pseudomonotone,
    "hull_image": _run_hull_image,
    "kkm": _run_kkm,
    "minty": _run_minty,
    "ql_dense_1d": _run_ql_dense_1d,
    "monotonicity_scan": _run_monotonicity_scan,
}


def check_parameters(loaded: LoadedInstance, property_name: str, params: Optional[Dict[str, Any]],
                     overrides: Overrides) -> Dict[str, Any]:
    """File parameters, then --param values, then the global overrides"""
    merged = {}
    if property_name in loaded.spec.checks:
        merged.update(loaded.spec.checks[property_name].model_dump(exclude_none=True))
    merged.update(params or {})
    if overrides.seed is not None:
        merged["seed"] = overrides.seed
    if overrides.tol is not None:
        merged["tol"] = overrides.tol
    if property_name == "minty" and overrides.resolution is not None:
        merged["resolution"] = overrides.resolution
    try:
        return CheckSpec.model_validate(merged).model_dump(exclude_none=True)
    except ValueError as exc:
        raise CheckerError(f"Invalid parameters for '{property_name}': {exc}") from exc


def run_property(loaded: LoadedInstance, property_name: str, params: Dict[str, Any]):
    if property_name not in PROPERTIES:
        raise CheckerError(f"Unknown property '{property_name}'. Available: {', '.join(sorted(PROPERTIES))}")
    if loaded.A is None:
        raise InstanceError("The instance file defines no A")
    return PROPERTIES[property_name](loaded, params)


def _recheck_payload(loaded: LoadedInstance, report: PropertyReport) -> Optional[Dict[str, Any]]:
    if report.witness is None:
        return None
    try:
        result = recheck(report, loaded.A, loaded.a, loaded.K)
    except VIToolkitError as exc:
        return {"error": str(exc)}
    return {"slack": result.slack, "violated": result.violated}


def cmd_check(path: str, property_name: str, params: Optional[Dict[str, Any]] = None,
              overrides: Overrides = Overrides()) -> RunReport:
    loaded = load_instance(path)
    with RunContext("check", property_name) as ctx:
        merged = check_parameters(loaded, property_name, params, overrides)
        result = run_property(loaded, property_name, merged)
        ctx.add_metric("passed", result.passed)

    payload: Dict[str, Any] = {"check": result.to_dict()}
    if isinstance(result, PropertyReport):
        payload["recheck"] = _recheck_payload(loaded, result)
    return RunReport(
        command={"name": "check", "property": property_name, "params": params or {}, **overrides.echo()},
        instance_digest=loaded.digest,
        payload=payload,
        exit_code=EXIT_OK if result.passed else EXIT_NEGATIVE,
    )


# fixed-point

def cmd_fixed_point(path: str, overrides: Overrides = Overrides()) -> RunReport:
    loaded = load_instance(path)
    if loaded.F is None:
        raise InstanceError("The instance file defines no fixed-point map F")
    solver = loaded.spec.solver
    with RunContext("fixed-point", "brouwer") as ctx:
        result = brouwer_fixed_point(
            loaded.F, loaded.K, overrides.resolution or solver.resolution,
            levels=solver.refine_levels, tol=overrides.tol, shrink=solver.shrink,
        )
        ctx.add_metric("residual", result.residual)
    return RunReport(
        command={"name": "fixed-point", **overrides.echo()},
        instance_digest=loaded.digest,
        payload={"fixed_point": result.to_dict()},
        exit_code=EXIT_OK if result.converged else EXIT_NEGATIVE,
    )


# export-gap-field

def gap_field_frame(loaded: LoadedInstance, resolution: Optional[int] = None) -> pd.DataFrame:
    """One row per grid point in grid order: coordinates, gap, worst y"""
    instance = loaded.vi_instance()
    dim = instance.dim
    if dim > MAX_EXPORT_DIM:
        raise InstanceError(f"Gap-field export needs dimension <= {MAX_EXPORT_DIM}, got {dim}")
    grid = instance.K.sample_grid(resolution or loaded.spec.solver.resolution)
    field = gap_field(instance.kind, instance.A, instance.a, grid.points, grid.points)
    worst = grid.points[field.worst_index]

    columns: Dict[str, np.ndarray] = {}
    for i in range(dim):
        columns[f"x{i + 1}"] = grid.points[:, i]
    columns["gap"] = field.gaps
    for i in range(dim):
        columns[f"worst_y{i + 1}"] = worst[:, i]
    return pd.DataFrame(columns)


def cmd_export_gap_field(path: str, out: str, overrides: Overrides = Overrides()) -> RunReport:
    loaded = load_instance(path)
    with RunContext("export-gap-field", "gap_field") as ctx:
        frame = gap_field_frame(loaded, overrides.resolution)
        frame.to_csv(out, index=False, encoding="utf-8", lineterminator="\n")
        ctx.add_metric("rows", len(frame))
    return RunReport(
        command={"name": "export-gap-field", **overrides.echo()},
        instance_digest=loaded.digest,
        payload={"export": {"rows": len(frame), "columns": list(frame.columns)}},
    )


# canonicalize

def cmd_canonicalize(path: str) -> str:
    return canonical_json(load_instance(path).spec)


# reproduce

def _instance_path(name: str) -> Path:
    return Path(config.DATA_DIR) / "instances" / name


def expected_values() -> Dict[str, Any]:
    path = Path(config.DATA_DIR) / "expected" / "reproduce.json"
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise InstanceError(f"Cannot read expected values from {path}: {exc}") from exc


def _check(loaded: LoadedInstance, name: str, overrides: Overrides) -> Any:
    return run_property(loaded, name, check_parameters(loaded, name, None, overrides))


def _corner_oracle(x: np.ndarray) -> float:
    # violation -u v (u - x1) of the ex432 pair, maximised over the corners of [-1,1]^2
    return max(-u * v * (u - float(x[0])) for u in (-1.0, 1.0) for v in (-1.0, 1.0))


def _reproduce_ex432(overrides: Overrides) -> Tuple[Dict[str, Any], Dict[str, Any]]:
    loaded = load_instance(_instance_path("ex432_iS.json"))
    solve = solve_grid(loaded.vi_instance(), loaded.spec.solver.resolution, loaded.spec.solver.tol, _moduli(loaded))
    ql = _check(loaded, "ql", overrides)
    kkm = _check(loaded, "kkm", overrides)
    observed = {
        "best_gap": solve.best_gap,
        "verdict": solve.verdict.value,
        "corner_oracle_gap": _corner_oracle(solve.best_x),
        "certificate_certified": bool(solve.certificate and solve.certificate.certified),
        "ql_passed": ql.passed,
        "ql_distance": ql.witness.detail["distance"] if ql.witness else None,
        "kkm_passed": kkm.passed,
        "kkm_slack": kkm.witness.slack if kkm.witness else None,
    }
    return observed, {"solve": solve.to_dict(), "ql": ql.to_dict(), "kkm": kkm.to_dict()}


def _split_gaps(loaded: LoadedInstance, x: float) -> Dict[str, float]:
    A, a = _fields(loaded)
    grid = loaded.K.sample_grid(loaded.spec.solver.resolution)
    return {kind.value: gap(kind, A, a, loaded.K, [x], grid).gap for kind in (VIKind.iM, VIKind.iS)}


def _reproduce_ex434(overrides: Overrides):
    loaded = load_instance(_instance_path("ex434.json"))
    gaps = _split_gaps(loaded, -0.5)
    minty = _check(loaded, "minty", overrides)
    observed = {
        "gap_iM": gaps["iM"],
        "gap_iS": gaps["iS"],
        "lhs_iS_at_witness_y": inequality_lhs(VIKind.iS, loaded.A, loaded.a, [-0.5], [0.75]),
        "minty_passed": minty.passed,
        "minty_witness_x": float(minty.witness.points["x"][0]) if minty.witness else None,
    }
    return observed, {"minty": minty.to_dict()}


def _reproduce_ex4331(overrides: Overrides):
    loaded = load_instance(_instance_path("ex4331.json"))
    gaps = _split_gaps(loaded, 0.5)
    strict = _check(loaded, "strict_ql", overrides)
    dense = _check(loaded, "ql_dense_1d", overrides)
    scan = _check(loaded, "monotonicity_scan", overrides)
    minty = _check(loaded, "minty", overrides)
    observed = {
        "gap_iM": gaps["iM"],
        "gap_iS": gaps["iS"],
        "strict_ql_passed": strict.passed,
        "strict_ql_reason": strict.witness.reason if strict.witness else None,
        "ql_dense_passed": dense.passed,
        "monotone_scan_passed": scan.passed,
        "minty_passed": minty.passed,
        "minty_witness_x": float(minty.witness.points["x"][0]) if minty.witness else None,
    }
    reports = {"strict_ql": strict.to_dict(), "ql_dense_1d": dense.to_dict(),
               "monotonicity_scan": scan.to_dict(), "minty": minty.to_dict()}
    return observed, reports


def _fixed_point(name: str):
    loaded = load_instance(_instance_path(name))
    solver = loaded.spec.solver
    return brouwer_fixed_point(loaded.F, loaded.K, solver.resolution, levels=solver.refine_levels,
                               shrink=solver.shrink)


def _reproduce_brouwer_1d(overrides: Overrides):
    result = _fixed_point("brouwer_1d.json")
    observed = {
        "point": float(result.point[0]),
        "residual_within_spacing": result.residual <= result.report.history[0].spacing,
    }
    return observed, {"fixed_point": result.to_dict()}


def _reproduce_brouwer_2d(overrides: Overrides):
    result = _fixed_point("brouwer_2d.json")
    residuals = result.level_residuals
    observed = {
        "point_norm": float(np.linalg.norm(result.point)),
        "residuals_nonincreasing": all(b <= a for a, b in zip(residuals, residuals[1:])),
    }
    return observed, {"fixed_point": result.to_dict()}


EXAMPLES = {
    "ex432": _reproduce_ex432,
    "ex434": _reproduce_ex434,
    "ex4331": _reproduce_ex4331,
    "brouwer_1d": _reproduce_brouwer_1d,
    "brouwer_2d": _reproduce_brouwer_2d,
}


def compare(observed: Any, expected: Dict[str, Any]) -> bool:
    value = expected["value"]
    if isinstance(value, bool) or isinstance(value, str) or value is None:
        return observed == value
    if observed is None or isinstance(observed, (bool, str)):
        return False
    return abs(float(observed) - float(value)) <= float(expected.get("tol", 0.0))


def cmd_reproduce(example_id: str, overrides: Overrides = Overrides()) -> RunReport:
    if example_id not in EXAMPLES:
        raise InstanceError(f"Unknown example '{example_id}'. Available: {', '.join(sorted(EXAMPLES))}")
    expected = expected_values()[example_id]

    with RunContext("reproduce", example_id) as ctx:
        observed, reports = EXAMPLES[example_id](overrides)
        comparisons = {}
        for name, spec in sorted(expected.items()):
            actual = observed.get(name)
            comparisons[name] = {
                "observed": actual,
                "expected": spec["value"],
                "tol": spec.get("tol"),
                "provenance": spec.get("provenance"),
                "match": compare(actual, spec),
            }
        all_match = all(item["match"] for item in comparisons.values())
        ctx.add_metric("all_match", all_match)

    return RunReport(
        command={"name": "reproduce", "example": example_id, **overrides.echo()},
        payload={"example": example_id, "all_match": all_match, "comparisons": comparisons, "reports": reports},
        exit_code=EXIT_OK if all_match else EXIT_NEGATIVE,
    )

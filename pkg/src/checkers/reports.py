"""
Checker reports and witnesses
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from src.metrics import checker_trials_total

SAMPLED_NOTE = "sampled falsifier: pass means no violation was found at this seed and trial count"


def _plain(value: Any) -> Any:
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


@dataclass(frozen=True)
class Witness:
    """Concrete counterexample; slack < -tol reproduces the failure for quantitative reasons"""
    trial: int
    reason: str
    points: Dict[str, Any]
    slack: float
    t: Optional[float] = None
    detail: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "trial": self.trial,
            "reason": self.reason,
            "points": _plain(self.points),
            "t": self.t,
            "slack": self.slack,
            "detail": _plain(self.detail),
        }


@dataclass(frozen=True)
class PropertyReport:
    property: str
    trials: int
    passed: bool
    witness: Optional[Witness]
    tol: float
    seed: int
    violations: int = 0
    degenerate: int = 0
    vacuous: int = 0
    notes: Tuple[str, ...] = (SAMPLED_NOTE,)
    hypotheses: Dict[str, bool] = field(default_factory=dict)
    parameters: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "property": self.property,
            "trials": self.trials,
            "passed": self.passed,
            "witness": self.witness.to_dict() if self.witness else None,
            "tol": self.tol,
            "seed": self.seed,
            "violations": self.violations,
            "degenerate": self.degenerate,
            "vacuous": self.vacuous,
            "notes": list(self.notes),
            "hypotheses": dict(self.hypotheses),
            "parameters": _plain(self.parameters),
        }


@dataclass(frozen=True)
class RecheckResult:
    slack: float
    violated: bool


class Tally:
    """Accumulates trial outcomes; keeps the lowest-index failure as the witness"""

    def __init__(self, property_name: str):
        self.property_name = property_name
        self.trials = 0
        self.violations = 0
        self.degenerate = 0
        self.vacuous = 0
        self.witness: Optional[Witness] = None
        self.degenerate_witness: Optional[Witness] = None
        self.notes: List[str] = [SAMPLED_NOTE]

    def passed_trial(self):
        self.trials += 1
        checker_trials_total.labels(property=self.property_name, status="pass").inc()

    def vacuous_trial(self):
        self.trials += 1
        self.vacuous += 1
        checker_trials_total.labels(property=self.property_name, status="vacuous").inc()

    def degenerate_trial(self, witness: Witness):
        self.trials += 1
        self.degenerate += 1
        if self.degenerate_witness is None:
            self.degenerate_witness = witness
        checker_trials_total.labels(property=self.property_name, status="degenerate").inc()

    def failed_trial(self, witness: Witness):
        self.trials += 1
        self.violations += 1
        if self.witness is None:
            self.witness = witness
        checker_trials_total.labels(property=self.property_name, status="fail").inc()

    def report(self, tol: float, seed: int, parameters: Dict[str, Any],
               hypotheses: Optional[Dict[str, bool]] = None) -> PropertyReport:
        witness = self.witness or self.degenerate_witness
        return PropertyReport(
            property=self.property_name,
            trials=self.trials,
            passed=witness is None,
            witness=witness,
            tol=tol,
            seed=seed,
            violations=self.violations,
            degenerate=self.degenerate,
            vacuous=self.vacuous,
            notes=tuple(self.notes),
            hypotheses=dict(hypotheses or {}),
            parameters=parameters,
        )

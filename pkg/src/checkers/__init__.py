"""
Sampled falsifiers for operator classes and theorem-level relations
"""

from src.checkers.classes import (
    STRICT_QL_CONVENTION,
    check_a_pseudomonotone,
    check_monotone_relative,
    check_ql,
    check_strict_ql,
    monotone_value,
)
from src.checkers.dense import Monotonicity, MonotonicityScan, check_ql_dense_1d, monotonicity_scan_1d
from src.checkers.recheck import recheck
from src.checkers.reports import SAMPLED_NOTE, PropertyReport, RecheckResult, Witness
from src.checkers.sampling import sample_pairs, t_values
from src.checkers.theorems import (
    MintyDirection,
    check_hull_image,
    check_kkm,
    check_minty_inclusion,
    kkm_intersection,
    kkm_map_contains,
)

__all__ = [
    "STRICT_QL_CONVENTION", "check_a_pseudomonotone", "check_monotone_relative", "check_ql",
    "check_strict_ql", "monotone_value",
    "Monotonicity", "MonotonicityScan", "check_ql_dense_1d", "monotonicity_scan_1d",
    "recheck", "SAMPLED_NOTE", "PropertyReport", "RecheckResult", "Witness",
    "sample_pairs", "t_values",
    "MintyDirection", "check_hull_image", "check_kkm", "check_minty_inclusion",
    "kkm_intersection", "kkm_map_contains",
]

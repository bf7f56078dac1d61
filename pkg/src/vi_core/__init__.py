"""
The four variational-inequality forms and their gap functions
"""

from src.vi_core.gap import GapField, GapReport, default_search_tol, gap, gap_field, is_solution
from src.vi_core.instance import VIInstance, VIKind, classical_instance
from src.vi_core.lhs import evaluate_checked, evaluate_rows, inequality_lhs, lhs_block, lhs_from_values, pairwise_lhs

__all__ = [
    "GapField", "GapReport", "default_search_tol", "gap", "gap_field", "is_solution",
    "VIInstance", "VIKind", "classical_instance",
    "evaluate_checked", "evaluate_rows", "inequality_lhs", "lhs_block", "lhs_from_values", "pairwise_lhs",
]

"""
Grid-oracle VI solving, refinement, nonexistence certificates and fixed points
"""

from src.solvers.brouwer import FixedPointResult, brouwer_fixed_point, check_self_map, fixed_point_residual
from src.solvers.certificates import LipschitzModuli, NonexistenceCertificate, lhs_lipschitz, nonexistence_certificate
from src.solvers.grid_solver import LevelRecord, SolveReport, Verdict, refine, solve_grid

__all__ = [
    "FixedPointResult", "brouwer_fixed_point", "check_self_map", "fixed_point_residual",
    "LipschitzModuli", "NonexistenceCertificate", "lhs_lipschitz", "nonexistence_certificate",
    "LevelRecord", "SolveReport", "Verdict", "refine", "solve_grid",
]

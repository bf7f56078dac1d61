"""
Rigorous nonexistence certificates from a grid gap lower bound

If every grid point has gap >= gap_min and the left-hand side is L-Lipschitz
in x (uniformly in y), then every x in the box has gap >= gap_min - L * rho
where rho bounds the distance from any point of the box to the grid. A
positive margin proves the problem has no solution on the continuum.
"""

import logging
from dataclasses import dataclass, asdict
from typing import Any, Dict, Optional

import numpy as np

from src.geometry import Box, SampleGrid
from src.vi_core import VIInstance, VIKind, evaluate_rows

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LipschitzModuli:
    """Lipschitz constants of A and a; bounds default to grid maxima of the norms"""
    L_A: float
    L_a: float
    bound_A: Optional[float] = None
    bound_a: Optional[float] = None


@dataclass(frozen=True)
class NonexistenceCertificate:
    gap_min: float
    lipschitz: float
    rho: float
    margin: float
    certified: bool
    bound_A: float
    bound_a: float
    note: str

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def lhs_lipschitz(kind: VIKind, L_A: float, L_a: float, M_A: float, M_a: float) -> float:
    """x-Lipschitz modulus of the kind's left-hand side"""
    kind = VIKind(kind)
    if kind is VIKind.S:
        return 2.0 * L_A * M_a + M_A * L_a
    if kind is VIKind.iS:
        return L_A * M_a + 2.0 * M_A * L_a
    if kind is VIKind.M:
        return M_A * L_a
    return L_A * M_a


def covering_radius(box: Box, grid: SampleGrid) -> float:
    steps = (box.upper - box.lower) / (grid.resolution - 1)
    return float(np.linalg.norm(steps / 2.0))


def nonexistence_certificate(instance: VIInstance, gap_min: float, grid: SampleGrid,
                             moduli: LipschitzModuli) -> NonexistenceCertificate:
    """Margin gap_min - L * max(h, covering radius) for a full-box lattice"""
    AX = evaluate_rows(instance.A, grid.points, "A")
    aX = evaluate_rows(instance.a, grid.points, "a")
    M_A = moduli.bound_A if moduli.bound_A is not None else float(np.max(np.linalg.norm(AX, axis=1)))
    M_a = moduli.bound_a if moduli.bound_a is not None else float(np.max(np.linalg.norm(aX, axis=1)))
    L = lhs_lipschitz(instance.kind, moduli.L_A, moduli.L_a, M_A, M_a)

    if not isinstance(instance.K, Box):
        return NonexistenceCertificate(
            gap_min=gap_min, lipschitz=L, rho=float("nan"), margin=float("nan"), certified=False,
            bound_A=M_A, bound_a=M_a,
            note="covering radius is only available for box domains; no certificate issued",
        )

    rho = max(grid.spacing, covering_radius(instance.K, grid))
    margin = gap_min - L * rho
    note = ("gap >= gap_min - L*rho on all of K; a positive margin proves nonexistence"
            if moduli.bound_A is not None and moduli.bound_a is not None
            else "field bounds taken as grid maxima of the norms; rigorous when those maxima are attained on the grid")
    certificate = NonexistenceCertificate(
        gap_min=gap_min, lipschitz=L, rho=rho, margin=margin, certified=margin > 0.0,
        bound_A=M_A, bound_a=M_a, note=note,
    )
    logger.debug("Nonexistence certificate: %s", certificate)
    return certificate

"""
Unit tests for the grid solver, certificates and fixed-point reduction
"""
import json
import logging
import math

import numpy as np
import pytest

from src import config
from src.errors import DimensionError, RangeViolation, SolverError
from src.exprlang import parse
from src.geometry import Ball, Box
from src.operators import ExprField, IdentityField, catalog_lookup
from src.solvers import (
    LipschitzModuli,
    Verdict,
    brouwer_fixed_point,
    lhs_lipschitz,
    nonexistence_certificate,
    refine,
    solve_grid,
)
from src.vi_core import VIInstance, VIKind
from utils.structured_logger import configure


def expr_field(*sources, dim=1):
    return ExprField(tuple(parse(source, dim) for source in sources))


@pytest.fixture
def ex432_instance(square, ex432_fields):
    """Inverted Stampacchia instance with no solution"""
    A, a = ex432_fields
    return VIInstance(VIKind.iS, A, a, square)


class TestGridSolver:
    """Test the exhaustive grid oracle"""

    def test_ex432_has_no_grid_solution(self, ex432_instance):
        """Test best gap 1 at (0, -1)"""
        report = solve_grid(ex432_instance, 41)
        assert report.verdict is Verdict.NO_SOLUTION_AT_RESOLUTION
        assert report.best_gap == 1.0
        assert report.best_x.tolist() == [0.0, -1.0]
        assert report.evaluations == 1681 ** 2
        assert report.certificate is None

    def test_ex432_certificate(self, ex432_instance):
        """Test margin 1 - 5*sqrt(2)*0.05 with L_A = 3, L_a = 1"""
        report = solve_grid(ex432_instance, 41, lipschitz=LipschitzModuli(L_A=3.0, L_a=1.0))
        certificate = report.certificate
        assert certificate.certified
        assert certificate.lipschitz == pytest.approx(5.0 * math.sqrt(2.0), rel=1e-12)
        assert certificate.rho == pytest.approx(0.05)
        assert certificate.margin == pytest.approx(1.0 - 0.25 * math.sqrt(2.0), abs=1e-9)

    def test_identity_solution_at_origin(self, square):
        """Test <y - x, x> >= 0 is solved exactly at 0"""
        instance = VIInstance(VIKind.iS, IdentityField(2), IdentityField(2), square)
        report = solve_grid(instance, 21)
        assert report.verdict is Verdict.SOLUTION_FOUND
        assert report.best_x.tolist() == [0.0, 0.0]
        assert report.best_gap == 0.0

    def test_tol_override(self, ex432_instance):
        """Test an explicit tolerance flips the verdict"""
        report = solve_grid(ex432_instance, 11, tol=2.0)
        assert report.verdict is Verdict.SOLUTION_FOUND
        assert report.tol == 2.0

    def test_report_dict(self, ex432_instance):
        """Test the serialised report"""
        payload = solve_grid(ex432_instance, 5).to_dict()
        assert payload["verdict"] == "NoSolutionAtResolution"
        assert payload["kind"] == "iS"
        assert len(payload["history"]) == 1


class TestRefine:
    """Test local refinement"""

    def test_gap_never_increases(self, ex432_instance):
        """Test each level is at least as good as the last"""
        coarse = solve_grid(ex432_instance, 11)
        refined = refine(ex432_instance, coarse, 3)
        gaps = [record.best_gap for record in refined.history]
        assert len(gaps) == 4
        assert all(later <= earlier for earlier, later in zip(gaps, gaps[1:]))
        assert refined.refinement_levels == 3

    def test_incumbent_kept_on_ties(self, square):
        """Test an exact solution stays put"""
        instance = VIInstance(VIKind.iS, IdentityField(2), IdentityField(2), square)
        refined = refine(instance, solve_grid(instance, 11), 2)
        assert refined.best_x.tolist() == [0.0, 0.0]
        assert refined.best_gap == 0.0

    def test_certificate_carried(self, ex432_instance):
        """Test a negative refinement keeps the coarse certificate"""
        coarse = solve_grid(ex432_instance, 41, lipschitz=LipschitzModuli(3.0, 1.0))
        refined = refine(ex432_instance, coarse, 1)
        assert refined.verdict is Verdict.NO_SOLUTION_AT_RESOLUTION
        assert refined.certificate is coarse.certificate

    def test_levels_logged_at_debug(self, ex432_instance, caplog):
        """Test each level emits a structured record"""
        vi_logger = logging.getLogger("vi")
        vi_logger.addHandler(caplog.handler)
        configure("DEBUG")
        try:
            refined = refine(ex432_instance, solve_grid(ex432_instance, 5), 2)
        finally:
            configure(config.LOG_LEVEL)
            vi_logger.removeHandler(caplog.handler)
        records = [json.loads(r.getMessage()) for r in caplog.records if r.getMessage().startswith("{")]
        levels = [r["refinement_level"] for r in records if r["message"] == "Refinement level finished"]
        assert levels == [1, 2]
        assert refined.refinement_levels == 2

    def test_bad_arguments(self, ex432_instance):
        """Test levels < 1 and shrink outside (0, 1)"""
        coarse = solve_grid(ex432_instance, 5)
        with pytest.raises(SolverError):
            refine(ex432_instance, coarse, 0)
        with pytest.raises(SolverError):
            refine(ex432_instance, coarse, 1, shrink=1.0)


class TestCertificates:
    """Test Lipschitz moduli and margins"""

    def test_lhs_moduli(self):
        """Test the modulus of each kind"""
        assert lhs_lipschitz(VIKind.S, 1.0, 2.0, 3.0, 4.0) == 2.0 * 1.0 * 4.0 + 3.0 * 2.0
        assert lhs_lipschitz(VIKind.iS, 1.0, 2.0, 3.0, 4.0) == 1.0 * 4.0 + 2.0 * 3.0 * 2.0
        assert lhs_lipschitz(VIKind.M, 1.0, 2.0, 3.0, 4.0) == 6.0
        assert lhs_lipschitz(VIKind.iM, 1.0, 2.0, 3.0, 4.0) == 4.0

    def test_non_box_domain(self):
        """Test that no certificate is issued on a ball"""
        ball = Ball([0.0, 0.0], 1.0)
        instance = VIInstance(VIKind.iS, IdentityField(2), IdentityField(2), ball)
        certificate = nonexistence_certificate(instance, 1.0, ball.sample_grid(9), LipschitzModuli(1.0, 1.0))
        assert not certificate.certified
        assert math.isnan(certificate.margin)

    def test_supplied_bounds_used(self, ex432_instance, square):
        """Test explicit field bounds replace grid maxima"""
        moduli = LipschitzModuli(L_A=3.0, L_a=1.0, bound_A=2.0, bound_a=2.0)
        certificate = nonexistence_certificate(ex432_instance, 1.0, square.sample_grid(41), moduli)
        assert certificate.lipschitz == 3.0 * 2.0 + 2.0 * 2.0 * 1.0
        assert certificate.margin == pytest.approx(1.0 - 10.0 * 0.05)


class TestBrouwer:
    """Test the fixed-point reduction"""

    def test_one_dimensional(self):
        """Test F(x) = 1 - x on [0, 1]"""
        result = brouwer_fixed_point(expr_field("1 - x"), Box([0.0], [1.0]), 41, levels=3)
        point, residual = result
        assert point.tolist() == [0.5]
        assert residual == 0.0
        assert result.converged
        assert result.tol == pytest.approx(0.025)

    def test_contraction_on_ball(self):
        """Test F(x) = x / 2 on the unit disc"""
        result = brouwer_fixed_point(expr_field("x/2", "y/2", dim=2), Ball([0.0, 0.0], 1.0), 33, levels=3)
        assert np.linalg.norm(result.point) == 0.0
        assert result.residual == 0.0
        residuals = list(result.level_residuals)
        assert all(later <= earlier for earlier, later in zip(residuals, residuals[1:]))

    def test_range_violation(self):
        """Test F(x) = x + 1 leaving [0, 1]"""
        with pytest.raises(RangeViolation) as info:
            brouwer_fixed_point(expr_field("x + 1"), Box([0.0], [1.0]), 11)
        assert info.value.image[0] > 1.0

    def test_dimension_mismatch(self, square):
        """Test a 1-D map on a 2-D set"""
        with pytest.raises(DimensionError):
            brouwer_fixed_point(expr_field("x"), square, 5)

    def test_serialised(self):
        """Test the result dict"""
        payload = brouwer_fixed_point(expr_field("1 - x"), Box([0.0], [1.0]), 11, levels=0).to_dict()
        assert payload["point"] == [0.5]
        assert payload["converged"]
        assert payload["solve"]["verdict"] == "SolutionFound"


def affine_instance(seed):
    """Seeded affine A with a = identity on [-1,1]^2"""
    A = catalog_lookup("affine_random", dim=2, seed=seed).field
    return VIInstance(VIKind.iS, A, IdentityField(2), Box([-1.0, -1.0], [1.0, 1.0]))


@pytest.mark.slow
class TestAffineExistence:
    """Test grid solutions for seeded affine instances"""

    @pytest.mark.parametrize("seed", range(20))
    def test_solution_found_and_refined(self, seed):
        """Test resolution 33 meets the search tolerance and refinement shrinks the gap tenfold"""
        instance = affine_instance(seed)
        coarse = solve_grid(instance, 33)
        assert coarse.verdict is Verdict.SOLUTION_FOUND
        assert coarse.best_gap <= coarse.tol
        refined = refine(instance, coarse, 3)
        assert refined.verdict is Verdict.SOLUTION_FOUND
        assert refined.best_gap <= coarse.best_gap / 10.0

    @pytest.mark.parametrize("seed", range(5))
    def test_nested_grids_do_not_lose_ground(self, seed):
        """Test best_gap(2r - 1) <= best_gap(r) on nested lattices"""
        instance = affine_instance(seed)
        for r in (5, 9, 17):
            assert solve_grid(instance, 2 * r - 1).best_gap <= solve_grid(instance, r).best_gap + 1e-12

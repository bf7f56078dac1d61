"""
Unit tests for vector fields and the operator catalog
"""
import numpy as np
import pytest

from src.errors import DimensionError, ExpressionEvaluationError, OperatorError, UnknownCatalogEntry
from src.exprlang import parse
from src.geometry import Box
from src.operators import (
    AffineField,
    CatalogField,
    ExprField,
    IdentityField,
    PullbackField,
    ResidualField,
    available_names,
    catalog_lookup,
    constant_field,
    evaluate,
    evaluate_many,
)

FIXED = ["ex432_A", "ex432_a", "ex434_A", "ex434_a", "ex4331_A", "ex4331_a"]


class TestCatalogValues:
    """Test published closed forms at known points"""

    def test_ex432_A_at_half(self):
        """Test A(1/2, 1/2) = (1/8, 1/4)"""
        assert evaluate(catalog_lookup("ex432_A").field, [0.5, 0.5]).tolist() == [0.125, 0.25]

    def test_ex432_a(self):
        """Test a(x, y) = (1, -x)"""
        assert evaluate(catalog_lookup("ex432_a").field, [0.3, -0.7]).tolist() == [1.0, -0.3]

    def test_ex434_a_at_minus_half(self):
        """Test a(-1/2) = 2/3"""
        value = evaluate(catalog_lookup("ex434_a").field, [-0.5])[0]
        assert value == pytest.approx(2.0 / 3.0, abs=1e-15)

    def test_ex4331_step(self):
        """Test -1 on [-1, 0) and 1 on [0, 1]"""
        field = catalog_lookup("ex4331_A").field
        assert evaluate(field, [-0.5])[0] == -1.0
        assert evaluate(field, [0.0])[0] == 1.0

    def test_domains(self):
        """Test the published domains"""
        square = catalog_lookup("ex432_A").domain
        assert square.describe() == {"type": "box", "lower": [-1.0, -1.0], "upper": [1.0, 1.0]}
        assert catalog_lookup("ex434_A").domain.dim == 1

    def test_provenance_recorded(self):
        """Test every entry carries provenance text"""
        for name in available_names():
            assert catalog_lookup(name).provenance


class TestCatalogLookup:
    """Test name resolution"""

    def test_unknown_name_lists_available(self):
        """Test the error for an unknown name"""
        with pytest.raises(UnknownCatalogEntry) as info:
            catalog_lookup("ex999_A")
        assert "ex432_A" in str(info.value)
        assert "identity" in info.value.available

    def test_fixed_dimension_mismatch(self):
        """Test requesting ex432 in dimension 3"""
        with pytest.raises(DimensionError):
            catalog_lookup("ex432_A", dim=3)

    def test_identity_default_dimension(self):
        """Test parametric entries default to dimension 2"""
        field = catalog_lookup("identity").field
        assert isinstance(field, IdentityField)
        assert field.dim == 2

    def test_affine_random_is_seeded(self):
        """Test equal seeds give equal maps and different seeds differ"""
        first = catalog_lookup("affine_random", dim=3, seed=4).field
        second = catalog_lookup("affine_random", dim=3, seed=4).field
        other = catalog_lookup("affine_random", dim=3, seed=5).field
        assert np.array_equal(first.matrix, second.matrix)
        assert not np.array_equal(first.matrix, other.matrix)

    def test_pullback_cannot_wrap_itself(self):
        """Test recursive pullback"""
        with pytest.raises(OperatorError):
            catalog_lookup("affine_psd_pullback", inner="affine_psd_pullback")


class TestDoubleEntry:
    """Test closed forms against their expression re-encodings"""

    @pytest.mark.parametrize("name", FIXED)
    def test_fixed_entries_agree_on_grid(self, name):
        """Test agreement at every 41-grid point"""
        entry = catalog_lookup(name)
        points = entry.domain.sample_grid(41).points
        closed = entry.field.evaluate_many(points)
        encoded = entry.expression_field().evaluate_many(points)
        assert np.max(np.abs(closed - encoded)) <= 1e-15

    @pytest.mark.parametrize("name", ["identity", "zero", "affine_random", "affine_psd_pullback"])
    def test_parametric_entries_agree_on_grid(self, name):
        """Test agreement for seeded parametric entries"""
        entry = catalog_lookup(name, dim=2, seed=9, inner="affine_random" if name == "affine_psd_pullback" else None)
        points = entry.domain.sample_grid(41).points
        closed = entry.field.evaluate_many(points)
        encoded = entry.expression_field().evaluate_many(points)
        assert np.max(np.abs(closed - encoded)) <= 1e-15


class TestPullback:
    """Test the positive semidefinite pullback generator"""

    def test_monotone_relative_to_inner(self, rng):
        """Test <A(x) - A(y), a(x) - a(y)> >= 0 for A = M o a"""
        for seed in range(20):
            A = catalog_lookup("affine_psd_pullback", dim=3, seed=seed, inner="affine_random").field
            a = catalog_lookup("affine_random", dim=3, seed=seed).field
            X = rng.uniform(-1.0, 1.0, size=(200, 3))
            Y = rng.uniform(-1.0, 1.0, size=(200, 3))
            values = np.sum((A.evaluate_many(X) - A.evaluate_many(Y)) * (a.evaluate_many(X) - a.evaluate_many(Y)), axis=1)
            assert np.min(values) >= -1e-12

    def test_matrix_symmetric(self):
        """Test M = R^T R"""
        field = catalog_lookup("affine_psd_pullback", dim=3, seed=1).field
        assert isinstance(field, PullbackField)
        assert np.allclose(field.matrix, field.matrix.T)
        assert np.min(np.linalg.eigvalsh(field.matrix)) >= -1e-12


class TestFields:
    """Test field bodies and evaluation"""

    def test_identity(self):
        """Test identity returns its argument"""
        assert IdentityField(3).evaluate([1.0, -2.0, 0.5]).tolist() == [1.0, -2.0, 0.5]

    def test_affine(self):
        """Test M p + b"""
        field = AffineField([[1.0, 2.0], [0.0, -1.0]], [0.5, 0.5])
        assert field.evaluate([1.0, 1.0]).tolist() == [3.5, -0.5]

    def test_affine_shape_mismatch(self):
        """Test rows against offset length"""
        with pytest.raises(DimensionError):
            AffineField([[1.0, 0.0]], [0.0, 0.0])

    def test_residual(self):
        """Test p - F(p)"""
        F = ExprField((parse("1 - x", 1),))
        assert ResidualField(F).evaluate([0.25]).tolist() == [-0.5]

    def test_constant(self):
        """Test a constant field"""
        assert constant_field([2.0, -1.0], 3).evaluate([5.0, 6.0, 7.0]).tolist() == [2.0, -1.0]

    def test_expr_field_dimensions(self):
        """Test components over different dimensions"""
        with pytest.raises(DimensionError):
            ExprField((parse("x", 1), parse("x + y", 2)))

    def test_evaluate_many_matches_evaluate(self, rng):
        """Test row-wise agreement"""
        field = ExprField((parse("x^2*y", 2), parse("max(x, y) - 1", 2)))
        points = rng.uniform(-1.0, 1.0, size=(50, 2))
        many = evaluate_many(field, points)
        for p, row in zip(points, many):
            assert np.array_equal(field.evaluate(p), row)

    def test_results_are_read_only(self):
        """Test returned points cannot be mutated"""
        value = IdentityField(2).evaluate([1.0, 2.0])
        with pytest.raises(ValueError):
            value[0] = 0.0

    def test_dimension_checked(self):
        """Test a point of the wrong dimension"""
        with pytest.raises(DimensionError):
            IdentityField(2).evaluate([1.0])

    def test_non_finite_value(self):
        """Test a closed form returning inf"""
        field = CatalogField("bad", 1, 1, lambda points: np.full_like(points, np.inf))
        with pytest.raises(OperatorError):
            field.evaluate([0.0])
        with pytest.raises(OperatorError):
            field.evaluate_many(np.zeros((3, 1)))

    def test_expression_errors_propagate(self):
        """Test division by zero inside an expression field"""
        field = ExprField((parse("1/x", 1),))
        with pytest.raises(ExpressionEvaluationError):
            field.evaluate([0.0])

    def test_catalog_evaluates_on_domain_grid(self):
        """Test every entry evaluates on its 41-grid"""
        for name in available_names():
            entry = catalog_lookup(name)
            values = entry.field.evaluate_many(entry.domain.sample_grid(41).points)
            assert np.all(np.isfinite(values))

    def test_unit_box_is_default_domain(self):
        """Test parametric domains"""
        assert isinstance(catalog_lookup("zero", dim=3).domain, Box)

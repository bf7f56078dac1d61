"""
Unit tests for convex sets, sample grids and distance primitives
"""
import math

import numpy as np
import pytest

from src import config
from src.errors import ConvergenceError, DimensionError, GeometryError
from src.geometry import (
    Ball,
    Box,
    Hull,
    Simplex,
    as_point,
    contains,
    convex_sample,
    convex_set_from_description,
    hull_distance,
    hull_projection,
    sample_grid,
    segment_distance,
)

UNIT_SQUARE = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]]


class TestPoints:
    """Test point construction"""

    def test_point_is_read_only(self):
        """Test that points cannot be mutated"""
        p = as_point([1.0, 2.0])
        with pytest.raises(ValueError):
            p[0] = 3.0

    def test_non_finite_rejected(self):
        """Test NaN and inf coordinates"""
        with pytest.raises(GeometryError):
            as_point([1.0, float("nan")])
        with pytest.raises(GeometryError):
            as_point([float("inf")])

    def test_dimension_checked(self):
        """Test requested dimension"""
        with pytest.raises(DimensionError):
            as_point([1.0, 2.0], dim=3)


class TestBox:
    """Test the box set and its lattice"""

    def test_contains_with_tolerance(self, square):
        """Test membership at, inside and just outside the boundary"""
        assert contains(square, [1.0, -1.0])
        assert contains(square, [0.3, 0.2])
        assert not contains(square, [1.0 + 1e-6, 0.0])
        assert contains(square, [1.0 + 1e-6, 0.0], tol=1e-5)

    def test_negative_tolerance_rejected(self, square):
        """Test tol < 0"""
        with pytest.raises(GeometryError):
            square.contains([0.0, 0.0], tol=-1.0)

    def test_grid_size_and_order(self, square):
        """Test 41 points per axis in row-major order"""
        grid = sample_grid(square, 41)
        assert len(grid) == 41 * 41
        assert grid.points[0].tolist() == [-1.0, -1.0]
        assert grid.points[1] == pytest.approx([-1.0, -0.95])
        assert grid.points[-1].tolist() == [1.0, 1.0]
        assert grid.spacing == pytest.approx(0.05)

    def test_grid_hits_witness_coordinates(self, square):
        """Test that 0, -1/2 and 3/4 are exact lattice coordinates at resolution 41"""
        grid = square.sample_grid(41)
        assert grid.index_of([0.0, 0.0]) == 20 * 41 + 20
        assert grid.index_of([-0.5, 0.75]) is not None

    def test_every_grid_point_inside(self, square):
        """Test grid membership at the exact tolerance"""
        for p in square.sample_grid(17).points:
            assert square.contains(p, config.EXACT_TOL)

    def test_grid_deterministic(self, square):
        """Test that equal arguments give identical grids"""
        assert np.array_equal(square.sample_grid(9).points, square.sample_grid(9).points)

    def test_bad_resolution(self, square):
        """Test resolution < 2"""
        with pytest.raises(GeometryError):
            square.sample_grid(1)

    def test_inverted_bounds(self):
        """Test lower > upper"""
        with pytest.raises(GeometryError):
            Box([1.0], [0.0])


class TestBall:
    """Test the ball set"""

    def test_grid_inside_and_centered(self):
        """Test that lattice points lie in the ball and include the centre"""
        ball = Ball([0.0, 0.0], 1.0)
        grid = ball.sample_grid(3)
        assert len(grid) == 5
        assert grid.index_of([0.0, 0.0]) is not None
        assert np.all(np.linalg.norm(grid.points, axis=1) <= 1.0)

    def test_uniform_samples_inside(self, rng):
        """Test seeded interior sampling"""
        ball = Ball([1.0, -1.0, 0.5], 0.5)
        for p in ball.sample_uniform(rng, 200):
            assert ball.contains(p, 1e-12)

    def test_radius_must_be_positive(self):
        """Test radius <= 0"""
        with pytest.raises(GeometryError):
            Ball([0.0], 0.0)


class TestSimplex:
    """Test the simplex set"""

    def test_barycentric_lattice(self):
        """Test that resolution 3 gives vertices and edge midpoints"""
        triangle = Simplex([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
        grid = triangle.sample_grid(3)
        assert len(grid) == 6
        assert grid.index_of([0.5, 0.5]) is not None

    def test_distance_outside(self):
        """Test distance from (1,1) to the standard triangle"""
        triangle = Simplex([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
        assert triangle.distance(as_point([1.0, 1.0])) == pytest.approx(math.sqrt(0.5), abs=1e-9)
        assert triangle.contains([0.2, 0.2])

    def test_degenerate_vertices(self):
        """Test affinely dependent vertices"""
        with pytest.raises(GeometryError):
            Simplex([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]])


class TestHull:
    """Test the convex hull set"""

    def test_membership_shortcut(self):
        """Test interior and exterior points"""
        hull = Hull(UNIT_SQUARE)
        assert hull.contains([0.5, 0.5])
        assert hull.distance(as_point([2.0, 0.0])) == pytest.approx(1.0, abs=1e-9)

    def test_description_round_trip(self):
        """Test describe / convex_set_from_description"""
        for original in (Box([0.0], [2.0]), Ball([0.0, 1.0], 2.0), Hull(UNIT_SQUARE),
                         Simplex([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])):
            rebuilt = convex_set_from_description(original.describe())
            assert rebuilt.describe() == original.describe()

    def test_grid_size_is_capped(self):
        """Test an octagon at resolution 41 is refused before enumeration"""
        angles = np.arange(8) * (np.pi / 4.0)
        octagon = Hull(np.stack([np.cos(angles), np.sin(angles)], axis=1))
        with pytest.raises(GeometryError, match="62891499 points"):
            octagon.sample_grid(41)
        assert len(octagon.sample_grid(3).points) >= 8

    def test_box_grid_size_is_capped(self, monkeypatch):
        """Test the limit also applies to box lattices"""
        monkeypatch.setattr(config, "MAX_GRID_POINTS", 100)
        assert len(Box([0.0, 0.0], [1.0, 1.0]).sample_grid(10).points) == 100
        with pytest.raises(GeometryError):
            Box([0.0, 0.0], [1.0, 1.0]).sample_grid(11)

    def test_unknown_description(self):
        """Test an unknown set type"""
        with pytest.raises(GeometryError):
            convex_set_from_description({"type": "torus"})


class TestSegmentDistance:
    """Test distance to a closed segment"""

    def test_point_on_segment(self):
        """Test a point on the diagonal"""
        assert segment_distance([0.5, 0.5], [0.0, 0.0], [1.0, 1.0]) == 0.0

    def test_ql_violation_distance(self):
        """Test (1/8, 1/4) against [(0,0), (1,1)]"""
        distance = segment_distance([0.125, 0.25], [0.0, 0.0], [1.0, 1.0])
        assert distance == pytest.approx(math.sqrt(2.0) / 16.0, abs=1e-12)

    def test_degenerate_segment(self):
        """Test a = b"""
        assert segment_distance([2.0, 0.0], [0.0, 0.0], [0.0, 0.0]) == 2.0

    def test_dimension_mismatch(self):
        """Test mixed dimensions"""
        with pytest.raises(DimensionError):
            segment_distance([1.0, 0.0], [0.0, 0.0, 0.0], [1.0, 1.0])

    def test_zero_iff_reconstructible(self, rng):
        """Test that points built from t in [0,1] have distance 0"""
        for _ in range(100):
            a, b = rng.normal(size=2), rng.normal(size=2)
            t = rng.random()
            assert segment_distance((1 - t) * a + t * b, a, b) <= 1e-12


class TestHullDistance:
    """Test the min-norm-point hull distance"""

    def test_interior_point(self):
        """Test a point inside the square"""
        assert hull_distance([0.5, 0.5], UNIT_SQUARE) <= config.GEOMETRY_TOL

    def test_exterior_point(self):
        """Test nearest point (1, 0)"""
        assert hull_distance([2.0, 0.0], UNIT_SQUARE) == pytest.approx(1.0, abs=1e-9)

    def test_agrees_with_segment_distance(self, rng):
        """Test 2-vertex hulls against the closed-form projection"""
        for _ in range(1000):
            p, a, b = rng.normal(size=(3, 2))
            assert hull_distance(p, [a, b]) == pytest.approx(segment_distance(p, a, b), abs=1e-8)

    def test_two_vertex_ql_witness(self):
        """Test (1/8, 1/4) against the hull of (0,0) and (1,1)"""
        assert hull_distance([0.125, 0.25], [[0.0, 0.0], [1.0, 1.0]]) == pytest.approx(
            math.sqrt(2.0) / 16.0, abs=1e-9)

    def test_empty_vertex_list(self):
        """Test missing vertices"""
        with pytest.raises(GeometryError):
            hull_distance([0.0, 0.0], [])

    def test_non_convergence_is_signalled(self):
        """Test a single major iteration on a point needing several"""
        with pytest.raises(ConvergenceError) as info:
            hull_distance([0.5, 0.25], UNIT_SQUARE, max_iter=1)
        assert info.value.iterations == 1

    def test_projection_weights(self):
        """Test the full projection result"""
        result = hull_projection([0.5, 2.0], UNIT_SQUARE)
        assert result.converged
        assert result.distance == pytest.approx(1.0, abs=1e-9)
        assert result.weights.sum() == pytest.approx(1.0)
        assert result.nearest == pytest.approx([0.5, 1.0], abs=1e-9)


class TestConvexSample:
    """Test seeded convex combinations"""

    def test_single_vertex(self):
        """Test the one-vertex hull"""
        point, weights = convex_sample([[3.0, 4.0]], seed=5)
        assert point.tolist() == [3.0, 4.0]
        assert weights.tolist() == [1.0]

    def test_axis_segment(self):
        """Test a hull lying on the first axis"""
        for seed in range(20):
            point, _ = convex_sample([[0.0, 0.0], [1.0, 0.0]], seed)
            assert point[1] == 0.0

    def test_weights_and_membership(self):
        """Test weights summing to one and the sample lying in the hull"""
        for seed in range(50):
            point, weights = convex_sample(UNIT_SQUARE, seed)
            assert np.all(weights >= 0.0)
            assert math.fsum(weights) == pytest.approx(1.0, abs=1e-15)
            assert hull_distance(point, UNIT_SQUARE) <= config.GEOMETRY_TOL

    def test_deterministic(self):
        """Test equal seeds"""
        first, _ = convex_sample(UNIT_SQUARE, 11)
        second, _ = convex_sample(UNIT_SQUARE, 11)
        assert np.array_equal(first, second)

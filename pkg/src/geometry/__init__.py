"""
Compact convex sets, sample grids and distance primitives
"""

from src.geometry.convex_sets import (
    Ball,
    Box,
    ConvexSet,
    Hull,
    SampleGrid,
    Simplex,
    contains,
    convex_set_from_description,
    sample_grid,
)
from src.geometry.distances import (
    HullProjection,
    convex_sample,
    hull_distance,
    hull_projection,
    project_onto_segment,
    segment_distance,
)
from src.geometry.points import Point, PointLike, as_point, as_points

__all__ = [
    "Ball", "Box", "ConvexSet", "Hull", "SampleGrid", "Simplex",
    "contains", "convex_set_from_description", "sample_grid",
    "HullProjection", "convex_sample", "hull_distance", "hull_projection",
    "project_onto_segment", "segment_distance",
    "Point", "PointLike", "as_point", "as_points",
]

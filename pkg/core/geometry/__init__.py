"""Convex polygon geometry: cones, singular rays, clipping."""

from .polygon import (
    ConeLocation, ConvexPolygon, GeneralPositionReport, HalfPlane, SingularRay, SupportLine,
    cone_index, cone_indices, distance_to_singular_set, distances_to_singular_set,
    general_position_check, load_polygon, singular_rays, support_lines, transversality_gap,
    validate_polygon,
)
from .shapes import Similarity, parallelogram, regular_polygon, triangle, unit_square

__all__ = [
    'ConeLocation', 'ConvexPolygon', 'GeneralPositionReport', 'HalfPlane', 'SingularRay',
    'SupportLine', 'cone_index', 'cone_indices', 'distance_to_singular_set',
    'distances_to_singular_set', 'general_position_check', 'load_polygon', 'singular_rays',
    'support_lines', 'transversality_gap', 'validate_polygon',
    'Similarity', 'parallelogram', 'regular_polygon', 'triangle', 'unit_square',
]

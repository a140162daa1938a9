"""Continuity cells, itineraries and the singular structure of T^n."""

from .subdivision import (
    ContinuityCell, ItineraryCounts, LineSegment, SingularConnectionReport, SubdivisionLevel,
    connection_residual, detect_singular_connections, growth_rates, itinerary_counts,
    iter_subdivision, singular_set_order_n, subdivide, three_symbol_depth, trap_disc,
)

__all__ = [
    'ContinuityCell', 'ItineraryCounts', 'LineSegment', 'SingularConnectionReport',
    'SubdivisionLevel', 'connection_residual', 'detect_singular_connections', 'growth_rates',
    'itinerary_counts', 'iter_subdivision', 'singular_set_order_n', 'subdivide',
    'three_symbol_depth', 'trap_disc',
]

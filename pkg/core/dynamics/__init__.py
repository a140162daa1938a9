"""The contracted outer billiard map and its orbit algebra."""

from .billiard_map import (
    AffineMap, MapParams, OrbitResult, OrbitStatus, StepResult, StepStatus, TrapRadii,
    branch_map, h_point, h_point_append, itinerary_map, orbit, orbit_bound, orbit_closed_form,
    step, step_many, trap_radii, two_symbol_fixed_point,
)

__all__ = [
    'AffineMap', 'MapParams', 'OrbitResult', 'OrbitStatus', 'StepResult', 'StepStatus',
    'TrapRadii', 'branch_map', 'h_point', 'h_point_append', 'itinerary_map', 'orbit',
    'orbit_bound', 'orbit_closed_form', 'step', 'step_many', 'trap_radii',
    'two_symbol_fixed_point',
]

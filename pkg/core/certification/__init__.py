"""Asymptotic periodicity certificates, attractors and basin assignment."""

from .certifier import (
    BasinLabel, CertificationResult, CertificationStatus, ClusteredOrbit, PeriodicAttractor,
    assign_many, attractor_from_itinerary, attractors_from_cells, basin_assign, canonical_rotation,
    certify, enumerate_attractors, minimal_period, monte_carlo_attractors, verify_attractor,
)

__all__ = [
    'BasinLabel', 'CertificationResult', 'CertificationStatus', 'ClusteredOrbit',
    'PeriodicAttractor', 'assign_many', 'attractor_from_itinerary', 'attractors_from_cells',
    'basin_assign', 'canonical_rotation', 'certify', 'enumerate_attractors', 'minimal_period',
    'monte_carlo_attractors', 'verify_attractor',
]

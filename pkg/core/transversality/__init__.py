"""Bounded-coefficient polynomials and sublevel-set measure bounds."""

from .lojasiewicz import (
    HYPOTHESIS_NOTE, MeasureBound, lojasiewicz_bound, max_abs_on_interval, omega_slice_measure,
    sublevel_measure, theorem_bound,
)
from .polynomials import (
    BoundedPoly, FactoredPolynomial, RadiusBounds, check_delta_k, check_delta_k_grid, default_tau,
    estimate_delta, eval_derivatives, evaluate_itinerary_polynomial, factor_leading,
    itinerary_polynomial, load_polynomial, polyestimate_k, r_alpha_bounds, random_family_polynomial,
)

__all__ = [
    'HYPOTHESIS_NOTE', 'MeasureBound', 'lojasiewicz_bound', 'max_abs_on_interval',
    'omega_slice_measure', 'sublevel_measure', 'theorem_bound',
    'BoundedPoly', 'FactoredPolynomial', 'RadiusBounds', 'check_delta_k', 'check_delta_k_grid',
    'default_tau', 'estimate_delta', 'eval_derivatives', 'evaluate_itinerary_polynomial',
    'factor_leading', 'itinerary_polynomial', 'load_polynomial', 'polyestimate_k',
    'r_alpha_bounds', 'random_family_polynomial',
]

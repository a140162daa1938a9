#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Outer Billiards - Bounded-Coefficient Polynomials

Polynomials 1 + a_1 x + ... + a_n x^n with |a_i| <= alpha, the radius
bounds for their zeros of order k, the (delta, k)-transversality check and
the itinerary polynomials h_j that link these to the billiard.
"""

import logging
import math
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import List, Sequence, Tuple, Union

import numpy as np
from numpy.polynomial import Polynomial

from core.errors import (
    AllLeadingCoefficientsBelowThreshold, InputFileError, NotFoundWithinCap, ParameterOutOfRange,
)
from core.geometry.polygon import ConvexPolygon, dot, support_lines

logger = logging.getLogger(__name__)

POLYESTIMATE_CAP = 1_000_000
_COEFF_SLACK = 1e-12


@dataclass(frozen=True)
class BoundedPoly:
    """Coefficients a_0..a_n (constant first) with a declared bound alpha."""
    coefficients: Tuple[float, ...]
    alpha: float

    @cached_property
    def poly(self) -> Polynomial:
        return Polynomial(self.coefficients)

    @property
    def degree(self) -> int:
        trimmed = self.poly.trim()
        return 0 if len(trimmed.coef) == 0 else len(trimmed.coef) - 1

    @property
    def coefficients_bounded(self) -> bool:
        return all(abs(a) <= self.alpha * (1 + _COEFF_SLACK) for a in self.coefficients[1:])

    @property
    def in_family(self) -> bool:
        """Member of F_alpha: bounded coefficients and constant term 1."""
        return self.coefficients_bounded and bool(self.coefficients) and self.coefficients[0] == 1.0

    def __call__(self, x):
        return self.poly(x)

    def derivative(self, order: int = 1) -> Polynomial:
        return self.poly.deriv(order) if order > 0 else self.poly

    def reflected(self) -> "BoundedPoly":
        """p(-x)."""
        return BoundedPoly(tuple(a * (-1) ** i for i, a in enumerate(self.coefficients)), self.alpha)


@dataclass(frozen=True)
class RadiusBounds:
    """Bounds lower <= r_alpha(k) <= upper."""
    alpha: float
    k: int
    lower: float
    upper: float


@dataclass(frozen=True)
class FactoredPolynomial:
    """h(t) = c_l * t^l * hhat(t); hhat(0) = 1."""
    leading_index: int
    leading_coefficient: float
    normalized: BoundedPoly


def eval_derivatives(p: BoundedPoly, x: float, up_to: int) -> List[float]:
    """p(x), p'(x), ..., p^(j)(x)."""
    if up_to < 0:
        raise ParameterOutOfRange(f"Derivative order must be >= 0, got {up_to}")
    return [float(p.derivative(m)(x)) for m in range(up_to + 1)]


def r_alpha_bounds(alpha: float, k: int) -> RadiusBounds:
    """Lower and upper bounds for the smallest zero of order k in F_alpha."""
    if alpha <= 0 or k < 0:
        raise ParameterOutOfRange(f"Need alpha > 0 and k >= 0, got alpha={alpha}, k={k}")
    lower = (1 + 1 / (k + 1)) ** -0.5 * (alpha ** 2 * (k + 1) + 1) ** (-1 / (2 * (k + 1)))
    upper = (1 - 1 / (k + 2)) ** min(alpha / 9, 1.0)
    return RadiusBounds(alpha, k, lower, upper)


def check_delta_k(p: BoundedPoly, x: float, delta: float, k: int, epsilon: float = None) -> bool:
    """Whether |p(x)| < epsilon implies max_{1<=j<=k} |p^(j)(x)| >= delta at x.

    epsilon defaults to delta.
    """
    if not 0 < delta < 1 or k < 1:
        raise ParameterOutOfRange(f"Need 0 < delta < 1 and k >= 1, got delta={delta}, k={k}")
    threshold = delta if epsilon is None else epsilon
    values = eval_derivatives(p, x, k)
    if abs(values[0]) >= threshold:
        return True
    return max(abs(v) for v in values[1:]) >= delta


def check_delta_k_grid(p: BoundedPoly, xs: np.ndarray, delta: float, k: int, epsilon: float = None) -> bool:
    """check_delta_k at every grid point."""
    if not 0 < delta < 1 or k < 1:
        raise ParameterOutOfRange(f"Need 0 < delta < 1 and k >= 1, got delta={delta}, k={k}")
    threshold = delta if epsilon is None else epsilon
    xs = np.asarray(xs, dtype=float)
    small = np.abs(p(xs)) < threshold
    steep = np.zeros(xs.shape, dtype=bool)
    for j in range(1, k + 1):
        steep |= np.abs(p.derivative(j)(xs)) >= delta
    return bool(np.all(~small | steep))


def polyestimate_k(alpha: float, b: float, tau: float, cap: int = POLYESTIMATE_CAP) -> int:
    """Smallest m with 1/(b + tau) > 1/lower(alpha, m).

    Raises:
        ParameterOutOfRange: b, tau or alpha outside their ranges
        NotFoundWithinCap: no such m up to cap
    """
    if alpha <= 0 or not 0 <= b < 1 or not 0 < tau < 1 - b:
        raise ParameterOutOfRange(f"Need alpha > 0, 0 <= b < 1, 0 < tau < 1 - b; got {alpha}, {b}, {tau}")
    target = b + tau
    for m in range(cap + 1):
        if r_alpha_bounds(alpha, m).lower > target:
            return m
    raise NotFoundWithinCap(f"No k <= {cap} for alpha={alpha}, b={b}, tau={tau}")


def default_tau(alpha: float, b: float) -> float:
    """min(r_alpha(1) - r_alpha(0), 1 - b)/2 with r_alpha(1) replaced by its lower bound.

    Falls back to (1 - b)/2 when that lower bound does not exceed r_alpha(0).
    """
    gap = r_alpha_bounds(alpha, 1).lower - 1 / (1 + alpha)
    if gap <= 0:
        return (1 - b) / 2
    return min(gap, 1 - b) / 2


def random_family_polynomial(alpha: float, degree: int, rng: np.random.Generator) -> BoundedPoly:
    """Uniform sample from F_alpha truncated at the given degree."""
    tail = rng.uniform(-alpha, alpha, degree)
    return BoundedPoly((1.0,) + tuple(float(a) for a in tail), alpha)


def estimate_delta(
    alpha: float,
    k: int,
    interval: Tuple[float, float] = None,
    n_polys: int = 200,
    degree: int = 20,
    grid: int = 2000,
    seed: int = 0,
) -> float:
    """Empirical delta: min over samples and grid of max(|p|, |p'|, ..., |p^(k)|).

    Heuristic only; the transversality constant comes from a compactness
    argument and this value certifies nothing.
    """
    if interval is None:
        interval = (0.0, max(r_alpha_bounds(alpha, k).lower - default_tau(alpha, 0.0), 0.0))
    xs = np.linspace(interval[0], interval[1], grid)
    rng = np.random.default_rng(seed)
    delta = math.inf
    for _ in range(n_polys):
        p = random_family_polynomial(alpha, degree, rng)
        ladder = np.abs(p(xs))
        for j in range(1, k + 1):
            ladder = np.maximum(ladder, np.abs(p.derivative(j)(xs)))
        delta = min(delta, float(ladder.min()))
    logger.debug(f"Empirical delta for alpha={alpha}, k={k} on {interval}: {delta:.6g}")
    return delta


def itinerary_polynomial(polygon: ConvexPolygon, itinerary: Sequence[int], side: int) -> BoundedPoly:
    """Coefficients c_0..c_n of h_j in the variable t = -lambda.

    h_j(lambda) = <H(itinerary) - v_j, eta_j> = sum_l c_l (-lambda)^l.
    """
    n = len(itinerary)
    if n < 1:
        raise ParameterOutOfRange("Itinerary must be nonempty")
    eta = support_lines(polygon)[(side - 1) % polygon.d].normal
    v = [polygon.vertex(i) for i in itinerary]
    coefficients = [dot(v[n - 1] - polygon.vertex(side), eta)]
    for ell in range(1, n):
        coefficients.append(dot(v[n - ell - 1] - v[n - ell], eta))
    coefficients.append(-dot(v[0], eta))
    return BoundedPoly(tuple(coefficients), 2 * polygon.norm)


def evaluate_itinerary_polynomial(p: BoundedPoly, lam: float) -> float:
    return float(p(-lam))


def factor_leading(coefficients: Sequence[float], n_max: int, tau: float, scale: float = None) -> FactoredPolynomial:
    """Split off the first coefficient of magnitude >= tau.

    Returns l, c_l and hhat with coefficients c_{l+i}/c_l, so that
    h(t) = c_l t^l hhat(t). The bound on hhat is scale/tau, scale defaulting
    to the largest |c_i|.

    Raises:
        AllLeadingCoefficientsBelowThreshold: |c_l| < tau for every l <= n_max
    """
    cs = [float(c) for c in coefficients]
    for ell, c in enumerate(cs[:n_max + 1]):
        if abs(c) >= tau:
            scale = max(abs(x) for x in cs) if scale is None else scale
            tail = tuple([1.0] + [x / c for x in cs[ell + 1:]])
            return FactoredPolynomial(ell, c, BoundedPoly(tail, scale / tau))
    raise AllLeadingCoefficientsBelowThreshold(f"No |c_l| >= {tau} with l <= {n_max}")


def load_polynomial(path: Union[str, Path], alpha: float = None) -> BoundedPoly:
    """Read one coefficient per line, constant term first.

    alpha defaults to the largest |a_i| for i >= 1.

    Raises:
        InputFileError: malformed line or empty file
    """
    coefficients = []
    with open(path, "r", encoding="utf-8") as f:
        for line_no, raw in enumerate(f, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                coefficients.append(float(line))
            except ValueError as e:
                raise InputFileError(f"{path}:{line_no}: expected a number, got {line!r}") from e
    if not coefficients:
        raise InputFileError(f"{path}: no coefficients")
    if alpha is None:
        alpha = max((abs(a) for a in coefficients[1:]), default=0.0) or 1.0
    return BoundedPoly(tuple(coefficients), alpha)

"""Sublevel-set measure bounds for transversal polynomials.

Leb{x in I : |p(x)| < eps} <= C * eps^(1/k), with the constant of the
Markov-inequality argument on [-1, 1], its rescaling to a sub-interval, and
the uniform constant for the whole family F_alpha on [0, b].
"""

import logging
import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np
from scipy.optimize import brentq

from core.errors import DegreeBelowD, ParameterOutOfRange
from core.geometry.polygon import ConvexPolygon
from core.transversality.polynomials import (
    BoundedPoly, default_tau, itinerary_polynomial, polyestimate_k, r_alpha_bounds,
)

logger = logging.getLogger(__name__)

HYPOTHESIS_NOTE = ("delta is a user parameter: the transversality hypothesis is assumed, "
                   "at most checked on a grid, never certified")

Interval = Tuple[float, float]


@dataclass(frozen=True)
class MeasureBound:
    epsilon: float
    k: int
    delta: float
    constant: float
    bound: float
    interval: Interval
    variant: str
    note: str = HYPOTHESIS_NOTE

    def to_dict(self):
        return {
            "epsilon": self.epsilon,
            "k": self.k,
            "delta": self.delta,
            "constant": self.constant,
            "bound": self.bound,
            "interval": list(self.interval),
            "variant": self.variant,
            "note": self.note,
        }


def _check_interval(interval: Interval) -> Interval:
    a, b = float(interval[0]), float(interval[1])
    if not (math.isfinite(a) and math.isfinite(b)) or a >= b:
        raise ParameterOutOfRange(f"Interval must be finite with a < b, got {interval}")
    return a, b


def max_abs_on_interval(p: BoundedPoly, interval: Interval) -> float:
    """max |p| over [a, b] from the endpoints and the real critical points."""
    a, b = _check_interval(interval)
    candidates = [a, b]
    if p.degree >= 2:
        for root in p.derivative(1).roots():
            if abs(root.imag) < 1e-12 and a <= root.real <= b:
                candidates.append(root.real)
    return float(max(abs(p(x)) for x in candidates))


def lojasiewicz_bound(
    p: BoundedPoly,
    d: int,
    delta: float,
    epsilon: float,
    interval: Interval = (-1.0, 1.0),
) -> MeasureBound:
    """C * eps^(1/d) for a polynomial with max_{j<=d} |p^(j)| >= delta on the interval.

    On [-1, 1] C = 2^(d+3)/delta^2 * (4 n^(2(d+1)) max|p| + 1); on any
    other [a, b] the constant picks up the factor (2/(b-a))^(2d-1) from
    rescaling to [-1, 1].

    Raises:
        DegreeBelowD: deg p < d
        ParameterOutOfRange: delta, epsilon or interval out of range
    """
    if not 0 < delta < 1 or epsilon <= 0 or d < 1:
        raise ParameterOutOfRange(f"Need 0 < delta < 1, epsilon > 0, d >= 1; got {delta}, {epsilon}, {d}")
    n = p.degree
    if n < d:
        raise DegreeBelowD(f"Polynomial degree {n} is below d = {d}")
    a, b = _check_interval(interval)
    core = 2 ** (d + 3) / delta ** 2 * (4 * n ** (2 * (d + 1)) * max_abs_on_interval(p, (a, b)) + 1)
    if (a, b) == (-1.0, 1.0):
        constant, variant = core, "standard"
    else:
        constant, variant = (2 / (b - a)) ** (2 * d - 1) * core, "rescaled"
    return MeasureBound(epsilon, d, delta, constant, constant * epsilon ** (1 / d), (a, b), variant)


def theorem_bound(
    p: BoundedPoly,
    alpha: float,
    interval: Interval,
    delta: float,
    epsilon: float,
    tau: float = None,
) -> MeasureBound:
    """Uniform bound over F_alpha on [a, b] subset [0, 1).

    C = 2^(3k+5) (1+alpha)^(2k) deg^(2(k+1)) / (delta^2 (1 - r)), with k from
    polyestimate_k and r the upper bound for r_alpha(k).
    """
    a, b = _check_interval(interval)
    if a < 0 or b >= 1:
        raise ParameterOutOfRange(f"Interval must lie in [0, 1), got {interval}")
    if not 0 < delta < 1 or epsilon <= 0:
        raise ParameterOutOfRange(f"Need 0 < delta < 1 and epsilon > 0; got {delta}, {epsilon}")
    tau = default_tau(alpha, b) if tau is None else tau
    k = max(1, polyestimate_k(alpha, b, tau))
    r_up = r_alpha_bounds(alpha, k).upper
    constant = (2 ** (3 * k + 5) * (1 + alpha) ** (2 * k) * p.degree ** (2 * (k + 1))
                / (delta ** 2 * (1 - r_up)))
    note = HYPOTHESIS_NOTE
    if epsilon >= delta:
        note += "; epsilon >= delta, outside the bound's stated range"
    return MeasureBound(epsilon, k, delta, constant, constant * epsilon ** (1 / k), (a, b), "theorem", note)


def _grid_measure(p: BoundedPoly, epsilon: float, a: float, b: float, samples: int) -> float:
    h = (b - a) / samples
    total = 0
    block = 1 << 18
    for lo in range(0, samples, block):
        xs = a + (np.arange(lo, min(lo + block, samples)) + 0.5) * h
        total += int(np.count_nonzero(np.abs(p(xs)) < epsilon))
    return total * h


def _crossings(f, a: float, b: float, grid: int) -> Sequence[float]:
    xs = np.linspace(a, b, grid + 1)
    ys = f(xs)
    points = list(xs[ys == 0.0])
    for i in np.flatnonzero(ys[:-1] * ys[1:] < 0):
        points.append(brentq(f, xs[i], xs[i + 1], xtol=1e-15, rtol=4 * np.finfo(float).eps))
    return points


def _roots_measure(p: BoundedPoly, epsilon: float, a: float, b: float, grid: int) -> float:
    breaks = {a, b}
    for shift in (-epsilon, epsilon):
        breaks.update(_crossings(lambda x, s=shift: p(x) + s, a, b, grid))
    breaks = sorted(breaks)
    total = 0.0
    for lo, hi in zip(breaks[:-1], breaks[1:]):
        if hi > lo and abs(p(0.5 * (lo + hi))) < epsilon:
            total += hi - lo
    return total


def sublevel_measure(
    p: BoundedPoly,
    epsilon: float,
    interval: Interval = (-1.0, 1.0),
    mode: str = "grid",
    samples: int = 1_000_000,
    root_grid: int = 20_000,
) -> float:
    """Lebesgue measure of {x in interval : |p(x)| < eps}.

    mode "grid" uses the midpoint rule; mode "roots" brackets the real roots
    of p - eps and p + eps on a fine grid, refines them with brentq and sums
    the pieces where |p| < eps.
    """
    a, b = _check_interval(interval)
    if mode == "grid":
        return _grid_measure(p, epsilon, a, b, samples)
    if mode == "roots":
        return _roots_measure(p, epsilon, a, b, root_grid)
    raise ParameterOutOfRange(f"Unknown measure mode {mode!r}")


def omega_slice_measure(
    polygon: ConvexPolygon,
    itinerary: Sequence[int],
    side: int,
    rho: float,
    lam_interval: Interval,
    mode: str = "roots",
) -> float:
    """Measure of {lam in I : |h_j(lam)| < rho} for one itinerary and side.

    These lambdas are the ones for which H(itinerary) comes within rho of
    the line through side j.
    """
    a, b = _check_interval(lam_interval)
    if a < 0 or b > 1:
        raise ParameterOutOfRange(f"Lambda interval must lie in [0, 1], got {lam_interval}")
    # h_j(lam) = q(-lam), so the slice is the reflected interval for q
    q = itinerary_polynomial(polygon, itinerary, side)
    return sublevel_measure(q, rho, (-b, -a), mode)

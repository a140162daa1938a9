#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Outer Billiards - Contracted Billiard Map

The map T(z) = -lam*z + (1+lam)*v_k on cone A_k, orbits, the closed-form
orbit algebra and the trapping disc.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Sequence, Tuple

import numpy as np

from core.errors import EnteredPolygonError, ParameterOutOfRange, SameVertex
from core.geometry.polygon import (
    SINGULAR_TOL_FACTOR, ConeLocation, ConvexPolygon, PointLike, cone_index, cone_indices, to_complex,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MapParams:
    """Polygon and contraction factor, 0 < lam < 1.

    singular_tol_factor is the distance below which a point counts as on the
    singular set or the polygon boundary, relative to max(1, ||P||).
    """
    polygon: ConvexPolygon
    lam: float
    singular_tol_factor: float = SINGULAR_TOL_FACTOR

    def __post_init__(self):
        if not (0.0 < self.lam < 1.0) or math.isnan(self.lam):
            raise ParameterOutOfRange(f"lambda must lie in (0, 1), got {self.lam}")
        if not self.singular_tol_factor >= 0.0:
            raise ParameterOutOfRange(f"singular tolerance must be >= 0, got {self.singular_tol_factor}")

    @property
    def singular_tol(self) -> float:
        return self.singular_tol_factor * self.polygon.scale


class StepStatus(Enum):
    OK = "ok"
    SINGULAR_HIT = "singular_hit"


class OrbitStatus(Enum):
    COMPLETED = "completed"
    SINGULAR_HIT = "singular_hit"
    ENTERED_POLYGON = "entered_polygon"


@dataclass(frozen=True)
class StepResult:
    point: Optional[complex]
    cone: int
    status: StepStatus = StepStatus.OK

    @property
    def is_singular(self) -> bool:
        return self.status is StepStatus.SINGULAR_HIT


@dataclass
class OrbitResult:
    """Points z_0..z_m and the cones used for each of the m steps."""
    points: List[complex]
    itinerary: Tuple[int, ...]
    status: OrbitStatus = OrbitStatus.COMPLETED
    singular_step: Optional[int] = None

    @property
    def final_point(self) -> complex:
        return self.points[-1]

    def rows(self) -> List[Tuple[int, float, float, int]]:
        """CSV rows (step, x, y, cone_index); cone 0 marks the last point."""
        rows = []
        for i, z in enumerate(self.points):
            cone = self.itinerary[i] if i < len(self.itinerary) else 0
            rows.append((i, z.real, z.imag, cone))
        return rows


@dataclass(frozen=True)
class TrapRadii:
    a: float
    b: float
    r: float

    @property
    def h_bound(self) -> float:
        """Bound b(1+a)/(1-a) on every H-point."""
        return self.b * (1 + self.a) / (1 - self.a)


@dataclass(frozen=True)
class AffineMap:
    """z -> scale*z + shift with real scale."""
    scale: float = 1.0
    shift: complex = 0j

    @classmethod
    def identity(cls) -> "AffineMap":
        return cls()

    def __call__(self, z):
        return self.scale * z + self.shift

    def then(self, other: "AffineMap") -> "AffineMap":
        """The composition other o self."""
        return AffineMap(other.scale * self.scale, other.scale * self.shift + other.shift)

    def inverse(self) -> "AffineMap":
        return AffineMap(1.0 / self.scale, -self.shift / self.scale)

    def fixed_point(self) -> complex:
        return self.shift / (1.0 - self.scale)


def branch_map(params: MapParams, k: int) -> AffineMap:
    """Affine branch T_k used on cone A_k."""
    return AffineMap(-params.lam, (1 + params.lam) * params.polygon.vertex(k))


def step(params: MapParams, z: PointLike) -> StepResult:
    """Apply the map once.

    Raises:
        EnteredPolygonError: z lies in the closed polygon
    """
    z = to_complex(z)
    k = cone_index(params.polygon, z, params.singular_tol)
    if k == ConeLocation.INSIDE:
        raise EnteredPolygonError(f"Point {z} lies inside the polygon")
    if k == ConeLocation.SINGULAR:
        return StepResult(None, int(k), StepStatus.SINGULAR_HIT)
    lam = params.lam
    return StepResult(-lam * z + (1 + lam) * params.polygon.vertex(k), int(k))


def step_many(params: MapParams, zs: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Vectorized step.

    Returns:
        Tuple of mapped points and cone labels. Points with label <= 0
        (singular or inside) are returned unchanged.
    """
    zs = np.asarray(zs, dtype=complex)
    cones = cone_indices(params.polygon, zs, params.singular_tol)
    ok = cones > 0
    vertices = params.polygon.vertex_array[np.where(ok, cones - 1, 0)]
    lam = params.lam
    return np.where(ok, -lam * zs + (1 + lam) * vertices, zs), cones


def orbit(params: MapParams, z0: PointLike, n_steps: int) -> OrbitResult:
    """Iterate up to n_steps or until the orbit hits the singular set."""
    z = to_complex(z0)
    points = [z]
    itinerary: List[int] = []
    for i in range(n_steps):
        try:
            result = step(params, z)
        except EnteredPolygonError:
            logger.warning(f"Orbit entered the polygon at step {i}")
            return OrbitResult(points, tuple(itinerary), OrbitStatus.ENTERED_POLYGON, i)
        if result.is_singular:
            return OrbitResult(points, tuple(itinerary), OrbitStatus.SINGULAR_HIT, i)
        z = result.point
        points.append(z)
        itinerary.append(result.cone)
    return OrbitResult(points, tuple(itinerary))


def h_point(params: MapParams, itinerary: Sequence[int]) -> complex:
    """(1+lam) * sum_j (-lam)^(n-j-1) v_{i_j}: the image of 0 under the branches."""
    h = 0j
    for k in itinerary:
        h = h_point_append(params, h, k)
    return h


def h_point_append(params: MapParams, h: complex, k: int) -> complex:
    """H of the itinerary extended by symbol k, from H of the itinerary."""
    return -params.lam * h + (1 + params.lam) * params.polygon.vertex(k)


def itinerary_map(params: MapParams, itinerary: Sequence[int]) -> AffineMap:
    """Composite branch map T_{i_{n-1}} o ... o T_{i_0}."""
    return AffineMap((-params.lam) ** len(itinerary), h_point(params, itinerary))


def orbit_closed_form(params: MapParams, z0: PointLike, itinerary: Sequence[int]) -> complex:
    return itinerary_map(params, itinerary)(to_complex(z0))


def trap_radii(params: MapParams, epsilon: float = 0.0) -> TrapRadii:
    """Radii of the trapping disc K.

    Raises:
        ParameterOutOfRange: epsilon < 0 or lam + epsilon >= 1
    """
    if epsilon < 0:
        raise ParameterOutOfRange(f"epsilon must be nonnegative, got {epsilon}")
    a = params.lam + epsilon
    if a >= 1.0:
        raise ParameterOutOfRange(f"lambda + epsilon must be below 1, got {a}")
    b = params.polygon.norm + epsilon
    return TrapRadii(a, b, b * (1 + a) / (1 - a) ** 2)


def two_symbol_fixed_point(params: MapParams, k: int, j: int) -> complex:
    """Fixed point of T_j o T_k.

    Raises:
        SameVertex: k and j name the same vertex
    """
    d = params.polygon.d
    if (k - 1) % d == (j - 1) % d:
        raise SameVertex(f"Vertices {k} and {j} coincide")
    lam = params.lam
    return (params.polygon.vertex(j) - lam * params.polygon.vertex(k)) / (1 - lam)


def orbit_bound(params: MapParams, z: PointLike, n: int) -> float:
    """Upper bound lam^n |z| + b(1+lam)/(1-lam) on |T^n z|."""
    radii = trap_radii(params)
    return params.lam ** n * abs(to_complex(z)) + radii.h_bound

"""Polygon constructors and plane similarities."""

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from core.geometry.polygon import ConvexPolygon, PointLike, to_complex, validate_polygon


def unit_square() -> ConvexPolygon:
    return validate_polygon([(0, 0), (1, 0), (1, 1), (0, 1)])


def triangle(points: Sequence[PointLike] = ((0.0, 0.0), (1.0, 0.0), (0.2, 0.9))) -> ConvexPolygon:
    return validate_polygon(points)


def parallelogram(u: PointLike = (1.0, 0.0), w: PointLike = (0.3, 1.0), origin: PointLike = (0.0, 0.0)) -> ConvexPolygon:
    """Parallelogram spanned by u and w at origin."""
    o, a, b = to_complex(origin), to_complex(u), to_complex(w)
    return validate_polygon([o, o + a, o + a + b, o + b])


def regular_polygon(d: int, radius: float = 1.0, center: PointLike = 0j, rotation: float = 0.0) -> ConvexPolygon:
    """Regular d-gon inscribed in a circle, first vertex at angle `rotation`."""
    c = to_complex(center)
    return validate_polygon([c + radius * cmath.exp(1j * (rotation + 2 * math.pi * k / d)) for k in range(d)])


@dataclass(frozen=True)
class Similarity:
    """Orientation-preserving similarity z -> a*z + b with a != 0."""
    a: complex
    b: complex = 0j

    @classmethod
    def from_parts(cls, rotation: float = 0.0, scale: float = 1.0, shift: PointLike = 0j) -> "Similarity":
        return cls(scale * cmath.exp(1j * rotation), to_complex(shift))

    def __call__(self, z):
        if isinstance(z, np.ndarray):
            return self.a * z + self.b
        return self.a * to_complex(z) + self.b

    def apply_polygon(self, polygon: ConvexPolygon) -> ConvexPolygon:
        return validate_polygon([self(v) for v in polygon.vertices])

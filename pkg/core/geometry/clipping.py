"""Convex clipping kernel.

Sutherland-Hodgman against one half-plane at a time. Vertices are complex
numbers; a companion vertex list (for instance the affine image of the
polygon) can be carried through the clip and is interpolated with the same
parameters, which is exact for affine maps.
"""

import math
from typing import List, Optional, Sequence, Tuple

from core.geometry.polygon import HalfPlane, cross, dot, polygon_signed_area


def polygon_area(vertices: Sequence[complex]) -> float:
    """Unsigned shoelace area."""
    return abs(polygon_signed_area(vertices))


def clip_by_values(
    vertices: Sequence[complex],
    values: Sequence[float],
    companion: Optional[Sequence[complex]] = None,
) -> Tuple[List[complex], Optional[List[complex]]]:
    """Keep the part of a convex polygon where an affine function is >= 0.

    Args:
        vertices: Polygon vertices in order
        values: The affine function evaluated at each vertex
        companion: Optional parallel vertex list interpolated alongside

    Returns:
        Tuple of clipped vertices and clipped companion (or None)
    """
    out: List[complex] = []
    out_companion: Optional[List[complex]] = [] if companion is not None else None
    n = len(vertices)
    if n == 0:
        return out, out_companion

    prev = n - 1
    for cur in range(n):
        f_prev, f_cur = values[prev], values[cur]
        if (f_prev >= 0.0) != (f_cur >= 0.0):
            t = f_prev / (f_prev - f_cur)
            out.append(vertices[prev] + t * (vertices[cur] - vertices[prev]))
            if companion is not None:
                out_companion.append(companion[prev] + t * (companion[cur] - companion[prev]))
        if f_cur >= 0.0:
            out.append(vertices[cur])
            if companion is not None:
                out_companion.append(companion[cur])
        prev = cur
    return out, out_companion


def clip_halfplane(
    vertices: Sequence[complex],
    plane: HalfPlane,
    companion: Optional[Sequence[complex]] = None,
) -> Tuple[List[complex], Optional[List[complex]]]:
    """Clip a convex polygon against a half-plane evaluated on the vertices."""
    return clip_by_values(vertices, [plane.value(z) for z in vertices], companion)


def clip_convex(vertices: Sequence[complex], planes: Sequence[HalfPlane]) -> List[complex]:
    """Intersect a convex polygon with several half-planes."""
    current = list(vertices)
    for plane in planes:
        current, _ = clip_halfplane(current, plane)
        if len(current) < 3:
            return []
    return current


def disc_polygon(radius: float, sides: int = 64, center: complex = 0j) -> List[complex]:
    """Regular polygon inscribed in the circle of given radius, CCW."""
    return [center + radius * complex(math.cos(2 * math.pi * i / sides), math.sin(2 * math.pi * i / sides))
            for i in range(sides)]


def clip_segment(start: complex, end: complex, polygon: Sequence[complex]) -> Optional[Tuple[float, float]]:
    """Parameter range [t0, t1] of the segment inside a convex CCW polygon.

    Cyrus-Beck clipping.

    Returns:
        The parameter interval, or None when the segment misses the polygon
    """
    t0, t1 = 0.0, 1.0
    direction = end - start
    n = len(polygon)
    for i in range(n):
        a, b = polygon[i], polygon[(i + 1) % n]
        normal = 1j * (b - a)  # inward for CCW order
        num = dot(start - a, normal)
        den = dot(direction, normal)
        if den == 0.0:
            if num < 0.0:
                return None
            continue
        t = -num / den
        if den > 0.0:
            t0 = max(t0, t)
        else:
            t1 = min(t1, t)
        if t0 > t1:
            return None
    return t0, t1


def point_in_convex(z: complex, polygon: Sequence[complex], tol: float = 0.0) -> bool:
    """Closed membership test for a CCW convex polygon."""
    n = len(polygon)
    for i in range(n):
        edge = polygon[(i + 1) % n] - polygon[i]
        if cross(edge, z - polygon[i]) < -tol * abs(edge):
            return False
    return True

"""Convex polygon model, cone partition and singular rays.

Points are complex numbers (x + iy). Cone and vertex indices are 1-based and
cyclic: cone k has apex v_k and is bounded by the singular rays k-1 and k.
"""

import cmath
import itertools
import logging
import math
from dataclasses import dataclass, field
from enum import IntEnum
from functools import cached_property
from pathlib import Path
from typing import List, Sequence, Tuple, Union

import numpy as np

from core.errors import DegenerateCollinear, InputFileError, NotConvex, TooFewVertices


logger = logging.getLogger(__name__)

PointLike = Union[complex, float, Sequence[float]]

SINGULAR_TOL_FACTOR = 1e-12
DEFAULT_ANGLE_TOL = 1e-9


class ConeLocation(IntEnum):
    """Special results of cone lookups. Proper cones are 1..d."""
    SINGULAR = 0
    INSIDE = -1


def to_complex(point: PointLike) -> complex:
    """Convert an (x, y) pair or a number to a complex point."""
    if isinstance(point, (complex, float, int, np.number)):
        return complex(point)
    x, y = point
    return complex(float(x), float(y))


def cross(a: complex, b: complex) -> float:
    """z-component of the planar cross product a x b."""
    return a.real * b.imag - a.imag * b.real


def dot(a: complex, b: complex) -> float:
    return a.real * b.real + a.imag * b.imag


@dataclass(frozen=True)
class HalfPlane:
    """Open half-plane {z : <z - point, normal> > 0}."""
    point: complex
    normal: complex

    def value(self, z: complex) -> float:
        return dot(z - self.point, self.normal)

    def values(self, zs: np.ndarray) -> np.ndarray:
        return ((zs - self.point) * np.conj(self.normal)).real


@dataclass(frozen=True)
class SingularRay:
    """Half-line extending side (v_{k+1}, v_k) beyond v_k."""
    index: int
    origin: complex
    direction: complex

    def point_at(self, t: float) -> complex:
        return self.origin + t * self.direction

    def distance(self, z: complex) -> float:
        w = z - self.origin
        along = dot(w, self.direction)
        if along <= 0.0:
            return abs(w)
        return abs(cross(self.direction, w))


@dataclass(frozen=True)
class SupportLine:
    """Line L_j through v_j and v_{j+1} with unit tangent and unit normal."""
    index: int
    base: complex
    tangent: complex
    normal: complex

    def signed_distance(self, z: complex) -> float:
        return dot(z - self.base, self.normal)


@dataclass(frozen=True)
class GeneralPositionReport:
    """Outcome of the general position diagnostic.

    Lines are named by their vertex pairs (a, b), 1-based.
    """
    in_general_position: bool
    offending_pairs: List[Tuple[Tuple[int, int], Tuple[int, int]]] = field(default_factory=list)
    line_count: int = 0


@dataclass(frozen=True, eq=False)
class ConvexPolygon:
    """Strictly convex polygon with counter-clockwise vertices.

    Build instances through validate_polygon; the constructor does not check
    convexity.
    """
    vertices: Tuple[complex, ...]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ConvexPolygon) and self.vertices == other.vertices

    def __hash__(self) -> int:
        return hash(self.vertices)

    @property
    def d(self) -> int:
        return len(self.vertices)

    def vertex(self, k: int) -> complex:
        """Vertex v_k with 1-based cyclic indexing."""
        return self.vertices[(k - 1) % self.d]

    @cached_property
    def vertex_array(self) -> np.ndarray:
        return np.array(self.vertices, dtype=complex)

    @cached_property
    def norm(self) -> float:
        """Sup-norm of the vertex tuple in C^d, i.e. the largest vertex modulus."""
        return max(abs(v) for v in self.vertices)

    @cached_property
    def coordinate_norm(self) -> float:
        """Largest absolute real or imaginary part of a vertex."""
        return max(max(abs(v.real), abs(v.imag)) for v in self.vertices)

    @property
    def scale(self) -> float:
        return max(1.0, self.norm)

    @property
    def singular_tol(self) -> float:
        return SINGULAR_TOL_FACTOR * self.scale

    @cached_property
    def area(self) -> float:
        return polygon_signed_area(self.vertices)

    @cached_property
    def edge_halfplanes(self) -> Tuple[HalfPlane, ...]:
        planes = []
        for j in range(1, self.d + 1):
            edge = self.vertex(j + 1) - self.vertex(j)
            planes.append(HalfPlane(self.vertex(j), 1j * edge / abs(edge)))
        return tuple(planes)

    @cached_property
    def cone_halfplanes(self) -> Tuple[Tuple[HalfPlane, HalfPlane], ...]:
        """For cone k: the half-planes s > 0 and t > 0 of the edge-span frame at v_k."""
        frames = []
        for k in range(1, self.d + 1):
            apex = self.vertex(k)
            e1 = self.vertex(k - 1) - apex
            e2 = apex - self.vertex(k + 1)
            frames.append((
                HalfPlane(apex, -1j * e2 / abs(e2)),
                HalfPlane(apex, 1j * e1 / abs(e1)),
            ))
        return tuple(frames)

    @cached_property
    def rays(self) -> Tuple[SingularRay, ...]:
        rays = []
        for k in range(1, self.d + 1):
            direction = self.vertex(k) - self.vertex(k + 1)
            rays.append(SingularRay(k, self.vertex(k), direction / abs(direction)))
        return tuple(rays)

    def contains(self, z: complex, tol: float = 0.0) -> bool:
        """True when z lies in the closed polygon (within tol)."""
        return all(plane.value(z) >= -tol for plane in self.edge_halfplanes)

    def contains_many(self, zs: np.ndarray, tol: float = 0.0) -> np.ndarray:
        inside = np.ones(np.shape(zs), dtype=bool)
        for plane in self.edge_halfplanes:
            inside &= plane.values(zs) >= -tol
        return inside

    def to_points(self) -> List[Tuple[float, float]]:
        return [(v.real, v.imag) for v in self.vertices]


def polygon_signed_area(vertices: Sequence[complex]) -> float:
    """Shoelace area; positive for counter-clockwise order."""
    total = 0.0
    n = len(vertices)
    for i in range(n):
        total += cross(vertices[i], vertices[(i + 1) % n])
    return 0.5 * total


def validate_polygon(points: Sequence[PointLike]) -> ConvexPolygon:
    """Check the standing assumptions and build a ConvexPolygon.

    Clockwise input is reversed rather than rejected.

    Args:
        points: Vertices as (x, y) pairs or complex numbers

    Returns:
        ConvexPolygon: Counter-clockwise, strictly convex polygon

    Raises:
        TooFewVertices: Fewer than three points
        DegenerateCollinear: Repeated vertex or collinear consecutive triple
        NotConvex: Reflex vertex or self-intersecting boundary
    """
    vertices = [to_complex(p) for p in points]
    n = len(vertices)
    if n < 3:
        raise TooFewVertices(f"Polygon needs at least 3 vertices, got {n}")

    scale = max(1.0, max(max(abs(v.real), abs(v.imag)) for v in vertices))
    for a, b in itertools.combinations(range(n), 2):
        if abs(vertices[a] - vertices[b]) <= SINGULAR_TOL_FACTOR * scale:
            raise DegenerateCollinear(f"Repeated vertex at positions {a + 1} and {b + 1}")

    if polygon_signed_area(vertices) < 0:
        vertices.reverse()
        logger.debug("Clockwise polygon reversed")

    turning = 0.0
    for i in range(n):
        incoming = vertices[i] - vertices[i - 1]
        outgoing = vertices[(i + 1) % n] - vertices[i]
        turn = cross(incoming, outgoing)
        if abs(turn) <= SINGULAR_TOL_FACTOR * abs(incoming) * abs(outgoing):
            raise DegenerateCollinear(f"Collinear vertices around position {i + 1}")
        if turn < 0:
            raise NotConvex(f"Reflex turn at vertex {i + 1}")
        turning += math.atan2(turn, dot(incoming, outgoing))

    if not math.isclose(turning, 2 * math.pi, rel_tol=1e-9):
        raise NotConvex(f"Boundary winds {turning / (2 * math.pi):.3f} times")

    return ConvexPolygon(tuple(vertices))


def cone_index(polygon: ConvexPolygon, z: PointLike, tol: float = None) -> int:
    """Locate z in the cone partition of the exterior.

    Args:
        polygon: The polygon P
        z: Query point
        tol: Distance tolerance, default 1e-12 * max(1, ||P||)

    Returns:
        int: Cone index k in 1..d, ConeLocation.SINGULAR or ConeLocation.INSIDE
    """
    z = to_complex(z)
    tol = polygon.singular_tol if tol is None else tol
    if polygon.contains(z, tol):
        return ConeLocation.INSIDE
    if distance_to_singular_set(polygon, z) <= tol:
        return ConeLocation.SINGULAR

    best_k, best = ConeLocation.SINGULAR, 0.0
    for k, (plane_s, plane_t) in enumerate(polygon.cone_halfplanes, start=1):
        score = min(plane_s.value(z), plane_t.value(z))
        if score > best:
            best_k, best = k, score
    return best_k


def cone_indices(polygon: ConvexPolygon, zs: np.ndarray, tol: float = None) -> np.ndarray:
    """Vectorized cone_index over an array of complex points."""
    zs = np.asarray(zs, dtype=complex)
    tol = polygon.singular_tol if tol is None else tol

    best = np.zeros(zs.shape)
    labels = np.full(zs.shape, int(ConeLocation.SINGULAR), dtype=np.int64)
    for k, (plane_s, plane_t) in enumerate(polygon.cone_halfplanes, start=1):
        score = np.minimum(plane_s.values(zs), plane_t.values(zs))
        better = score > best
        best = np.where(better, score, best)
        labels = np.where(better, k, labels)

    singular = distances_to_singular_set(polygon, zs) <= tol
    labels[singular] = int(ConeLocation.SINGULAR)
    labels[polygon.contains_many(zs, tol)] = int(ConeLocation.INSIDE)
    return labels


def singular_rays(polygon: ConvexPolygon) -> List[SingularRay]:
    """The d half-lines where the map is undefined, ray k starting at v_k."""
    return list(polygon.rays)


def support_lines(polygon: ConvexPolygon) -> List[SupportLine]:
    """Lines L_j through the sides (v_j, v_{j+1}) with unit normals eta_j."""
    lines = []
    for j in range(1, polygon.d + 1):
        edge = polygon.vertex(j + 1) - polygon.vertex(j)
        tangent = edge / abs(edge)
        lines.append(SupportLine(j, polygon.vertex(j), tangent, 1j * tangent))
    return lines


def distance_to_singular_set(polygon: ConvexPolygon, z: PointLike) -> float:
    """Euclidean distance from z to the union of the singular rays."""
    z = to_complex(z)
    return min(ray.distance(z) for ray in polygon.rays)


def distances_to_singular_set(polygon: ConvexPolygon, zs: np.ndarray) -> np.ndarray:
    """Vectorized distance_to_singular_set."""
    zs = np.asarray(zs, dtype=complex)
    result = np.full(zs.shape, np.inf)
    for ray in polygon.rays:
        local = (zs - ray.origin) * np.conj(ray.direction)
        dist = np.where(local.real <= 0.0, np.abs(local), np.abs(local.imag))
        np.minimum(result, dist, out=result)
    return result


def general_position_check(polygon: ConvexPolygon, angle_tol: float = DEFAULT_ANGLE_TOL) -> GeneralPositionReport:
    """Check that no two side/diagonal lines of P are parallel.

    Args:
        polygon: The polygon P
        angle_tol: Angular tolerance in radians

    Returns:
        GeneralPositionReport: Verdict and offending line pairs
    """
    lines = []
    for a, b in itertools.combinations(range(1, polygon.d + 1), 2):
        direction = polygon.vertex(b) - polygon.vertex(a)
        lines.append(((a, b), cmath.phase(direction) % math.pi))

    offending = []
    for (pair_1, angle_1), (pair_2, angle_2) in itertools.combinations(lines, 2):
        gap = abs(angle_1 - angle_2)
        if min(gap, math.pi - gap) < angle_tol:
            offending.append((pair_1, pair_2))

    return GeneralPositionReport(not offending, offending, len(lines))


def transversality_gap(polygon: ConvexPolygon, rel_tol: float = 1e-9) -> float:
    """Smallest nonzero |<v_a - v_b, eta_j>| over vertex pairs and sides.

    Every coefficient of an itinerary polynomial is such a projection, so for
    a polygon in general position a nonzero coefficient is at least this big.
    """
    floor = rel_tol * polygon.scale
    gap = math.inf
    for line in support_lines(polygon):
        for a, b in itertools.permutations(range(1, polygon.d + 1), 2):
            value = abs(dot(polygon.vertex(a) - polygon.vertex(b), line.normal))
            if floor < value < gap:
                gap = value
    return gap


def load_polygon(path: Union[str, Path]) -> ConvexPolygon:
    """Read a polygon text file: one "x y" pair per line, '#' comments.

    Raises:
        InputFileError: Malformed line
        OSError: File cannot be read
    """
    points = []
    with open(path, "r", encoding="utf-8") as f:
        for line_no, raw in enumerate(f, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise InputFileError(f"{path}:{line_no}: expected 'x y', got {line!r}")
            try:
                points.append((float(parts[0]), float(parts[1])))
            except ValueError as e:
                raise InputFileError(f"{path}:{line_no}: {e}") from e
    return validate_polygon(points)


def format_polygon(polygon: ConvexPolygon) -> str:
    """Serialize a polygon in the text format read by load_polygon."""
    return "".join(f"{v.real!r} {v.imag!r}\n" for v in polygon.vertices)

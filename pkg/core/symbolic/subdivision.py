#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Outer Billiards - Continuity Cell Subdivision

Domains of continuity of T^n inside the trapping disc, found by mapping each
convex cell forward with its affine branch and clipping the image against
the cones. The domain is carried as a companion polygon through the clip,
which is exact because every branch is affine.

Cells are fixed-parameter objects: the itinerary sets are those of the given
(P, lam), not unions over a parameter neighbourhood.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from core.dynamics.billiard_map import (
    AffineMap, MapParams, OrbitStatus, TrapRadii, branch_map, h_point, orbit, trap_radii,
)
from core.errors import DepthTooLarge, ParameterOutOfRange
from core.geometry.clipping import clip_by_values, clip_segment, disc_polygon, point_in_convex, polygon_area
from core.geometry.polygon import cross, support_lines

logger = logging.getLogger(__name__)

DEFAULT_DISC_SIDES = 64
DEFAULT_MAX_CELLS = 10_000_000
DEFAULT_SLIVER_FACTOR = 1e-14

Itinerary = Tuple[int, ...]


@dataclass(frozen=True)
class ContinuityCell:
    """A convex domain on which T^n is the single affine map `affine`.

    `region` is the domain in the plane; `image` is T^n(region).
    """
    itinerary: Itinerary
    region: Tuple[complex, ...]
    image: Tuple[complex, ...]
    affine: AffineMap

    @property
    def depth(self) -> int:
        return len(self.itinerary)

    @property
    def h_point(self) -> complex:
        return self.affine.shift

    @property
    def area(self) -> float:
        return polygon_area(self.region)

    def contains(self, z: complex, tol: float = 0.0) -> bool:
        return point_in_convex(z, self.region, tol)


@dataclass
class SubdivisionLevel:
    """All cells of one depth plus the slivers dropped while building it."""
    depth: int
    cells: List[ContinuityCell]
    slivers: int = 0
    sliver_area: float = 0.0

    @property
    def count(self) -> int:
        return len(self.cells)

    @property
    def count_with_slivers(self) -> int:
        return len(self.cells) + self.slivers

    @property
    def h_points(self) -> np.ndarray:
        return np.array([c.affine.shift for c in self.cells], dtype=complex)


@dataclass
class ItineraryCounts:
    counts: List[int] = field(default_factory=list)
    counts_with_slivers: List[int] = field(default_factory=list)

    @property
    def growth_rates(self) -> List[float]:
        return growth_rates(self.counts)

    def to_dict(self) -> Dict:
        return {
            "depths": list(range(1, len(self.counts) + 1)),
            "counts": self.counts,
            "counts_with_slivers": self.counts_with_slivers,
            "growth_rates": self.growth_rates,
        }


@dataclass(frozen=True)
class LineSegment:
    """Segment of the singular set; `order` is the number of steps to reach S_P."""
    start: complex
    end: complex
    order: int = 0

    def point_at(self, t: float) -> complex:
        return self.start + t * (self.end - self.start)


@dataclass(frozen=True)
class SingularConnectionReport:
    itinerary: Itinerary
    side: int
    residual: float


def trap_disc(trap: TrapRadii, sides: int = DEFAULT_DISC_SIDES) -> List[complex]:
    """The inscribed polygon standing in for the trapping disc K."""
    return disc_polygon(trap.r, sides)


def _clip_into_cones(
    params: MapParams,
    region: Sequence[complex],
    image: Sequence[complex],
) -> Iterator[Tuple[int, List[complex], List[complex]]]:
    """Split a cell by the cone containing each part of its image.

    Yields (k, region part, image part) for each cone the image meets.
    """
    polygon = params.polygon
    for k, (plane_s, plane_t) in enumerate(polygon.cone_halfplanes, start=1):
        values_s = [plane_s.value(w) for w in image]
        if max(values_s) <= 0.0:
            continue
        values_t = [plane_t.value(w) for w in image]
        if max(values_t) <= 0.0:
            continue
        if min(values_s) >= 0.0 and min(values_t) >= 0.0:
            yield k, list(region), list(image)
            return
        part_image, part_region = clip_by_values(image, values_s, region)
        if len(part_image) < 3:
            continue
        part_image, part_region = clip_by_values(part_image, [plane_t.value(w) for w in part_image], part_region)
        if len(part_image) < 3:
            continue
        yield k, part_region, part_image


def _refine(
    params: MapParams,
    cells: Sequence[ContinuityCell],
    min_area: float,
) -> Tuple[List[ContinuityCell], int, float]:
    children: List[ContinuityCell] = []
    slivers, sliver_area = 0, 0.0
    for cell in cells:
        for k, region, image in _clip_into_cones(params, cell.region, cell.image):
            area = polygon_area(region)
            if area <= 0.0:
                continue
            if area < min_area:
                slivers += 1
                sliver_area += area
                continue
            branch = branch_map(params, k)
            children.append(ContinuityCell(
                cell.itinerary + (k,),
                tuple(region),
                tuple(branch(w) for w in image),
                cell.affine.then(branch),
            ))
    return children, slivers, sliver_area


def _initial_cells(params: MapParams, trap: TrapRadii, disc_sides: int) -> List[ContinuityCell]:
    disc = trap_disc(trap, disc_sides)
    root = ContinuityCell((), tuple(disc), tuple(disc), AffineMap.identity())
    return [root]


def iter_subdivision(
    params: MapParams,
    depth: int,
    trap: Optional[TrapRadii] = None,
    *,
    disc_sides: int = DEFAULT_DISC_SIDES,
    max_cells: int = DEFAULT_MAX_CELLS,
    sliver_factor: float = DEFAULT_SLIVER_FACTOR,
    workers: int = 1,
) -> Iterator[SubdivisionLevel]:
    """Yield the subdivision level by level, depths 1..depth.

    Raises:
        ParameterOutOfRange: depth < 1
        DepthTooLarge: a level holds more than max_cells cells
    """
    if depth < 1:
        raise ParameterOutOfRange(f"Subdivision depth must be >= 1, got {depth}")
    trap = trap or trap_radii(params)
    min_area = sliver_factor * trap.r ** 2
    cells = _initial_cells(params, trap, disc_sides)

    for n in range(1, depth + 1):
        if workers > 1 and len(cells) > 4 * workers:
            chunk = math.ceil(len(cells) / workers)
            chunks = [cells[i:i + chunk] for i in range(0, len(cells), chunk)]
            with ThreadPoolExecutor(max_workers=workers) as pool:
                parts = list(pool.map(lambda part: _refine(params, part, min_area), chunks))
        else:
            parts = [_refine(params, cells, min_area)]

        cells = [c for part in parts for c in part[0]]
        slivers = sum(part[1] for part in parts)
        sliver_area = sum(part[2] for part in parts)
        if len(cells) > max_cells:
            raise DepthTooLarge(f"{len(cells)} cells at depth {n} exceed the cap of {max_cells}")
        cells.sort(key=lambda c: c.itinerary)
        if slivers:
            logger.warning(f"Depth {n}: dropped {slivers} sliver cells (total area {sliver_area:.3e})")
        logger.debug(f"Depth {n}: {len(cells)} cells")
        yield SubdivisionLevel(n, cells, slivers, sliver_area)


def subdivide(params: MapParams, depth: int, trap: Optional[TrapRadii] = None, **kwargs) -> SubdivisionLevel:
    """The depth-n continuity cells."""
    level = None
    for level in iter_subdivision(params, depth, trap, **kwargs):
        pass
    return level


def growth_rates(counts: Sequence[int]) -> List[float]:
    """(1/n) log #I_n for n = 1..N."""
    return [math.log(c) / n if c > 0 else float("-inf") for n, c in enumerate(counts, start=1)]


def itinerary_counts(params: MapParams, depth: int, trap: Optional[TrapRadii] = None, **kwargs) -> ItineraryCounts:
    result = ItineraryCounts()
    for level in iter_subdivision(params, depth, trap, **kwargs):
        result.counts.append(level.count)
        result.counts_with_slivers.append(level.count_with_slivers)
    return result


def singular_set_order_n(
    params: MapParams,
    n: int,
    trap: Optional[TrapRadii] = None,
    **kwargs,
) -> List[LineSegment]:
    """Segments of S^n inside K.

    Order 0 segments are the rays clipped to K; a segment of order m is the
    pullback of a ray piece through a depth-m cell.
    """
    if n < 1:
        raise ParameterOutOfRange(f"Order must be >= 1, got {n}")
    trap = trap or trap_radii(params)
    disc = trap_disc(trap, kwargs.get("disc_sides", DEFAULT_DISC_SIDES))

    ray_segments: List[LineSegment] = []
    for ray in params.polygon.rays:
        far = ray.point_at(2.0 * trap.r)
        span = clip_segment(ray.origin, far, disc)
        if span is None or span[1] <= span[0]:
            continue
        ray_segments.append(LineSegment(ray.origin + span[0] * (far - ray.origin),
                                        ray.origin + span[1] * (far - ray.origin)))

    segments = list(ray_segments)
    if n == 1:
        return segments

    for level in iter_subdivision(params, n - 1, trap, **kwargs):
        for cell in level.cells:
            inverse = cell.affine.inverse()
            for seg in ray_segments:
                span = clip_segment(seg.start, seg.end, cell.image)
                if span is None or span[1] <= span[0]:
                    continue
                segments.append(LineSegment(inverse(seg.point_at(span[0])),
                                            inverse(seg.point_at(span[1])),
                                            level.depth))
    return segments


def connection_residual(params: MapParams, itinerary: Sequence[int], side: int) -> float:
    """|det(x_m - x_1, v_{k+1} - v_k)| for x_1 on line L_k and x_m = T^m x_1.

    With m = len(itinerary) the difference is H - (1 - (-lam)^m) x_1, and the
    x_1 term only enters through det(x_1, e) = det(v_k, e).
    """
    polygon = params.polygon
    v_k, v_next = polygon.vertex(side), polygon.vertex(side + 1)
    m = len(itinerary)
    diff = h_point(params, itinerary) - (1 - (-params.lam) ** m) * v_k
    return abs(cross(diff, v_next - v_k))


def _connection_seeds(params: MapParams, trap: TrapRadii, side: int, samples: int) -> List[complex]:
    """Points of L_side inside K beyond v_{side+1}, and points flanking ray `side`."""
    polygon = params.polygon
    line = support_lines(polygon)[side - 1]
    offset = 1e-7 * polygon.scale
    seeds = []
    ray = polygon.rays[side - 1]
    for i in range(1, samples + 1):
        t = trap.r * i / (samples + 1)
        seeds.append(polygon.vertex(side + 1) + t * line.tangent)
        on_ray = ray.point_at(t)
        seeds.append(on_ray + offset * line.normal)
        seeds.append(on_ray - offset * line.normal)
    return [z for z in seeds if abs(z) <= trap.r and not polygon.contains(z)]


def detect_singular_connections(
    params: MapParams,
    n_max: int,
    tol: float = 1e-9,
    trap: Optional[TrapRadii] = None,
    samples_per_ray: int = 64,
) -> List[SingularConnectionReport]:
    """Scan itineraries of points on the side lines for singular connections."""
    if n_max < 2:
        raise ParameterOutOfRange(f"n_max must be >= 2, got {n_max}")
    trap = trap or trap_radii(params)
    d = params.polygon.d
    seen = set()
    reports: List[SingularConnectionReport] = []
    for seed_side in range(1, d + 1):
        for seed in _connection_seeds(params, trap, seed_side, samples_per_ray):
            result = orbit(params, seed, n_max - 1)
            if result.status is OrbitStatus.ENTERED_POLYGON:
                continue
            for m in range(1, len(result.itinerary) + 1):
                itinerary = result.itinerary[:m]
                if itinerary in seen:
                    continue
                seen.add(itinerary)
                for side in range(1, d + 1):
                    # branches at v_side and v_{side+1} keep L_side in place
                    if all((k - side) % d in (0, 1) for k in itinerary):
                        continue
                    residual = connection_residual(params, itinerary, side)
                    if residual < tol:
                        reports.append(SingularConnectionReport(itinerary, side, residual))
    reports.sort(key=lambda r: (r.side, r.itinerary))
    logger.debug(f"Checked {len(seen)} itineraries against every side, {len(reports)} connections")
    return reports


def three_symbol_depth(params: MapParams, cap: int = 50, trap: Optional[TrapRadii] = None, **kwargs) -> Optional[int]:
    """Smallest N such that every depth-N itinerary uses at least 3 symbols."""
    for level in iter_subdivision(params, cap, trap, **kwargs):
        if level.cells and all(len(set(c.itinerary)) >= 3 for c in level.cells):
            return level.depth
    logger.info(f"No depth up to {cap} has only itineraries with three symbols")
    return None

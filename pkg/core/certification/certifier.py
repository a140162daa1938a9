#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Outer Billiards - Asymptotic Periodicity Certificates

The limit set lies in the union of discs of radius 2*r*lam^n around the
depth-n H-points. When all of them keep clear of the singular set the map
sends every continuity cell strictly inside another one, and the periodic
attractors are the cycles of the resulting cell graph.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum, IntEnum
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from core.dynamics.billiard_map import MapParams, itinerary_map, step, step_many, trap_radii
from core.errors import EmptyAttractorList, NotStrictlyInside, ParameterOutOfRange
from core.geometry.polygon import PointLike, distances_to_singular_set, to_complex
from core.symbolic.subdivision import ContinuityCell, iter_subdivision, subdivide

logger = logging.getLogger(__name__)

DEFAULT_SAFETY = 1.25
DEFAULT_MAX_DEPTH = 120
DEFAULT_INCLUSION_TOL = 1e-12
_CHUNK = 4096


class CertificationStatus(Enum):
    CERTIFIED = "Certified"
    INCONCLUSIVE = "Inconclusive"


class BasinLabel(IntEnum):
    """Non-attractor basin labels."""
    SINGULAR = -1
    UNRESOLVED = -2
    INSIDE = -3


def canonical_rotation(itinerary: Sequence[int]) -> Tuple[int, ...]:
    """Lexicographically smallest cyclic rotation."""
    items = tuple(itinerary)
    return min(items[i:] + items[:i] for i in range(len(items)))


def minimal_period(itinerary: Sequence[int]) -> int:
    n = len(itinerary)
    for p in range(1, n + 1):
        if n % p == 0 and all(itinerary[i] == itinerary[i % p] for i in range(n)):
            return p
    return n


@dataclass(frozen=True)
class PeriodicAttractor:
    """Periodic orbit z* with periodic itinerary of length p."""
    itinerary: Tuple[int, ...]
    point: complex

    @property
    def period(self) -> int:
        return len(self.itinerary)

    def orbit_points(self, params: MapParams) -> List[complex]:
        points = [self.point]
        z = self.point
        for k in self.itinerary[:-1]:
            z = -params.lam * z + (1 + params.lam) * params.polygon.vertex(k)
            points.append(z)
        return points

    def to_dict(self) -> Dict:
        return {
            "period": self.period,
            "itinerary": list(self.itinerary),
            "point": [self.point.real, self.point.imag],
        }


@dataclass
class CertificationResult:
    status: CertificationStatus
    depth: int
    margin: float
    attractors: List[PeriodicAttractor] = field(default_factory=list)
    diagnostics: str = ""
    margin_history: List[Tuple[int, float, float]] = field(default_factory=list)

    @property
    def certified(self) -> bool:
        return self.status is CertificationStatus.CERTIFIED

    def to_dict(self) -> Dict:
        return {
            "status": self.status.value,
            "depth": self.depth,
            "margin": self.margin,
            "attractors": [a.to_dict() for a in self.attractors],
            "diagnostics": self.diagnostics,
            "margin_history": [
                {"depth": n, "min_distance": m, "cover_radius": radius}
                for n, m, radius in self.margin_history
            ],
        }


def attractor_from_itinerary(params: MapParams, itinerary: Sequence[int]) -> PeriodicAttractor:
    """Attractor with the canonical rotation of `itinerary` and z* = H/(1-(-lam)^p)."""
    key = canonical_rotation(itinerary[:minimal_period(itinerary)])
    return PeriodicAttractor(key, itinerary_map(params, key).fixed_point())


def verify_attractor(params: MapParams, attractor: PeriodicAttractor, tol: Optional[float] = None) -> bool:
    """Check cone membership along the orbit and closure after one period."""
    tol = 1e-9 * trap_radii(params).r if tol is None else tol
    z = attractor.point
    for k in attractor.itinerary:
        result = step(params, z)
        if result.is_singular or result.cone != k:
            return False
        z = result.point
    return abs(z - attractor.point) <= tol


def _cell_itineraries(params: MapParams, points: np.ndarray, depth: int, tol: float) -> Tuple[np.ndarray, np.ndarray]:
    """Depth-n itineraries of many points and whether each stays clear of S^n.

    A point counts as clear when dist(T^j w, S) >= tol * lam^j at every step.
    """
    z = points.copy()
    symbols = np.zeros((len(z), depth), dtype=np.int64)
    clear = np.ones(len(z), dtype=bool)
    for j in range(depth):
        clear &= distances_to_singular_set(params.polygon, z) >= tol * params.lam ** j
        z, cones = step_many(params, z)
        clear &= cones > 0
        symbols[:, j] = cones
    return symbols, clear


def _successors(
    params: MapParams,
    cells: Sequence[ContinuityCell],
    tol: float,
    strict: bool,
) -> List[int]:
    """Index of the cell containing each cell's image, or -1."""
    depth = cells[0].depth
    index = {cell.itinerary: i for i, cell in enumerate(cells)}

    samples, owner = [], []
    for i, cell in enumerate(cells):
        image = np.asarray(cell.image, dtype=complex)
        samples.extend(image)
        samples.append(image.mean())
        owner.extend([i] * (len(image) + 1))
    symbols, clear = _cell_itineraries(params, np.asarray(samples, dtype=complex), depth, tol)
    owner = np.asarray(owner)

    successors = [-1] * len(cells)
    straddling = 0
    # owner is sorted, so each cell's samples are a contiguous block
    bounds = np.searchsorted(owner, np.arange(len(cells) + 1))
    for i in range(len(cells)):
        lo, hi = bounds[i], bounds[i + 1]
        block = symbols[lo:hi]
        targets = {tuple(row) for row, ok in zip(block.tolist(), clear[lo:hi]) if ok}
        all_clear = bool(clear[lo:hi].all())
        if all_clear and len(targets) == 1:
            successors[i] = index.get(targets.pop(), -1)
            continue
        straddling += 1
        if strict:
            raise NotStrictlyInside(
                f"Image of cell {cells[i].itinerary} is not inside a single depth-{depth} cell")
        # centroid sample decides when the vertices disagree
        centroid = tuple(block[-1].tolist())
        if clear[hi - 1]:
            successors[i] = index.get(centroid, -1)
    if straddling:
        logger.warning(f"{straddling} cell images straddle cell boundaries")
    return successors


def _cycles(successors: Sequence[int]) -> List[List[int]]:
    """Cycles of a functional graph; -1 is a sink."""
    state = [0] * len(successors)  # 0 new, 1 on current path, 2 done
    cycles = []
    for start in range(len(successors)):
        path = []
        node = start
        while node != -1 and state[node] == 0:
            state[node] = 1
            path.append(node)
            node = successors[node]
        if node != -1 and state[node] == 1:
            cycles.append(path[path.index(node):])
        for visited in path:
            state[visited] = 2
    return cycles


def attractors_from_cells(
    params: MapParams,
    cells: Sequence[ContinuityCell],
    tol: float = DEFAULT_INCLUSION_TOL,
    strict: bool = True,
) -> List[PeriodicAttractor]:
    """Periodic attractors from the cell graph of one subdivision level."""
    if not cells:
        return []
    successors = _successors(params, cells, tol, strict)
    found: Dict[Tuple[int, ...], PeriodicAttractor] = {}
    for cycle in _cycles(successors):
        itinerary = tuple(k for node in cycle for k in cells[node].itinerary)
        attractor = attractor_from_itinerary(params, itinerary)
        if attractor.itinerary in found:
            continue
        if not verify_attractor(params, attractor):
            logger.warning(f"Discarding cycle {attractor.itinerary}: orbit check failed")
            continue
        found[attractor.itinerary] = attractor
    return [found[key] for key in sorted(found)]


def enumerate_attractors(
    params: MapParams,
    depth: int,
    tol: float = DEFAULT_INCLUSION_TOL,
    strict: bool = True,
    **kwargs,
) -> List[PeriodicAttractor]:
    """Build the depth-n cell graph and return its verified periodic orbits.

    Raises:
        NotStrictlyInside: strict is set and some cell image straddles cells
    """
    level = subdivide(params, depth, **kwargs)
    return attractors_from_cells(params, level.cells, tol, strict)


def certify(
    params: MapParams,
    max_depth: int = DEFAULT_MAX_DEPTH,
    safety: float = DEFAULT_SAFETY,
    tol: float = DEFAULT_INCLUSION_TOL,
    **kwargs,
) -> CertificationResult:
    """Search for a depth where the H-point discs miss the singular set.

    Once the covering test passes, deeper levels are used only when the cell
    graph at the certified depth is not yet strictly nested.
    """
    if safety < 1.0:
        raise ParameterOutOfRange(f"safety must be >= 1, got {safety}")
    radii = trap_radii(params)
    history: List[Tuple[int, float, float]] = []
    certified_at: Optional[Tuple[int, float]] = None
    last_cells: List[ContinuityCell] = []

    for level in iter_subdivision(params, max_depth, radii, **kwargs):
        n = level.depth
        last_cells = level.cells
        if certified_at is None:
            hs = level.h_points
            m = float(distances_to_singular_set(params.polygon, hs).min()) if len(hs) else float("inf")
            radius = 2 * radii.r * params.lam ** n
            history.append((n, m, radius))
            logger.debug(f"Depth {n}: m(n)={m:.6e}, cover radius {radius:.6e}")
            if m > safety * radius:
                certified_at = (n, m - radius)
                logger.info(f"Covering test passed at depth {n} with margin {m - radius:.6e}")
            else:
                continue
        try:
            attractors = attractors_from_cells(params, level.cells, tol, strict=True)
        except NotStrictlyInside as e:
            logger.debug(f"Depth {n}: {e}")
            continue
        return CertificationResult(
            CertificationStatus.CERTIFIED, certified_at[0], certified_at[1], attractors,
            f"covering test passed at depth {certified_at[0]}; cell graph strictly nested at depth {n}",
            history,
        )

    if certified_at is not None:
        attractors = attractors_from_cells(params, last_cells, tol, strict=False)
        logger.warning("Cell graph never became strictly nested; attractors taken from the last level")
        return CertificationResult(
            CertificationStatus.CERTIFIED, certified_at[0], certified_at[1], attractors,
            f"covering test passed at depth {certified_at[0]}; attractors from non-strict cell graph at depth {max_depth}",
            history,
        )

    n, m, radius = history[-1]
    return CertificationResult(
        CertificationStatus.INCONCLUSIVE, n, m - radius, [],
        f"H-points within {safety} x cover radius of the singular set up to depth {n}",
        history,
    )


def basin_assign(
    params: MapParams,
    attractors: Sequence[PeriodicAttractor],
    z0: PointLike,
    max_iter: int = 10_000,
    tol: float = 1e-9,
) -> int:
    """Attractor index reached from z0, or a BasinLabel."""
    labels = assign_many(params, attractors, np.array([to_complex(z0)]), max_iter, tol)
    return int(labels[0])


def _attractor_points(params: MapParams, attractors: Sequence[PeriodicAttractor]) -> Tuple[np.ndarray, np.ndarray]:
    points, owner = [], []
    for i, attractor in enumerate(attractors):
        orbit_points = attractor.orbit_points(params)
        points.extend(orbit_points)
        owner.extend([i] * len(orbit_points))
    return np.asarray(points, dtype=complex), np.asarray(owner, dtype=np.int64)


def _assign_chunk(params, targets, owner, zs, max_iter, tol) -> np.ndarray:
    labels = np.full(len(zs), int(BasinLabel.UNRESOLVED), dtype=np.int64)
    inside = params.polygon.contains_many(zs, params.singular_tol)
    labels[inside] = int(BasinLabel.INSIDE)
    active = np.flatnonzero(~inside)
    z = zs[active]
    for it in range(max_iter + 1):
        if active.size == 0:
            break
        gaps = np.abs(z[:, None] - targets[None, :])
        nearest = gaps.argmin(axis=1)
        hit = gaps[np.arange(len(z)), nearest] < tol
        labels[active[hit]] = owner[nearest[hit]]
        active, z = active[~hit], z[~hit]
        if it == max_iter or active.size == 0:
            break
        z, cones = step_many(params, z)
        dead = cones <= 0
        labels[active[dead]] = int(BasinLabel.SINGULAR)
        active, z = active[~dead], z[~dead]
    return labels


def assign_many(
    params: MapParams,
    attractors: Sequence[PeriodicAttractor],
    zs: np.ndarray,
    max_iter: int = 10_000,
    tol: float = 1e-9,
) -> np.ndarray:
    """Vectorized basin_assign over an array of complex starts.

    Raises:
        EmptyAttractorList: no attractors given
    """
    if not attractors:
        raise EmptyAttractorList("Basin assignment needs at least one attractor")
    zs = np.asarray(zs, dtype=complex).ravel()
    targets, owner = _attractor_points(params, attractors)
    labels = np.empty(len(zs), dtype=np.int64)
    for lo in range(0, len(zs), _CHUNK):
        labels[lo:lo + _CHUNK] = _assign_chunk(params, targets, owner, zs[lo:lo + _CHUNK], max_iter, tol)
    return labels


@dataclass(frozen=True)
class ClusteredOrbit:
    """Periodic orbit found by forward iteration of random starts."""
    point: complex
    period: int
    hits: int
    points: Tuple[complex, ...] = ()


def _period_of(params: MapParams, z: complex, max_period: int, cluster_tol: float) -> Optional[List[complex]]:
    points = [z]
    current = z
    for _ in range(max_period):
        result = step(params, current)
        if result.is_singular:
            return None
        current = result.point
        if abs(current - z) < cluster_tol:
            return points
        points.append(current)
    return None


def monte_carlo_attractors(
    params: MapParams,
    n_starts: int = 10_000,
    n_iter: int = 10_000,
    cluster_tol: float = 1e-6,
    seed: int = 0,
    max_period: int = 1000,
) -> List[ClusteredOrbit]:
    """Count periodic attractors by iterating random starts in the trapping disc.

    Independent of the cell machinery: orbits are clustered by proximity of
    their end points to already known periodic orbits.
    """
    radius = trap_radii(params).r
    rng = np.random.default_rng(seed)
    angles = rng.uniform(0.0, 2 * np.pi, n_starts)
    radii = radius * np.sqrt(rng.uniform(0.0, 1.0, n_starts))
    z = radii * np.exp(1j * angles)
    z = z[~params.polygon.contains_many(z, params.singular_tol)]

    for _ in range(n_iter):
        z, cones = step_many(params, z)
        z = z[cones > 0]

    clusters: List[List] = []  # [orbit points array, hits]
    for end in z:
        for cluster in clusters:
            if np.abs(cluster[0] - end).min() < cluster_tol:
                cluster[1] += 1
                break
        else:
            points = _period_of(params, complex(end), max_period, cluster_tol)
            if points is None:
                logger.debug(f"Start ending at {end} did not close up within {max_period} steps")
                continue
            clusters.append([np.asarray(points), 1])

    orbits = []
    for points, hits in clusters:
        anchor = min(points, key=lambda w: (round(w.real, 9), round(w.imag, 9)))
        orbits.append(ClusteredOrbit(complex(anchor), len(points), hits, tuple(complex(w) for w in points)))
    orbits.sort(key=lambda o: (o.period, o.point.real, o.point.imag))
    return orbits

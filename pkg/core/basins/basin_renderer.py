#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Outer Billiards - Basin Renderer

Per-pixel basin labels over a rectangle of the plane, rendered in row
chunks. Pixel centers are sampled and the top row is the largest y.
"""

import colorsys
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Optional, Sequence, Tuple, Union

import numpy as np
from tqdm import tqdm

from core.certification.certifier import BasinLabel, PeriodicAttractor, assign_many
from core.dynamics.billiard_map import MapParams, trap_radii
from core.errors import EmptyAttractorList, IncompletePalette, InputFileError
from core.export.export_system import DataType, ExportConfig, ExportData, ExportFormat, get_export_system

logger = logging.getLogger(__name__)

BBox = Tuple[float, float, float, float]
Palette = Dict[int, Tuple[int, int, int]]

SPECIAL_COLORS: Palette = {
    int(BasinLabel.SINGULAR): (255, 255, 255),
    int(BasinLabel.UNRESOLVED): (128, 128, 128),
    int(BasinLabel.INSIDE): (0, 0, 0),
}

_GOLDEN = 0.618033988749895
_ROWS_PER_TASK = 16


@dataclass
class BasinRaster:
    """Label grid of shape (height, width); row 0 is the top of the bbox."""
    width: int
    height: int
    bbox: BBox
    labels: np.ndarray

    @property
    def attractor_labels(self) -> Sequence[int]:
        return sorted(int(v) for v in np.unique(self.labels) if v >= 0)

    def pixel_center(self, row: int, col: int) -> complex:
        x0, y0, x1, y1 = self.bbox
        return complex(x0 + (col + 0.5) * (x1 - x0) / self.width,
                       y1 - (row + 0.5) * (y1 - y0) / self.height)


def default_bbox(params: MapParams) -> BBox:
    """Square circumscribing the trapping disc."""
    r = trap_radii(params).r
    return (-r, -r, r, r)


def _row_centers(bbox: BBox, width: int, height: int, rows: range) -> np.ndarray:
    x0, y0, x1, y1 = bbox
    xs = x0 + (np.arange(width) + 0.5) * (x1 - x0) / width
    ys = y1 - (np.asarray(rows) + 0.5) * (y1 - y0) / height
    return (xs[None, :] + 1j * ys[:, None]).ravel()


def render_basins(
    params: MapParams,
    attractors: Sequence[PeriodicAttractor],
    bbox: Optional[BBox] = None,
    width: int = 512,
    height: int = 512,
    max_iter: int = 10_000,
    tol: float = 1e-9,
    workers: int = 1,
    progress: bool = False,
) -> BasinRaster:
    """Label every pixel center with the basin it falls into.

    Raises:
        EmptyAttractorList: no attractors given
    """
    if not attractors:
        raise EmptyAttractorList("Cannot render basins without attractors")
    bbox = bbox or default_bbox(params)
    tasks = [range(lo, min(lo + _ROWS_PER_TASK, height)) for lo in range(0, height, _ROWS_PER_TASK)]

    def render_rows(rows: range) -> np.ndarray:
        centers = _row_centers(bbox, width, height, rows)
        return assign_many(params, attractors, centers, max_iter, tol).reshape(len(rows), width)

    logger.info(f"Rendering {width}x{height} basins over {bbox} with {workers} worker(s)")
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        blocks = list(tqdm(pool.map(render_rows, tasks), total=len(tasks), disable=not progress,
                           desc="basins", unit="rows"))
    labels = np.vstack(blocks).astype(np.int32)
    return BasinRaster(width, height, tuple(bbox), labels)


def default_palette(n_attractors: int) -> Palette:
    palette = dict(SPECIAL_COLORS)
    for i in range(n_attractors):
        r, g, b = colorsys.hsv_to_rgb((i * _GOLDEN) % 1.0, 0.65, 0.95)
        palette[i] = (round(r * 255), round(g * 255), round(b * 255))
    return palette


def load_palette(path: Union[str, Path]) -> Palette:
    """Read "label r g b" lines.

    Raises:
        InputFileError: malformed line or channel outside 0..255
    """
    palette: Palette = {}
    with open(path, "r", encoding="utf-8") as f:
        for line_no, raw in enumerate(f, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                label, r, g, b = (int(part) for part in line.split())
            except ValueError as e:
                raise InputFileError(f"{path}:{line_no}: expected 'label r g b', got {line!r}") from e
            if not all(0 <= c <= 255 for c in (r, g, b)):
                raise InputFileError(f"{path}:{line_no}: colour channels must lie in 0..255")
            palette[label] = (r, g, b)
    return palette


def colorize(raster: BasinRaster, palette: Palette) -> np.ndarray:
    """RGB array of shape (height, width, 3).

    Raises:
        IncompletePalette: some label has no colour
    """
    missing = sorted(int(v) for v in np.unique(raster.labels) if int(v) not in palette)
    if missing:
        raise IncompletePalette(f"Palette has no colour for labels {missing}")
    keys = np.array(sorted(palette), dtype=np.int64)
    colors = np.array([palette[k] for k in keys], dtype=np.uint8)
    return colors[np.searchsorted(keys, raster.labels)]


def write_ppm(raster: BasinRaster, palette: Palette, path: Union[str, Path]):
    """Write the raster as binary PPM, or PNG when the path ends in .png."""
    path = Path(path)
    fmt = ExportFormat.PNG if path.suffix.lower() == ".png" else ExportFormat.PPM
    data = ExportData(title=path.stem, content=colorize(raster, palette), data_type=DataType.RASTER)
    result = get_export_system().export_data(data, ExportConfig(format=fmt, output_path=path))
    result.raise_for_status()
    return result

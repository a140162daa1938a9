"""Basin-of-attraction rasters and their image output."""

from .basin_renderer import (
    SPECIAL_COLORS, BasinRaster, IncompletePalette, colorize, default_bbox, default_palette,
    load_palette, render_basins, write_ppm,
)

__all__ = [
    'SPECIAL_COLORS', 'BasinRaster', 'IncompletePalette', 'colorize', 'default_bbox',
    'default_palette', 'load_palette', 'render_basins', 'write_ppm',
]

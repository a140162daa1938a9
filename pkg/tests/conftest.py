"""Shared fixtures for the outer billiard test suite."""

import pytest

from core.dynamics.billiard_map import MapParams
from core.geometry.polygon import format_polygon, validate_polygon
from core.geometry.shapes import parallelogram, regular_polygon, triangle, unit_square


@pytest.fixture
def square():
    return unit_square()


@pytest.fixture
def centered_square():
    """Square with v_{k+2} = -v_k exactly."""
    return validate_polygon([(1, 1), (-1, 1), (-1, -1), (1, -1)])


@pytest.fixture
def tri():
    return triangle()


@pytest.fixture
def para():
    return parallelogram()


@pytest.fixture
def heptagon():
    return regular_polygon(7)


@pytest.fixture
def square_params(square):
    return MapParams(square, 0.5)


@pytest.fixture
def write_polygon(tmp_path):
    """Write a polygon file and return its path."""
    def _write(polygon, name="polygon.txt"):
        path = tmp_path / name
        path.write_text(format_polygon(polygon), encoding="utf-8")
        return path
    return _write

"""Tests for the contracted billiard map and its orbit algebra."""

import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from core.dynamics.billiard_map import (
    AffineMap, MapParams, OrbitStatus, branch_map, h_point, h_point_append, itinerary_map,
    orbit, orbit_bound, orbit_closed_form, step, step_many, trap_radii, two_symbol_fixed_point,
)
from core.errors import EnteredPolygonError, ParameterOutOfRange, SameVertex
from core.geometry.shapes import Similarity, regular_polygon, triangle, unit_square


class TestMapParams:
    @pytest.mark.parametrize("lam", [0.0, 1.0, 1.5, -0.2, float("nan")])
    def test_rejects_lambda_outside_unit_interval(self, square, lam):
        with pytest.raises(ParameterOutOfRange):
            MapParams(square, lam)

    def test_tiny_lambda_is_accepted(self, square):
        result = step(MapParams(square, 1e-9), (0.5, -1))
        assert abs(result.point - 1) < 1e-8

    def test_negative_singular_tolerance(self, square):
        with pytest.raises(ParameterOutOfRange):
            MapParams(square, 0.5, -1e-12)

    def test_singular_tolerance_scales_with_polygon(self):
        params = MapParams(Similarity.from_parts(scale=10.0).apply_polygon(unit_square()), 0.5, 1e-6)
        assert params.singular_tol == pytest.approx(1e-6 * 10 * math.sqrt(2))


class TestStep:
    def test_point_below_square(self, square_params):
        result = step(square_params, (0.5, -1))
        assert result.cone == 2
        assert result.point == pytest.approx(1.25 + 0.5j)

    def test_contracts_toward_vertex(self, heptagon):
        params = MapParams(heptagon, 0.37)
        rng = np.random.default_rng(11)
        for z in 3 * np.exp(2j * math.pi * rng.random(50)):
            result = step(params, z)
            if result.is_singular:
                continue
            v = heptagon.vertex(result.cone)
            assert abs(result.point - v) == pytest.approx(0.37 * abs(z - v))

    def test_same_cone_distances_scale(self, square_params):
        a, b = step(square_params, 0.2 - 1j), step(square_params, 0.7 - 2.5j)
        assert a.cone == b.cone == 2
        assert abs(a.point - b.point) == pytest.approx(0.5 * abs(0.5 - 1.5j))

    def test_inside_raises(self, square_params):
        with pytest.raises(EnteredPolygonError):
            step(square_params, (0.5, 0.5))

    def test_singular_hit(self, square_params):
        result = step(square_params, (-2, 0))
        assert result.is_singular
        assert result.point is None

    def test_wider_tolerance_catches_near_ray_points(self, square):
        near = np.array([-2 + 1e-6j, 0.5 - 1j])
        assert step(MapParams(square, 0.5), near[0]).cone == 1
        wide = MapParams(square, 0.5, 1e-3)
        assert step(wide, near[0]).is_singular
        _, cones = step_many(wide, near)
        assert cones.tolist() == [0, 2]

    def test_step_many_matches_step(self, heptagon):
        params = MapParams(heptagon, 0.6)
        rng = np.random.default_rng(2)
        zs = rng.uniform(-4, 4, 300) + 1j * rng.uniform(-4, 4, 300)
        images, cones = step_many(params, zs)
        for z, w, k in zip(zs, images, cones):
            if k > 0:
                assert step(params, z).point == pytest.approx(w, abs=1e-14)
            else:
                assert w == z


class TestOrbit:
    def test_zero_steps(self, square_params):
        result = orbit(square_params, 3 + 2j, 0)
        assert result.points == [3 + 2j]
        assert result.itinerary == ()
        assert result.status is OrbitStatus.COMPLETED

    def test_rows_mark_last_point(self, square_params):
        rows = orbit(square_params, (0.5, -1), 3).rows()
        assert [row[0] for row in rows] == [0, 1, 2, 3]
        assert rows[0][3] == 2
        assert rows[-1][3] == 0

    def test_stops_at_singular_set(self, square_params):
        result = orbit(square_params, (-2, 0), 5)
        assert result.status is OrbitStatus.SINGULAR_HIT
        assert result.singular_step == 0
        assert result.points == [-2 + 0j]

    def test_central_symmetry(self, centered_square):
        params = MapParams(centered_square, 0.43)
        forward = orbit(params, 3.3 + 0.7j, 12)
        mirrored = orbit(params, -3.3 - 0.7j, 12)
        assert forward.status is mirrored.status is OrbitStatus.COMPLETED
        for z, w in zip(forward.points, mirrored.points):
            assert abs(z + w) < 1e-9
        assert mirrored.itinerary == tuple((k + 1) % 4 + 1 for k in forward.itinerary)

    def test_similarity_equivariance(self):
        g = Similarity.from_parts(rotation=1.1, scale=0.8, shift=(2, -1))
        polygon = triangle()
        params, moved = MapParams(polygon, 0.55), MapParams(g.apply_polygon(polygon), 0.55)
        z0 = 2.7 + 1.9j
        a, b = orbit(params, z0, 15), orbit(moved, g(z0), 15)
        assert a.itinerary == b.itinerary
        for z, w in zip(a.points, b.points):
            assert abs(g(z) - w) < 1e-9


class TestClosedForm:
    @settings(max_examples=200, deadline=None)
    @given(
        st.integers(3, 9),
        st.floats(0.01, 0.99),
        st.floats(0.0, 2 * math.pi),
        st.floats(1.2, 30.0),
        st.integers(1, 50),
    )
    def test_matches_iteration(self, d, lam, angle, radius, n):
        params = MapParams(regular_polygon(d, rotation=0.3), lam)
        z0 = radius * complex(math.cos(angle), math.sin(angle))
        result = orbit(params, z0, n)
        assume(result.status is OrbitStatus.COMPLETED)
        r = trap_radii(params).r
        scale = max(r, abs(z0))
        assert abs(orbit_closed_form(params, z0, result.itinerary) - result.final_point) < 1e-9 * scale

    @pytest.mark.slow
    def test_matches_iteration_random_corpus(self):
        rng = np.random.default_rng(20)
        shapes = [unit_square(), triangle(), regular_polygon(5), regular_polygon(7)]
        checked = 0
        for _ in range(10_000):
            params = MapParams(shapes[rng.integers(len(shapes))], float(rng.uniform(0.01, 0.99)))
            r = trap_radii(params).r
            z0 = complex(*rng.uniform(-r, r, 2))
            result = orbit(params, z0, int(rng.integers(1, 51)))
            if result.status is not OrbitStatus.COMPLETED:
                continue
            checked += 1
            assert abs(orbit_closed_form(params, z0, result.itinerary) - result.final_point) < 1e-9 * r
        assert checked > 9_000

    def test_h_point_of_one_symbol(self, square_params):
        assert h_point(square_params, (3,)) == pytest.approx(1.5 * (1 + 1j))

    def test_h_point_append(self, square_params):
        itinerary = (2, 4, 1, 3, 4)
        h = h_point(square_params, itinerary[:-1])
        assert h_point_append(square_params, h, 4) == pytest.approx(h_point(square_params, itinerary))

    def test_h_points_are_bounded(self, heptagon):
        params = MapParams(heptagon, 0.8)
        bound = trap_radii(params).h_bound
        rng = np.random.default_rng(9)
        for _ in range(100):
            itinerary = rng.integers(1, 8, size=30)
            assert abs(h_point(params, itinerary)) <= bound * (1 + 1e-12)

    def test_itinerary_map_composes_branches(self, square_params):
        itinerary = (1, 2, 4, 3)
        composed = AffineMap.identity()
        for k in itinerary:
            composed = composed.then(branch_map(square_params, k))
        expected = itinerary_map(square_params, itinerary)
        assert composed.scale == pytest.approx(expected.scale)
        assert composed.shift == pytest.approx(expected.shift)


class TestAffineMap:
    def test_inverse(self):
        f = AffineMap(-0.3, 2 - 1j)
        assert f.then(f.inverse())(1.7 + 0.2j) == pytest.approx(1.7 + 0.2j)

    def test_fixed_point(self):
        f = AffineMap(0.25, 3 + 3j)
        z = f.fixed_point()
        assert f(z) == pytest.approx(z)


class TestTrap:
    def test_square_radii(self, square_params):
        radii = trap_radii(square_params)
        assert radii.a == 0.5
        assert radii.b == pytest.approx(math.sqrt(2))
        assert radii.r == pytest.approx(6 * math.sqrt(2))

    def test_epsilon_enlarges(self, square_params):
        assert trap_radii(square_params, 0.1).r > trap_radii(square_params).r

    @pytest.mark.parametrize("epsilon", [-0.1, 0.5])
    def test_bad_epsilon(self, square_params, epsilon):
        with pytest.raises(ParameterOutOfRange):
            trap_radii(square_params, epsilon)

    @pytest.mark.parametrize("lam", [0.05, 0.5, 0.9])
    @pytest.mark.parametrize("shape", [unit_square, triangle, lambda: regular_polygon(7)])
    def test_disc_is_forward_invariant(self, shape, lam):
        params = MapParams(shape(), lam)
        r = trap_radii(params).r
        rng = np.random.default_rng(4)
        radius = r * np.sqrt(rng.random(10_000))
        zs = radius * np.exp(2j * math.pi * rng.random(10_000))
        images, cones = step_many(params, zs)
        assert np.all(np.abs(images[cones > 0]) <= r * (1 + 1e-12))

    def test_orbit_bound(self, heptagon):
        params = MapParams(heptagon, 0.7)
        z0 = 40 + 3j
        result = orbit(params, z0, 20)
        for n, z in enumerate(result.points):
            assert abs(z) <= orbit_bound(params, z0, n) * (1 + 1e-12)


class TestTwoSymbol:
    def test_square(self, square_params):
        assert two_symbol_fixed_point(square_params, 1, 2) == pytest.approx(2 + 0j)

    def test_is_fixed_by_the_pair(self, heptagon):
        params = MapParams(heptagon, 0.3)
        x = two_symbol_fixed_point(params, 2, 5)
        composed = branch_map(params, 2).then(branch_map(params, 5))
        assert composed(x) == pytest.approx(x)

    def test_collinear_with_vertices(self, tri):
        params = MapParams(tri, 0.6)
        x = two_symbol_fixed_point(params, 1, 3)
        vk, vj = tri.vertex(1), tri.vertex(3)
        assert abs(((x - vk) * (vj - vk).conjugate()).imag) < 1e-12

    @pytest.mark.parametrize("j", [1, 5])
    def test_same_vertex(self, square_params, j):
        with pytest.raises(SameVertex):
            two_symbol_fixed_point(square_params, 1, j)

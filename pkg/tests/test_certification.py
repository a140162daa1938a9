"""Tests for certification, attractor enumeration and basin assignment."""

import numpy as np
import pytest
from scipy.optimize import brentq

from core.certification.certifier import (
    DEFAULT_SAFETY, BasinLabel, CertificationStatus, PeriodicAttractor, assign_many, attractor_from_itinerary,
    basin_assign, canonical_rotation, certify, enumerate_attractors, minimal_period,
    monte_carlo_attractors, verify_attractor,
)
from core.dynamics.billiard_map import MapParams, h_point, step, trap_radii
from core.errors import EmptyAttractorList, ParameterOutOfRange
from core.geometry.polygon import (
    cone_index, distance_to_singular_set, distances_to_singular_set, validate_polygon,
)
from core.geometry.shapes import parallelogram, regular_polygon, triangle
from core.symbolic.subdivision import iter_subdivision


@pytest.fixture
def small_lam_square(square):
    return MapParams(square, 0.05)


@pytest.fixture
def certified_square(small_lam_square):
    return certify(small_lam_square, max_depth=20)


class TestItineraryHelpers:
    def test_canonical_rotation(self):
        assert canonical_rotation((3, 1, 2)) == (1, 2, 3)
        assert canonical_rotation((2, 4, 1, 3)) == (1, 3, 2, 4)

    def test_minimal_period(self):
        assert minimal_period((1, 2, 1, 2)) == 2
        assert minimal_period((1, 2, 3)) == 3

    def test_attractor_uses_canonical_rotation(self, small_lam_square):
        a = attractor_from_itinerary(small_lam_square, (3, 1, 3, 1))
        assert a.itinerary == (1, 3)
        assert a.period == 2


class TestCertify:
    def test_square_small_lambda(self, certified_square):
        assert certified_square.status is CertificationStatus.CERTIFIED
        assert certified_square.certified
        assert certified_square.margin > 0
        assert certified_square.attractors

    @pytest.mark.parametrize("polygon", [triangle(), regular_polygon(7)])
    def test_other_shapes_small_lambda(self, polygon):
        result = certify(MapParams(polygon, 0.05), max_depth=20)
        assert result.certified
        assert all(verify_attractor(MapParams(polygon, 0.05), a) for a in result.attractors)

    def test_fixed_point_identity(self, small_lam_square, certified_square):
        r = trap_radii(small_lam_square).r
        for a in certified_square.attractors:
            expected = h_point(small_lam_square, a.itinerary)
            assert abs(a.point * (1 - (-0.05) ** a.period) - expected) < 1e-12 * r

    def test_orbits_do_not_drift(self, small_lam_square, certified_square):
        for a in certified_square.attractors:
            points = a.orbit_points(small_lam_square)
            z = a.point
            for _ in range(200):
                result = step(small_lam_square, z)
                assert not result.is_singular
                z = result.point
            assert abs(z - points[200 % a.period]) < 1e-10

    def test_attractors_are_distinct_orbits(self, small_lam_square, certified_square):
        itineraries = [a.itinerary for a in certified_square.attractors]
        assert len(set(itineraries)) == len(itineraries)
        assert all(canonical_rotation(i) == i for i in itineraries)

    def test_margin_stays_positive_beyond_certified_depth(self, small_lam_square, certified_square):
        radii = trap_radii(small_lam_square)
        n0 = certified_square.depth
        for level in iter_subdivision(small_lam_square, n0 + 3):
            if level.depth < n0:
                continue
            m = distances_to_singular_set(small_lam_square.polygon, level.h_points).min()
            assert m > 2 * radii.r * 0.05 ** level.depth

    def test_history_records_each_depth(self, certified_square):
        depths = [n for n, _, _ in certified_square.margin_history]
        assert depths == list(range(1, certified_square.depth + 1))

    def test_to_dict(self, certified_square):
        data = certified_square.to_dict()
        assert data["status"] == "Certified"
        assert len(data["attractors"]) == len(certified_square.attractors)

    def test_inconclusive_when_too_shallow(self, heptagon):
        result = certify(MapParams(heptagon, 0.9), max_depth=1)
        assert result.status is CertificationStatus.INCONCLUSIVE
        assert result.depth == 1
        assert result.margin < 0
        assert result.attractors == []

    def test_safety_below_one(self, small_lam_square):
        with pytest.raises(ParameterOutOfRange):
            certify(small_lam_square, safety=0.5)

    def test_central_symmetry(self, centered_square):
        params = MapParams(centered_square, 0.05)
        result = certify(params, max_depth=20)
        assert result.certified
        points = np.array([z for a in result.attractors for z in a.orbit_points(params)])
        for z in points:
            assert np.abs(points + z).min() < 1e-9


class TestSingularPeriodicOrbit:
    """A four-symbol cycle of a slightly irregular octagon pushed onto a singular ray."""

    CYCLE = (1, 3, 5, 7)

    @pytest.fixture(scope="class")
    def singular_params(self):
        vertices = list(regular_polygon(8).vertices)
        vertices[0] *= 1.08
        polygon = validate_polygon(vertices)

        def crossing(j, lam):
            # signed distance of the j-th cycle point to the edge line of its cone facing v_{k-1}
            params = MapParams(polygon, lam)
            z = attractor_from_itinerary(params, self.CYCLE).orbit_points(params)[j]
            return polygon.cone_halfplanes[self.CYCLE[j] - 1][1].value(z)

        roots = [brentq(lambda lam: crossing(j, lam), 0.2, 0.7, xtol=1e-15, rtol=1e-15) for j in range(4)]
        hit = int(np.argmax(roots))
        return MapParams(polygon, roots[hit]), hit

    def test_only_one_cycle_point_on_the_singular_set(self, singular_params):
        params, hit = singular_params
        points = attractor_from_itinerary(params, self.CYCLE).orbit_points(params)
        for j, (k, z) in enumerate(zip(self.CYCLE, points)):
            if j == hit:
                assert distance_to_singular_set(params.polygon, z) < params.singular_tol
                assert step(params, z).is_singular
            else:
                assert cone_index(params.polygon, z) == k

    @pytest.mark.parametrize("max_depth", [6, 12])
    def test_inconclusive_at_every_depth(self, singular_params, max_depth):
        params, _ = singular_params
        result = certify(params, max_depth=max_depth)
        assert result.status is CertificationStatus.INCONCLUSIVE
        assert result.depth == max_depth
        assert [n for n, _, _ in result.margin_history] == list(range(1, max_depth + 1))
        assert all(m <= DEFAULT_SAFETY * radius for _, m, radius in result.margin_history)


class TestEnumerate:
    def test_attractors_verify(self, small_lam_square, certified_square):
        found = enumerate_attractors(small_lam_square, certified_square.depth + 2, strict=False)
        assert found
        assert all(verify_attractor(small_lam_square, a) for a in found)


class TestBasinAssign:
    def test_attractor_point_is_its_own_basin(self, small_lam_square, certified_square):
        for i, a in enumerate(certified_square.attractors):
            assert basin_assign(small_lam_square, certified_square.attractors, a.point) == i

    def test_special_labels(self, small_lam_square, certified_square):
        attractors = certified_square.attractors
        assert basin_assign(small_lam_square, attractors, (0.5, 0.5)) == BasinLabel.INSIDE
        assert basin_assign(small_lam_square, attractors, (-2, 0)) == BasinLabel.SINGULAR

    def test_unresolved_without_iterations(self, small_lam_square, certified_square):
        assert basin_assign(small_lam_square, certified_square.attractors, 5 + 5j, max_iter=0) == BasinLabel.UNRESOLVED

    def test_vectorized_matches_scalar(self, small_lam_square, certified_square):
        attractors = certified_square.attractors
        rng = np.random.default_rng(6)
        zs = rng.uniform(-1.5, 2.5, 50) + 1j * rng.uniform(-1.5, 2.5, 50)
        labels = assign_many(small_lam_square, attractors, zs)
        assert labels.tolist() == [basin_assign(small_lam_square, attractors, z) for z in zs]

    def test_empty_attractor_list(self, small_lam_square):
        with pytest.raises(EmptyAttractorList):
            basin_assign(small_lam_square, [], 3 + 0j)

    def test_single_attractor(self, small_lam_square, certified_square):
        only = certified_square.attractors[:1]
        label = basin_assign(small_lam_square, only, only[0].point + 1e-12)
        assert label == 0

    def test_hand_built_attractor(self, small_lam_square):
        attractor = PeriodicAttractor((1,), 5 + 5j)
        assert not verify_attractor(small_lam_square, attractor)


class TestMonteCarlo:
    def test_orbits_match_certified_attractors(self, small_lam_square, certified_square):
        known = {a.itinerary: a.orbit_points(small_lam_square) for a in certified_square.attractors}
        orbits = monte_carlo_attractors(small_lam_square, n_starts=300, n_iter=200)
        assert orbits
        assert sum(o.hits for o in orbits) > 200
        for o in orbits:
            matches = [points for points in known.values()
                       if len(points) == o.period and min(abs(p - o.point) for p in points) < 1e-6]
            assert matches

    def test_seeded(self, small_lam_square):
        a = monte_carlo_attractors(small_lam_square, n_starts=100, n_iter=100, seed=3)
        b = monte_carlo_attractors(small_lam_square, n_starts=100, n_iter=100, seed=3)
        assert a == b

    @pytest.mark.slow
    @pytest.mark.parametrize("polygon", [triangle(), regular_polygon(7)])
    def test_counts_agree(self, polygon):
        params = MapParams(polygon, 0.5)
        result = certify(params, max_depth=60)
        assert result.certified
        orbits = monte_carlo_attractors(params, n_starts=10_000, n_iter=10_000)
        assert len(orbits) == len(result.attractors)


@pytest.mark.slow
@pytest.mark.parametrize("polygon", [triangle(), parallelogram()])
def test_lambda_sweep(polygon):
    certified = sum(certify(MapParams(polygon, lam / 10), max_depth=60).certified for lam in range(1, 10))
    assert certified >= 8

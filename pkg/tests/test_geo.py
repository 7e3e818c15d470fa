"""Geodesy and sampling tests: spec examples, oracle checks, properties."""

from __future__ import annotations

import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scenescout.errors import (
    DegenerateBearingError,
    InvalidArgumentError,
    OutOfRangeError,
)
from scenescout.geo import (
    GeoCoordinate,
    Polyline,
    SamplingConfig,
    cardinal_of,
    destination_point,
    haversine_distance,
    initial_bearing,
    interpolate_along,
    normalize_heading,
    sample_route,
)

from oracles import angle_delta, oracle_bearing, oracle_distance

# Oracle values computed with the slerp integrator before the build.
EQUATOR_ONE_DEGREE_M = 111_194.9266
MIDTOWN_PAIR_M = 1_067.604
PHILLY_BEARING_DEG = 36.9259


def coord(lat: float, lon: float) -> GeoCoordinate:
    return GeoCoordinate(lat, lon)


class TestGeoCoordinate:
    def test_normalizes_longitude(self):
        assert coord(0.0, 190.0).lon == -170.0
        assert coord(0.0, -180.0).lon == 180.0
        assert coord(0.0, 540.0).lon == 180.0

    def test_rejects_nonfinite(self):
        with pytest.raises(InvalidArgumentError):
            coord(float("nan"), 0.0)
        with pytest.raises(InvalidArgumentError):
            coord(0.0, float("inf"))

    def test_rejects_out_of_range_latitude(self):
        with pytest.raises(InvalidArgumentError):
            coord(91.0, 0.0)


class TestHaversine:
    def test_identity(self):
        p = coord(12.34, 56.78)
        assert haversine_distance(p, p) == 0.0

    def test_one_degree_equator(self):
        d = haversine_distance(coord(0, 0), coord(0, 1))
        assert d == pytest.approx(EQUATOR_ONE_DEGREE_M, rel=1e-6)

    def test_midtown_pair(self):
        d = haversine_distance(coord(40.7580, -73.9855), coord(40.7484, -73.9857))
        assert d == pytest.approx(MIDTOWN_PAIR_M, rel=1e-4)

    def test_symmetric(self):
        a, b = coord(10, 20), coord(-5, 140)
        assert haversine_distance(a, b) == pytest.approx(haversine_distance(b, a))

    def test_against_oracle_random_pairs(self):
        rng = random.Random(42)
        for _ in range(25):
            a = (rng.uniform(-80, 80), rng.uniform(-180, 180))
            b = (rng.uniform(-80, 80), rng.uniform(-180, 180))
            expected = oracle_distance(a, b)
            if expected < 1.0:
                continue
            got = haversine_distance(coord(*a), coord(*b))
            assert got == pytest.approx(expected, rel=5e-3)

    @given(
        st.tuples(
            st.floats(-80, 80), st.floats(-179, 179),
            st.floats(-80, 80), st.floats(-179, 179),
            st.floats(-80, 80), st.floats(-179, 179),
        )
    )
    @settings(max_examples=200, deadline=None)
    def test_triangle_inequality(self, latlons):
        a = coord(latlons[0], latlons[1])
        b = coord(latlons[2], latlons[3])
        c = coord(latlons[4], latlons[5])
        ab = haversine_distance(a, b)
        bc = haversine_distance(b, c)
        ac = haversine_distance(a, c)
        assert ac <= ab + bc + (ab + bc) * 1e-6 + 1e-9


class TestBearing:
    def test_due_north(self):
        assert initial_bearing(coord(0, 0), coord(1, 0)) == 0.0

    def test_due_east_on_equator(self):
        assert initial_bearing(coord(0, 0), coord(0, 1)) == 90.0

    def test_philly_pair_against_oracle(self):
        got = initial_bearing(coord(40.0, -75.0), coord(41.0, -74.0))
        assert angle_delta(got, PHILLY_BEARING_DEG) <= 0.1

    def test_degenerate(self):
        with pytest.raises(DegenerateBearingError):
            initial_bearing(coord(1, 1), coord(1, 1))

    def test_meridian_reverse_differs_by_180(self):
        rng = random.Random(7)
        for _ in range(20):
            lat1, lat2 = sorted((rng.uniform(-60, 60), rng.uniform(-60, 60)))
            if abs(lat1 - lat2) < 1e-3:
                continue
            lon = rng.uniform(-180, 180)
            fwd = initial_bearing(coord(lat1, lon), coord(lat2, lon))
            back = initial_bearing(coord(lat2, lon), coord(lat1, lon))
            assert angle_delta(fwd + 180.0, back) < 1e-6


class TestInterpolate:
    def line(self, length_m: float) -> Polyline:
        start = coord(47.620, -122.338)
        return Polyline((start, destination_point(start, 0.0, length_m)))

    def test_endpoints(self):
        p = self.line(100.0)
        assert interpolate_along(p, 0.0) == p.points[0]
        assert interpolate_along(p, p.total_length_m) == p.points[-1]

    def test_midpoint_of_100m_line(self):
        p = self.line(100.0)
        mid = interpolate_along(p, 50.0)
        # Oracle midpoint computed by slerp before the build.
        expected = coord(47.62044966080295, -122.338)
        assert haversine_distance(mid, expected) <= 0.5

    def test_out_of_range(self):
        p = self.line(100.0)
        with pytest.raises(OutOfRangeError):
            interpolate_along(p, -1.0)
        with pytest.raises(OutOfRangeError):
            interpolate_along(p, 200.0)

    def test_monotone(self):
        p = self.line(500.0)
        distances = [0, 10, 50, 123, 250, 499, 500]
        points = [interpolate_along(p, d) for d in distances]
        from_start = [haversine_distance(p.points[0], q) for q in points]
        assert from_start == sorted(from_start)


class TestPolyline:
    def test_requires_two_points(self):
        with pytest.raises(InvalidArgumentError):
            Polyline((coord(0, 0),))

    def test_rejects_consecutive_duplicates(self):
        with pytest.raises(InvalidArgumentError):
            Polyline((coord(0, 0), coord(0, 0), coord(1, 1)))


def random_polyline(rng: random.Random, min_len: float, max_len: float) -> Polyline:
    """Random walk with mild turns; total length in [min_len, max_len]."""
    target = rng.uniform(min_len, max_len)
    points = [coord(rng.uniform(-60, 60), rng.uniform(-179, 179))]
    heading = rng.uniform(0, 360)
    remaining = target
    while remaining > 0:
        leg = min(remaining, rng.uniform(20, 200))
        heading = normalize_heading(heading + rng.uniform(-40, 40))
        points.append(destination_point(points[-1], heading, leg))
        remaining -= leg
    return Polyline(tuple(points))


class TestSampleRoute:
    def test_100m_line_spec_example(self):
        p = TestInterpolate().line(100.0)
        distances = [s.distance_from_start for s in sample_route(p, SamplingConfig(30, 40))]
        assert distances == pytest.approx([0.0, 35.0, 70.0, 100.0], abs=1e-6)

    def test_short_route_two_samples(self):
        p = TestInterpolate().line(20.0)
        distances = [s.distance_from_start for s in sample_route(p, SamplingConfig(30, 40))]
        assert distances == pytest.approx([0.0, 20.0], abs=1e-6)

    def test_300m_route_nine_samples(self):
        p = TestInterpolate().line(300.0)
        samples = sample_route(p, SamplingConfig(30, 40))
        assert len(samples) == 9
        gaps = [
            b.distance_from_start - a.distance_from_start for a, b in zip(samples, samples[1:])
        ]
        assert all(30.0 - 1e-9 <= g <= 40.0 + 1e-9 for g in gaps[:-1])
        assert 30.0 - 1e-9 <= gaps[-1] <= 40.0 + 1e-9

    def test_kinds_and_headings(self):
        p = TestInterpolate().line(120.0)
        samples = sample_route(p)
        assert samples[-1].kind.value == "Destination"
        assert all(s.kind.value == "MidBlock" for s in samples[:-1])
        assert all(angle_delta(s.heading, 0.0) < 1e-6 for s in samples)

    def test_gap_invariant_random_polylines(self):
        rng = random.Random(1234)
        for _ in range(200):
            p = random_polyline(rng, 50, 5000)
            samples = sample_route(p, SamplingConfig(30, 40))
            distances = [s.distance_from_start for s in samples]
            gaps = [b - a for a, b in zip(distances, distances[1:])]
            assert all(30.0 - 1e-6 <= g <= 40.0 + 1e-6 for g in gaps[:-1]), gaps
            assert gaps[-1] <= 40.0 + 1e-6
            assert distances[0] == 0.0
            assert distances[-1] == pytest.approx(p.total_length_m, abs=1e-6)

    def test_zero_length_rejected(self):
        p = TestInterpolate().line(50.0)
        # degenerate config still fine; degenerate polyline impossible by type,
        # so exercise guard through a mocked total length of zero
        with pytest.raises(InvalidArgumentError):
            SamplingConfig(0, 40)


class TestCardinal:
    @pytest.mark.parametrize(
        "heading,expected",
        [
            (0, "North"),
            (45, "Northeast"),
            (90, "East"),
            (135, "Southeast"),
            (180, "South"),
            (225, "Southwest"),
            (270, "West"),
            (315, "Northwest"),
            (22.5, "Northeast"),
            (337.5, "North"),
            (359.9, "North"),
        ],
    )
    def test_sectors(self, heading, expected):
        assert cardinal_of(heading) == expected

    @given(st.floats(0, 359.999), st.integers(-3, 3))
    @settings(max_examples=200, deadline=None)
    def test_periodic(self, heading, k):
        assert cardinal_of(heading) == cardinal_of(heading + 360.0 * k)

"""Route-preview orchestration tests against the checked-in bundle."""

from __future__ import annotations

import json
import math
import random

import pytest

from scenescout.errors import RouteUnavailableError
from scenescout.geo import (
    GeoCoordinate,
    PointKind,
    Polyline,
    SamplePoint,
    SamplingConfig,
    destination_point,
    sample_route,
)
from scenescout.preview import (
    PreviewGenerator,
    PreviewRequest,
    classify_point,
    describe_destination,
    views_for,
)
from scenescout.prompts import PromptEngine
from scenescout.providers import (
    CachingImageryProvider,
    FixtureBundle,
    FixtureImageryProvider,
    FixturePanoramaProvider,
    FixturePlacesProvider,
    FixtureRouteProvider,
    LruImageCache,
    ProviderSet,
    ScriptedMllmProvider,
)
from scenescout.providers.base import ManeuverKind, PanoramaLink, PanoramaMeta, RouteResult, RouteStep

from conftest import PREVIEW_DESTINATION, PREVIEW_DESTINATION_NAME, PREVIEW_ORIGIN

FIXED_CLOCK = lambda: "2026-01-01T00:00:00+00:00"  # noqa: E731


def _request() -> PreviewRequest:
    return PreviewRequest(PREVIEW_ORIGIN, PREVIEW_DESTINATION, PREVIEW_DESTINATION_NAME)


def _straight_route(length_m: float = 300.0) -> RouteResult:
    start = GeoCoordinate(10.0, 20.0)
    end = destination_point(start, 0.0, length_m)
    return RouteResult(
        polyline=Polyline((start, end)),
        steps=(
            RouteStep(ManeuverKind.DEPART, start, "A St"),
            RouteStep(ManeuverKind.TURN_LEFT, destination_point(start, 0.0, length_m / 2), "B St"),
            RouteStep(ManeuverKind.ARRIVE, end, "A St"),
        ),
        total_length_m=length_m,
    )


class TestClassify:
    def test_near_turn_step(self):
        route = _straight_route(300.0)
        turn_location = route.steps[1].location
        sample = SamplePoint(destination_point(turn_location, 0.0, 10.0), 0.0, 160.0)
        assert classify_point(route, sample) is PointKind.INTERSECTION

    def test_far_from_turn_is_midblock(self):
        route = _straight_route(300.0)
        sample = SamplePoint(route.polyline.points[0], 0.0, 0.0)
        assert classify_point(route, sample) is PointKind.MID_BLOCK

    def test_last_sample_is_destination(self):
        route = _straight_route(300.0)
        sample = SamplePoint(route.polyline.points[-1], 0.0, 300.0, PointKind.DESTINATION)
        assert classify_point(route, sample) is PointKind.DESTINATION

    def test_two_link_panorama_is_midblock(self, bundle):
        route = _straight_route(300.0)
        sample = SamplePoint(route.polyline.points[0], 0.0, 0.0)
        assert classify_point(route, sample, bundle.panoramas["rp3"]) is PointKind.MID_BLOCK

    def test_four_link_panorama_is_intersection(self, bundle):
        route = _straight_route(300.0)
        sample = SamplePoint(route.polyline.points[0], 0.0, 0.0)
        assert classify_point(route, sample, bundle.panoramas["rp0"]) is PointKind.INTERSECTION


class TestViews:
    def test_midblock_views(self):
        sample = SamplePoint(GeoCoordinate(0, 0), 0.0, 0.0)
        views = views_for(sample, PointKind.MID_BLOCK, "p")
        assert [(v.heading, v.fov_deg) for v in views] == [(300.0, 60.0), (0.0, 60.0), (60.0, 60.0)]
        assert sum(v.fov_deg for v in views) == 180.0

    def test_intersection_views(self):
        sample = SamplePoint(GeoCoordinate(0, 0), 45.0, 0.0)
        views = views_for(sample, PointKind.INTERSECTION, "p")
        assert [(v.heading, v.fov_deg) for v in views] == [
            (45.0, 90.0),
            (135.0, 90.0),
            (225.0, 90.0),
            (315.0, 90.0),
        ]
        assert sum(v.fov_deg for v in views) == 360.0

    def test_destination_uses_forward_coverage(self):
        sample = SamplePoint(GeoCoordinate(0, 0), 90.0, 0.0)
        views = views_for(sample, PointKind.DESTINATION, "p")
        assert sum(v.fov_deg for v in views) == 180.0


class TestGeneratePreview:
    def test_fixture_end_to_end(self, providers):
        generator = PreviewGenerator(providers, clock=FIXED_CLOCK)
        result = generator.generate(_request())
        assert len(result.segments) == 9
        assert all(s.triple is not None for s in result.segments)
        kinds = [s.sample.kind for s in result.segments]
        assert kinds[0] is PointKind.INTERSECTION
        assert kinds[-1] is PointKind.DESTINATION
        assert result.destination is not None
        assert "RapidRide" in result.destination.signage_text

    def test_fov_coverage_identity(self, providers):
        result = PreviewGenerator(providers, clock=FIXED_CLOCK).generate(_request())
        for segment in result.segments:
            total = sum(v.fov_deg for v in segment.views)
            expected = 360.0 if segment.sample.kind is PointKind.INTERSECTION else 180.0
            assert total == expected

    def test_chaining(self, providers):
        result = PreviewGenerator(providers, clock=FIXED_CLOCK).generate(_request())
        for i in range(1, len(result.segments)):
            prev_long = result.segments[i - 1].triple.long
            assert prev_long in result.segments[i].prompt_text

    def test_byte_identical_reruns(self, providers, bundle_dir):
        from scenescout.providers import fixture_provider_set

        first = PreviewGenerator(providers, clock=FIXED_CLOCK).generate(_request()).to_json()
        second = (
            PreviewGenerator(fixture_provider_set(bundle_dir), clock=FIXED_CLOCK)
            .generate(_request())
            .to_json()
        )
        assert first == second

    def test_zero_length_route(self, providers):
        generator = PreviewGenerator(providers, clock=FIXED_CLOCK)
        with pytest.raises(RouteUnavailableError):
            generator.generate(PreviewRequest(PREVIEW_ORIGIN, PREVIEW_ORIGIN, "nowhere"))

    def test_malformed_segment_isolated(self, bundle):
        script = dict(bundle.script)
        script["segment:rp4"] = "gibberish that is not json"
        providers = ProviderSet(
            routes=FixtureRouteProvider(bundle),
            panoramas=FixturePanoramaProvider(bundle),
            imagery=CachingImageryProvider(FixtureImageryProvider(bundle), LruImageCache()),
            places=FixturePlacesProvider(bundle),
            mllm=ScriptedMllmProvider(script),
        )
        result = PreviewGenerator(providers, clock=FIXED_CLOCK).generate(_request())
        statuses = [(s.index, s.triple is not None) for s in result.segments]
        assert statuses == [(i, i != 4) for i in range(9)]
        assert result.segments[4].error == "parse_error"
        # chaining skips the failed segment: segment 5 carries segment 3's long text
        assert result.segments[3].triple.long in result.segments[5].prompt_text

    def test_imagery_unavailable_marks_segment(self, bundle, bundle_dir):
        panoramas = {k: v for k, v in bundle.panoramas.items() if k != "rp4"}
        holey = FixtureBundle(
            routes=bundle.routes,
            panoramas=panoramas,
            places=bundle.places,
            script=bundle.script,
            tiles_dir=bundle_dir / "tiles",
        )
        providers = ProviderSet(
            routes=FixtureRouteProvider(holey),
            panoramas=FixturePanoramaProvider(holey),
            imagery=CachingImageryProvider(FixtureImageryProvider(holey), LruImageCache()),
            places=FixturePlacesProvider(holey),
            mllm=ScriptedMllmProvider(holey.script),
        )
        result = PreviewGenerator(providers, clock=FIXED_CLOCK).generate(_request())
        assert result.segments[4].error == "imagery-unavailable"
        assert result.segments[4].views == []
        assert all(s.triple is not None for s in result.segments if s.index != 4)

    def test_segment_count_bounds_random_lengths(self):
        rng = random.Random(5)
        for _ in range(100):
            length = rng.uniform(50, 5000)
            start = GeoCoordinate(rng.uniform(-60, 60), rng.uniform(-179, 179))
            line = Polyline((start, destination_point(start, rng.uniform(0, 360), length)))
            count = len(sample_route(line, SamplingConfig(30, 40)))
            gaps = count - 1
            assert math.ceil(line.total_length_m / 40) <= gaps <= math.ceil(line.total_length_m / 30) + 1

    def test_serialized_document_schema(self, providers):
        result = PreviewGenerator(providers, clock=FIXED_CLOCK).generate(_request())
        doc = json.loads(result.to_json())
        assert doc["schema"] == "preview.v1"
        assert doc["generated_at"] == FIXED_CLOCK()
        assert {"index", "sample", "views", "triple", "prompt_text"} <= set(doc["segments"][0])


class TestDescribeDestination:
    def test_single_panorama_approach(self, providers, bundle):
        engine = PromptEngine(providers.mllm)
        script = dict(bundle.script)
        script["destination:rp8"] = script["destination:rp6,rp7,rp8"]
        engine_single = PromptEngine(ScriptedMllmProvider(script))
        detail, views = describe_destination(
            engine_single, providers.imagery, [("rp8", 0.0)], "context", "stop"
        )
        assert detail.place_summary
        assert len(views) == 1

    def test_scripted_miss_marks_destination_failed(self, bundle, bundle_dir):
        script = {k: v for k, v in bundle.script.items() if not k.startswith("destination")}
        providers = ProviderSet(
            routes=FixtureRouteProvider(bundle),
            panoramas=FixturePanoramaProvider(bundle),
            imagery=CachingImageryProvider(FixtureImageryProvider(bundle), LruImageCache()),
            places=FixturePlacesProvider(bundle),
            mllm=ScriptedMllmProvider(script),
        )
        result = PreviewGenerator(providers, clock=FIXED_CLOCK).generate(_request())
        assert result.destination is None
        assert result.destination_error == "scripted_miss"
        assert all(s.triple is not None for s in result.segments)

"""Provider contract tests: fixtures, retries, cache, and live HTTP adapters."""

from __future__ import annotations

import json
import random

import httpx
import pytest

from scenescout.errors import (
    InvalidArgumentError,
    NoCoverageError,
    NotFoundError,
    ProviderError,
    RouteUnavailableError,
    ScriptedMissError,
)
from scenescout.geo import GeoCoordinate, destination_point, haversine_distance
from scenescout.providers import (
    FixtureImageryProvider,
    FixturePanoramaProvider,
    FixturePlacesProvider,
    FixtureRouteProvider,
    HttpMllmProvider,
    HttpPanoramaProvider,
    HttpRouteProvider,
    ImageRef,
    LruImageCache,
    MllmRequest,
    RetryPolicy,
    ScriptedMllmProvider,
    TokenBucket,
    ViewRequest,
    script_keys,
    with_retries,
)
from scenescout.providers.cache import CachingImageryProvider
from scenescout.serde import canonical_dumps

from conftest import EXPLORE_START, PREVIEW_DESTINATION, PREVIEW_ORIGIN


class TestFixtureRoutes:
    def test_fixture_echo_byte_identical(self, bundle, bundle_dir):
        provider = FixtureRouteProvider(bundle)
        route = provider.get_route(PREVIEW_ORIGIN, PREVIEW_DESTINATION)
        stored = json.loads((bundle_dir / "routes.json").read_text())["routes"][0]
        assert canonical_dumps(route.to_dict()) == canonical_dumps(stored)

    def test_origin_equals_destination(self, bundle):
        provider = FixtureRouteProvider(bundle)
        with pytest.raises(RouteUnavailableError):
            provider.get_route(PREVIEW_ORIGIN, PREVIEW_ORIGIN)

    def test_unreachable_island(self, bundle):
        provider = FixtureRouteProvider(bundle)
        island = GeoCoordinate(-17.55, -149.56)
        with pytest.raises(RouteUnavailableError):
            provider.get_route(PREVIEW_ORIGIN, island)

    def test_endpoints_within_match_radius(self, bundle):
        provider = FixtureRouteProvider(bundle)
        near_origin = destination_point(PREVIEW_ORIGIN, 90.0, 30.0)
        route = provider.get_route(near_origin, PREVIEW_DESTINATION)
        assert haversine_distance(route.polyline.points[0], near_origin) <= 50.0


class TestFixturePanoramas:
    def test_exact_hit(self, bundle):
        provider = FixturePanoramaProvider(bundle)
        meta = bundle.panoramas["rp3"]
        assert provider.nearest_panorama(meta.coord).id == "rp3"

    def test_ten_meters_away(self, bundle):
        provider = FixturePanoramaProvider(bundle)
        meta = bundle.panoramas["rp3"]
        nearby = destination_point(meta.coord, 90.0, 10.0)
        assert provider.nearest_panorama(nearby).id == "rp3"

    def test_no_coverage(self, bundle):
        provider = FixturePanoramaProvider(bundle)
        far = destination_point(bundle.panoramas["rp3"].coord, 90.0, 500.0)
        with pytest.raises(NoCoverageError):
            provider.nearest_panorama(far)

    def test_unknown_id(self, bundle):
        provider = FixturePanoramaProvider(bundle)
        with pytest.raises(NotFoundError):
            provider.panorama_by_id("missing")

    def test_brute_force_agreement(self, bundle):
        provider = FixturePanoramaProvider(bundle)
        metas = list(bundle.panoramas.values())
        rng = random.Random(99)
        anchors = [PREVIEW_ORIGIN, EXPLORE_START]
        for i in range(1000):
            anchor = anchors[i % 2]
            north = rng.uniform(-400, 400)
            east = rng.uniform(-400, 400)
            query = destination_point(anchor, 0.0 if north >= 0 else 180.0, abs(north))
            query = destination_point(query, 90.0 if east >= 0 else 270.0, abs(east))
            best = min(metas, key=lambda m: (haversine_distance(query, m.coord), m.id))
            best_d = haversine_distance(query, best.coord)
            if best_d > provider.snap_radius_m:
                with pytest.raises(NoCoverageError):
                    provider.nearest_panorama(query)
            else:
                assert provider.nearest_panorama(query).id == best.id


class TestFixtureImagery:
    def test_fixture_echo(self, bundle, bundle_dir):
        provider = FixtureImageryProvider(bundle)
        ref = provider.render_view(ViewRequest("rp0", 0.0, 90.0))
        stored = (bundle_dir / "tiles" / "rp0_h000_f090.png").read_bytes()
        assert ref.data == stored
        assert ref.media_type == "image/png"

    def test_determinism(self, bundle):
        provider = FixtureImageryProvider(bundle)
        req = ViewRequest("ex_ix", 270.0, 90.0)
        assert provider.render_view(req).data == provider.render_view(req).data

    def test_fov_bound(self):
        with pytest.raises(InvalidArgumentError):
            ViewRequest("rp0", 0.0, fov_deg=200.0)

    def test_pitch_bound(self):
        with pytest.raises(InvalidArgumentError):
            ViewRequest("rp0", 0.0, fov_deg=90.0, pitch_deg=45.0)

    def test_unknown_pano(self, bundle):
        provider = FixtureImageryProvider(bundle)
        with pytest.raises(NotFoundError):
            provider.render_view(ViewRequest("nope", 0.0, 90.0))


class TestFixturePlaces:
    def test_three_places_sorted_at_intersection(self, bundle):
        provider = FixturePlacesProvider(bundle)
        places = provider.nearby_places(PREVIEW_ORIGIN, 100.0)
        assert [p.name for p in places] == [
            "Salt & Pepper Deli Market",
            "California Closets",
            "Caffe Ladro",
        ]
        distances = [p.distance_m for p in places]
        assert distances == sorted(distances)
        assert all(p.distance_m <= 100.0 for p in places)
        assert places[1].relative_direction == "West"

    def test_brute_force_sort(self, bundle):
        provider = FixturePlacesProvider(bundle)
        got = provider.nearby_places(PREVIEW_ORIGIN, 450.0)
        brute = sorted(
            (
                (haversine_distance(PREVIEW_ORIGIN, coord), name)
                for name, _, coord in bundle.places
                if haversine_distance(PREVIEW_ORIGIN, coord) <= 450.0
            ),
        )
        assert [p.name for p in got] == [name for _, name in brute]

    def test_radius_bounds(self, bundle):
        provider = FixturePlacesProvider(bundle)
        with pytest.raises(InvalidArgumentError):
            provider.nearby_places(PREVIEW_ORIGIN, 0.0)
        with pytest.raises(InvalidArgumentError):
            provider.nearby_places(PREVIEW_ORIGIN, 501.0)

    def test_empty_area(self, bundle):
        provider = FixturePlacesProvider(bundle)
        middle_of_nowhere = GeoCoordinate(-45.0, 100.0)
        assert provider.nearby_places(middle_of_nowhere, 100.0) == []


def _image(bundle, pano: str, heading: float = 0.0, fov: float = 60.0) -> ImageRef:
    return FixtureImageryProvider(bundle).render_view(ViewRequest(pano, heading, fov))


class TestScriptedMllm:
    def test_key_scheme(self, bundle):
        images = tuple(_image(bundle, "rp1", h) for h in (300.0, 0.0, 60.0))
        req = MllmRequest(template_id="segment", system_and_user_text="x", images=images)
        assert script_keys(req) == [
            "segment:rp1_h300_f060,rp1_h000_f060,rp1_h060_f060",
            "segment:rp1",
        ]

    def test_pano_fallback_key(self, bundle):
        provider = ScriptedMllmProvider(bundle.script)
        images = tuple(_image(bundle, "rp1", h) for h in (300.0, 0.0, 60.0))
        req = MllmRequest(template_id="segment", system_and_user_text="x", images=images)
        response = provider.complete(req)
        assert "Salt & Pepper Deli Market" in response

    def test_imageless_key(self, bundle):
        provider = ScriptedMllmProvider(bundle.script)
        req = MllmRequest(template_id="keywords", system_and_user_text="x")
        assert "Parks" in provider.complete(req)

    def test_scripted_miss(self, bundle):
        provider = ScriptedMllmProvider(bundle.script)
        req = MllmRequest(template_id="segment", system_and_user_text="x")
        with pytest.raises(ScriptedMissError):
            provider.complete(req)

    def test_oversized_image_list(self, bundle):
        images = tuple(_image(bundle, "rp1", 30.0 * i) for i in range(11))
        with pytest.raises(InvalidArgumentError):
            MllmRequest(template_id="segment", system_and_user_text="x", images=images)

    def test_purity(self, bundle):
        provider = ScriptedMllmProvider(bundle.script)
        req = MllmRequest(template_id="keywords", system_and_user_text="x")
        assert provider.complete(req) == provider.complete(req)


class TestRetry:
    def test_idempotent_retry_until_cap(self):
        calls = []
        delays = []

        def flaky():
            calls.append(1)
            raise ProviderError("boom", retryable=True)

        policy = RetryPolicy(max_retries=3, base_delay_s=0.1, jitter_fraction=0.5)
        with pytest.raises(ProviderError):
            with_retries(flaky, policy, idempotent=True, rng=random.Random(1), sleep=delays.append)
        assert len(calls) == 4
        assert len(delays) == 3

    def test_non_idempotent_capped_at_one(self):
        calls = []
        policy = RetryPolicy(max_retries=5)

        def flaky():
            calls.append(1)
            raise ProviderError("boom", retryable=True)

        with pytest.raises(ProviderError):
            with_retries(flaky, policy, idempotent=False, rng=random.Random(1), sleep=lambda s: None)
        assert len(calls) == 2

    def test_non_retryable_fails_fast(self):
        calls = []

        def broken():
            calls.append(1)
            raise ProviderError("bad request", retryable=False)

        with pytest.raises(ProviderError):
            with_retries(broken, RetryPolicy(), idempotent=True, rng=random.Random(1), sleep=lambda s: None)
        assert len(calls) == 1

    def test_jitter_bounded(self):
        policy = RetryPolicy(max_retries=8, base_delay_s=0.5, max_delay_s=4.0, jitter_fraction=0.25)
        rng = random.Random(123)
        for attempt in range(8):
            for _ in range(200):
                delay = policy.delay_for(attempt, rng)
                base = min(0.5 * 2**attempt, 4.0)
                assert base <= delay <= base * 1.25 + 1e-9
                assert delay <= 4.0 * 1.25 + 1e-9

    def test_retry_after_hint_respected(self):
        delays = []
        calls = []

        def rate_limited():
            calls.append(1)
            if len(calls) < 2:
                raise ProviderError("slow down", retryable=True, retry_after=2.5)
            return "ok"

        result = with_retries(
            rate_limited, RetryPolicy(max_retries=2), idempotent=True, rng=random.Random(1), sleep=delays.append
        )
        assert result == "ok"
        assert delays == [2.5]


class TestTokenBucket:
    def test_burst_then_refill(self):
        now = [0.0]
        bucket = TokenBucket(rate_per_s=2.0, burst=2.0, clock=lambda: now[0])
        assert bucket.try_acquire()
        assert bucket.try_acquire()
        assert not bucket.try_acquire()
        now[0] += 0.5  # refills one token
        assert bucket.try_acquire()
        assert not bucket.try_acquire()


class TestImageCache:
    def test_lru_eviction_by_bytes(self, bundle):
        inner = FixtureImageryProvider(bundle)
        ref = inner.render_view(ViewRequest("rp0", 0.0, 90.0))
        budget = len(ref.data) * 2 + 1
        cache = LruImageCache(budget)
        provider = CachingImageryProvider(inner, cache)
        a, b, c = (ViewRequest("rp0", h, 90.0) for h in (0.0, 90.0, 180.0))
        provider.render_view(a)
        provider.render_view(b)
        assert cache.get(b) is not None  # refresh b: a becomes least recently used
        provider.render_view(c)
        assert cache.get(a) is None
        assert cache.get(b) is not None
        assert cache.get(c) is not None

    def test_cache_returns_same_bytes(self, bundle):
        provider = CachingImageryProvider(FixtureImageryProvider(bundle), LruImageCache())
        req = ViewRequest("rp1", 0.0, 60.0)
        assert provider.render_view(req).data == provider.render_view(req).data


def _mock_client(handler, klass, **kwargs):
    transport = httpx.MockTransport(handler)
    return klass(
        "https://maps.example",
        api_key="k",
        transport=transport,
        rng=random.Random(0),
        sleep=lambda s: None,
        **kwargs,
    )


class TestLiveClients:
    def test_route_roundtrip(self, bundle_dir):
        stored = json.loads((bundle_dir / "routes.json").read_text())["routes"][0]

        def handler(request: httpx.Request) -> httpx.Response:
            assert request.url.path == "/route"
            assert request.headers["Authorization"] == "Bearer k"
            return httpx.Response(200, json=stored)

        client = _mock_client(handler, HttpRouteProvider)
        route = client.get_route(PREVIEW_ORIGIN, PREVIEW_DESTINATION)
        assert route.total_length_m == stored["total_length_m"]

    def test_route_unavailable(self):
        def handler(request):
            return httpx.Response(200, json={"status": "no_route"})

        client = _mock_client(handler, HttpRouteProvider)
        with pytest.raises(RouteUnavailableError):
            client.get_route(PREVIEW_ORIGIN, PREVIEW_DESTINATION)

    def test_server_error_retries_then_succeeds(self, bundle_dir):
        stored = json.loads((bundle_dir / "routes.json").read_text())["routes"][0]
        calls = []

        def handler(request):
            calls.append(1)
            if len(calls) < 3:
                return httpx.Response(503, text="unavailable")
            return httpx.Response(200, json=stored)

        client = _mock_client(handler, HttpRouteProvider)
        assert client.get_route(PREVIEW_ORIGIN, PREVIEW_DESTINATION)
        assert len(calls) == 3

    def test_rate_limit_carries_hint(self):
        def handler(request):
            return httpx.Response(429, headers={"Retry-After": "7"}, text="slow down")

        client = _mock_client(handler, HttpPanoramaProvider)
        client._retry = RetryPolicy(max_retries=0)
        with pytest.raises(ProviderError) as excinfo:
            client.panorama_by_id("p1")
        assert excinfo.value.retryable
        assert excinfo.value.retry_after == 7.0

    def test_nearest_404_is_no_coverage(self):
        def handler(request):
            return httpx.Response(404, text="none nearby")

        client = _mock_client(handler, HttpPanoramaProvider)
        with pytest.raises(NoCoverageError):
            client.nearest_panorama(PREVIEW_ORIGIN)

    def test_mllm_payload_shape(self, bundle):
        captured = {}

        def handler(request):
            captured.update(json.loads(request.content))
            return httpx.Response(
                200, json={"choices": [{"message": {"content": "described"}}]}
            )

        client = _mock_client(handler, HttpMllmProvider, model="test-model")
        image = _image(bundle, "rp0", 0.0, 90.0)
        out = client.complete(
            MllmRequest(template_id="segment", system_and_user_text="prompt", images=(image,))
        )
        assert out == "described"
        assert captured["model"] == "test-model"
        content = captured["messages"][0]["content"]
        assert content[0] == {"type": "text", "text": "prompt"}
        assert content[1]["image_url"]["url"].startswith("data:image/png;base64,")

    def test_mllm_not_retried_more_than_once(self):
        calls = []

        def handler(request):
            calls.append(1)
            return httpx.Response(500, text="boom")

        client = _mock_client(handler, HttpMllmProvider)
        client._retry = RetryPolicy(max_retries=4)
        with pytest.raises(ProviderError):
            client.complete(MllmRequest(template_id="segment", system_and_user_text="p"))
        assert len(calls) == 2

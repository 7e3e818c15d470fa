"""External data providers: routes, panoramas, views, places, and the model."""

from .base import (
    ImageRef,
    ImageryProvider,
    ManeuverKind,
    MllmProvider,
    MllmRequest,
    PanoramaLink,
    PanoramaMeta,
    PanoramaProvider,
    Place,
    PlacesProvider,
    ProviderSet,
    RouteProvider,
    RouteResult,
    RouteStep,
    ViewRequest,
)
from .cache import CachingImageryProvider, LruImageCache
from .fixture import (
    FixtureBundle,
    FixtureImageryProvider,
    FixturePanoramaProvider,
    FixturePlacesProvider,
    FixtureRouteProvider,
    ScriptedMllmProvider,
    script_keys,
)
from .live import (
    HttpImageryProvider,
    HttpMllmProvider,
    HttpPanoramaProvider,
    HttpPlacesProvider,
    HttpRouteProvider,
)
from .retry import RetryPolicy, TokenBucket, with_retries


def fixture_provider_set(bundle_dir, snap_radius_m: float = 25.0, cache_budget_bytes: int = 64 * 1024 * 1024) -> ProviderSet:
    """Build the full provider stack from a fixture bundle directory."""
    bundle = FixtureBundle.load(bundle_dir)
    return ProviderSet(
        routes=FixtureRouteProvider(bundle),
        panoramas=FixturePanoramaProvider(bundle, snap_radius_m=snap_radius_m),
        imagery=CachingImageryProvider(FixtureImageryProvider(bundle), LruImageCache(cache_budget_bytes)),
        places=FixturePlacesProvider(bundle),
        mllm=ScriptedMllmProvider(bundle.script),
        snap_radius_m=snap_radius_m,
    )


__all__ = [
    "CachingImageryProvider",
    "FixtureBundle",
    "FixtureImageryProvider",
    "FixturePanoramaProvider",
    "FixturePlacesProvider",
    "FixtureRouteProvider",
    "HttpImageryProvider",
    "HttpMllmProvider",
    "HttpPanoramaProvider",
    "HttpPlacesProvider",
    "HttpRouteProvider",
    "ImageRef",
    "ImageryProvider",
    "LruImageCache",
    "ManeuverKind",
    "MllmProvider",
    "MllmRequest",
    "PanoramaLink",
    "PanoramaMeta",
    "PanoramaProvider",
    "Place",
    "PlacesProvider",
    "ProviderSet",
    "RetryPolicy",
    "RouteProvider",
    "RouteResult",
    "RouteStep",
    "ScriptedMllmProvider",
    "TokenBucket",
    "ViewRequest",
    "fixture_provider_set",
    "script_keys",
    "with_retries",
]

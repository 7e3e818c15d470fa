"""Route Preview: route -> sampled points -> classification -> imagery -> chained descriptions.

Mid-block samples get a 180-degree forward view as three 60-degree cuts
(left, front, right); intersections get the full 360 degrees as four
90-degree cuts. Descriptions are chained: each segment prompt carries the
previous segment's long description so the model describes changes instead
of repeating itself. Per-segment failures degrade to marked failure rows;
the preview always runs to the end of the route.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Callable

from .errors import (
    InvalidArgumentError,
    NoCoverageError,
    ParseError,
    ProviderError,
    RouteUnavailableError,
    ScenescoutError,
)
from .geo import (
    GeoCoordinate,
    PointKind,
    Polyline,
    SamplePoint,
    SamplingConfig,
    cardinal_of,
    haversine_distance,
)
from .prompts import (
    AgentContext,
    DescriptionTriple,
    DestinationDetail,
    PromptEngine,
    build_destination_prompt,
    build_intersection_prompt,
    build_segment_prompt,
    render_places,
)
from .providers.base import (
    ImageRef,
    ManeuverKind,
    PanoramaMeta,
    ProviderSet,
    RouteResult,
    ViewRequest,
)
from .serde import canonical_dumps

SCHEMA_VERSION = "preview.v1"
INTERSECTION_STEP_RADIUS_M = 15.0
INTERSECTION_LINK_DEGREE = 3
PLACES_RADIUS_M = 100.0
DESTINATION_APPROACH_PANOS = 3

_TURN_KINDS = frozenset(
    {ManeuverKind.TURN_LEFT, ManeuverKind.TURN_RIGHT, ManeuverKind.CROSS_INTERSECTION}
)


@dataclass(frozen=True)
class PreviewRequest:
    origin: GeoCoordinate
    destination: GeoCoordinate
    destination_name: str


@dataclass
class PreviewSegment:
    index: int
    sample: SamplePoint
    views: list[ViewRequest] = field(default_factory=list)
    pano_id: str | None = None
    nearby_places: str = ""
    prompt_text: str = ""
    triple: DescriptionTriple | None = None
    error: str | None = None

    @property
    def failed(self) -> bool:
        return self.triple is None

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "sample": {
                "lat": self.sample.coord.lat,
                "lon": self.sample.coord.lon,
                "heading": self.sample.heading,
                "distance_from_start": self.sample.distance_from_start,
                "kind": self.sample.kind.value,
            },
            "views": [v.to_dict() for v in self.views],
            "pano_id": self.pano_id,
            "nearby_places": self.nearby_places,
            "prompt_text": self.prompt_text,
            "triple": self.triple.to_dict() if self.triple else None,
            "error": self.error,
        }


@dataclass
class PreviewResult:
    segments: list[PreviewSegment]
    route: RouteResult
    destination_name: str
    destination: DestinationDetail | None = None
    destination_error: str | None = None
    destination_views: list[ViewRequest] = field(default_factory=list)
    generated_at: str = ""

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "generated_at": self.generated_at,
            "destination_name": self.destination_name,
            "route": self.route.to_dict(),
            "segments": [s.to_dict() for s in self.segments],
            "destination": self.destination.to_dict() if self.destination else None,
            "destination_error": self.destination_error,
            "destination_views": [v.to_dict() for v in self.destination_views],
        }

    def to_json(self) -> str:
        return canonical_dumps(self.to_dict())


def classify_point(
    route: RouteResult, sample: SamplePoint, pano: PanoramaMeta | None = None
) -> PointKind:
    """Destination for the final sample; Intersection near turn/cross steps
    or at panoramas with 3+ links; MidBlock otherwise."""
    if sample.kind is PointKind.DESTINATION:
        return PointKind.DESTINATION
    for step in route.steps:
        if step.maneuver_kind in _TURN_KINDS:
            if haversine_distance(step.location, sample.coord) <= INTERSECTION_STEP_RADIUS_M:
                return PointKind.INTERSECTION
    if pano is not None and len(pano.links) >= INTERSECTION_LINK_DEGREE:
        return PointKind.INTERSECTION
    return PointKind.MID_BLOCK


def views_for(sample: SamplePoint, kind: PointKind, pano_id: str) -> list[ViewRequest]:
    """Intersection: four 90-degree cuts covering 360. Otherwise three
    60-degree cuts covering the forward 180 (left, front, right)."""
    h = sample.heading
    if kind is PointKind.INTERSECTION:
        return [ViewRequest(pano_id, h + offset, fov_deg=90.0) for offset in (0.0, 90.0, 180.0, 270.0)]
    return [ViewRequest(pano_id, h + offset, fov_deg=60.0) for offset in (-60.0, 0.0, 60.0)]


def describe_destination(
    engine: PromptEngine,
    imagery_provider,
    approach: list[tuple[str, float]],
    context: str,
    place_name: str,
) -> tuple[DestinationDetail, list[ViewRequest]]:
    """Five-field destination detail from forward views of the approach
    panoramas, attached in approach order (destination-facing last)."""
    if not approach:
        raise InvalidArgumentError("destination description needs at least one panorama")
    views = [ViewRequest(pano_id, heading, fov_deg=90.0) for pano_id, heading in approach]
    images = tuple(imagery_provider.render_view(v) for v in views)
    prompt = build_destination_prompt(context, place_name)
    return engine.ask_destination(prompt, images), views


class PreviewGenerator:
    def __init__(
        self,
        providers: ProviderSet,
        *,
        sampling: SamplingConfig = SamplingConfig(),
        places_radius_m: float = PLACES_RADIUS_M,
        clock: Callable[[], str] | None = None,
        max_tokens: int = 1024,
    ):
        self._providers = providers
        self._sampling = sampling
        self._places_radius_m = places_radius_m
        self._clock = clock or (lambda: datetime.now(timezone.utc).isoformat())
        self._engine = PromptEngine(providers.mllm, max_tokens=max_tokens)

    def generate(
        self,
        req: PreviewRequest,
        *,
        on_segment: Callable[[PreviewSegment], None] | None = None,
    ) -> PreviewResult:
        route = self._providers.routes.get_route(req.origin, req.destination)
        if route.polyline.total_length_m <= 0:
            raise RouteUnavailableError("route has zero length")
        samples = [
            SamplePoint(s.coord, s.heading, s.distance_from_start, s.kind)
            for s in self._sample(route.polyline)
        ]
        result = PreviewResult(
            segments=[],
            route=route,
            destination_name=req.destination_name,
            generated_at=self._clock(),
        )
        prev_long: str | None = None
        approach: list[tuple[str, float]] = []
        for index, sample in enumerate(samples):
            segment = self._describe_segment(route, index, sample, prev_long)
            result.segments.append(segment)
            if segment.pano_id is not None:
                approach.append((segment.pano_id, sample.heading))
            if segment.triple is not None:
                prev_long = segment.triple.long
            if on_segment is not None:
                on_segment(segment)
        self._describe_destination_into(result, req, approach)
        return result

    def _sample(self, polyline: Polyline) -> list[SamplePoint]:
        from .geo import sample_route

        return sample_route(polyline, self._sampling)

    def _describe_segment(
        self, route: RouteResult, index: int, sample: SamplePoint, prev_long: str | None
    ) -> PreviewSegment:
        segment = PreviewSegment(index=index, sample=sample)
        try:
            pano = self._providers.panoramas.nearest_panorama(sample.coord)
        except NoCoverageError:
            segment.error = "imagery-unavailable"
            return segment
        segment.pano_id = pano.id
        kind = classify_point(route, sample, pano)
        segment.sample = SamplePoint(sample.coord, sample.heading, sample.distance_from_start, kind)
        segment.views = views_for(segment.sample, kind, pano.id)
        try:
            images = tuple(self._providers.imagery.render_view(v) for v in segment.views)
            places = self._providers.places.nearby_places(sample.coord, self._places_radius_m)
            segment.nearby_places = render_places(places)
            ctx = AgentContext(
                nearby_places=segment.nearby_places,
                prev_description=prev_long,
                current_heading=cardinal_of(sample.heading),
            )
            prompt = (
                build_intersection_prompt(ctx)
                if kind is PointKind.INTERSECTION
                else build_segment_prompt(ctx)
            )
            segment.prompt_text = prompt.text
            segment.triple = self._engine.ask_triple(prompt, images)
        except ScenescoutError as err:
            segment.error = err.code
        return segment

    def _describe_destination_into(
        self, result: PreviewResult, req: PreviewRequest, approach: list[tuple[str, float]]
    ) -> None:
        deduped: list[tuple[str, float]] = []
        for pano_id, heading in approach:
            if not deduped or deduped[-1][0] != pano_id:
                deduped.append((pano_id, heading))
        tail = deduped[-DESTINATION_APPROACH_PANOS:]
        if not tail:
            result.destination_error = "imagery-unavailable"
            return
        context = f"What does the area near {req.destination_name} look like?"
        try:
            result.destination, result.destination_views = describe_destination(
                self._engine, self._providers.imagery, tail, context, req.destination_name
            )
        except ScenescoutError as err:
            result.destination_error = err.code


def generate_preview(
    req: PreviewRequest,
    providers: ProviderSet,
    *,
    sampling: SamplingConfig = SamplingConfig(),
    places_radius_m: float = PLACES_RADIUS_M,
    clock: Callable[[], str] | None = None,
    on_segment: Callable[[PreviewSegment], None] | None = None,
) -> PreviewResult:
    generator = PreviewGenerator(
        providers, sampling=sampling, places_radius_m=places_radius_m, clock=clock
    )
    return generator.generate(req, on_segment=on_segment)

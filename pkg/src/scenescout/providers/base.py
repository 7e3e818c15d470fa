"""Provider contracts and the domain types they exchange.

All external data enters through these five interfaces: walking routes,
panorama metadata, rendered views, nearby places, and the multimodal
language model. Every interface has a live HTTP adapter (live.py) and a
deterministic file-backed fixture implementation (fixture.py).
"""

from __future__ import annotations

import enum
import hashlib
from dataclasses import dataclass, field
from typing import Protocol, runtime_checkable

from ..errors import InvalidArgumentError
from ..geo import Cardinal, GeoCoordinate, Polyline, normalize_heading

MAX_IMAGES_PER_REQUEST = 10


class ManeuverKind(enum.Enum):
    DEPART = "Depart"
    TURN_LEFT = "TurnLeft"
    TURN_RIGHT = "TurnRight"
    CONTINUE = "Continue"
    ARRIVE = "Arrive"
    CROSS_INTERSECTION = "CrossIntersection"


@dataclass(frozen=True)
class RouteStep:
    maneuver_kind: ManeuverKind
    location: GeoCoordinate
    street_name: str = ""


@dataclass(frozen=True)
class RouteResult:
    """Walking route: geometry plus ordered maneuver steps (Depart first, Arrive last)."""

    polyline: Polyline
    steps: tuple[RouteStep, ...]
    total_length_m: float

    def __post_init__(self):
        if not self.steps or self.steps[0].maneuver_kind is not ManeuverKind.DEPART:
            raise InvalidArgumentError("route steps must start with Depart")
        if self.steps[-1].maneuver_kind is not ManeuverKind.ARRIVE:
            raise InvalidArgumentError("route steps must end with Arrive")

    def to_dict(self) -> dict:
        return {
            "polyline": [[p.lat, p.lon] for p in self.polyline.points],
            "steps": [
                {
                    "maneuver": s.maneuver_kind.value,
                    "location": [s.location.lat, s.location.lon],
                    "street_name": s.street_name,
                }
                for s in self.steps
            ],
            "total_length_m": self.total_length_m,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RouteResult":
        return cls(
            polyline=Polyline(tuple(GeoCoordinate(lat, lon) for lat, lon in d["polyline"])),
            steps=tuple(
                RouteStep(
                    maneuver_kind=ManeuverKind(s["maneuver"]),
                    location=GeoCoordinate(*s["location"]),
                    street_name=s.get("street_name", ""),
                )
                for s in d["steps"]
            ),
            total_length_m=float(d["total_length_m"]),
        )


@dataclass(frozen=True)
class PanoramaLink:
    """Traversable edge to an adjacent panorama, tagged with its heading."""

    heading: float
    target: str
    street_name: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "heading", normalize_heading(self.heading))


@dataclass(frozen=True)
class PanoramaMeta:
    id: str
    coord: GeoCoordinate
    links: tuple[PanoramaLink, ...] = ()
    capture_date: str | None = None

    def __post_init__(self):
        if any(link.target == self.id for link in self.links):
            raise InvalidArgumentError(f"panorama {self.id} links to itself")


@dataclass(frozen=True)
class ViewRequest:
    """One perspective cut from a panorama."""

    pano: str
    heading: float
    fov_deg: float = 90.0
    pitch_deg: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "heading", normalize_heading(self.heading))
        if not 0.0 < self.fov_deg <= 120.0:
            raise InvalidArgumentError(f"fov {self.fov_deg} outside (0, 120]")
        if not -30.0 <= self.pitch_deg <= 30.0:
            raise InvalidArgumentError(f"pitch {self.pitch_deg} outside [-30, 30]")

    @property
    def stem(self) -> str:
        """Stable tile/image identifier: {pano}_h{heading:03}_f{fov:03}."""
        return f"{self.pano}_h{round(self.heading) % 360:03d}_f{round(self.fov_deg):03d}"

    def content_key(self) -> str:
        return f"{self.pano}|{self.heading:.4f}|{self.fov_deg:.4f}|{self.pitch_deg:.4f}"

    def to_dict(self) -> dict:
        return {"pano": self.pano, "heading": self.heading, "fov_deg": self.fov_deg, "pitch_deg": self.pitch_deg}

    @classmethod
    def from_dict(cls, d: dict) -> "ViewRequest":
        return cls(d["pano"], d["heading"], d.get("fov_deg", 90.0), d.get("pitch_deg", 0.0))


@dataclass(frozen=True)
class ImageRef:
    """Rendered view bytes plus the request that produced them."""

    data: bytes
    media_type: str
    source_view: ViewRequest

    def __post_init__(self):
        if not self.data:
            raise InvalidArgumentError("image payload must be non-empty")

    @property
    def stem(self) -> str:
        return self.source_view.stem

    def sha256(self) -> str:
        return hashlib.sha256(self.data).hexdigest()


@dataclass(frozen=True)
class Place:
    name: str
    category: str
    coord: GeoCoordinate
    distance_m: float
    relative_direction: Cardinal

    def __post_init__(self):
        if self.distance_m < 0:
            raise InvalidArgumentError("place distance must be >= 0")


@dataclass(frozen=True)
class MllmRequest:
    """One model call: rendered prompt text plus attached images.

    template_id names the prompt template the text was rendered from; the
    scripted fixture model keys canned responses on it.
    """

    template_id: str
    system_and_user_text: str
    images: tuple[ImageRef, ...] = ()
    max_tokens: int = 1024
    temperature: float = 0.2

    def __post_init__(self):
        if not self.system_and_user_text:
            raise InvalidArgumentError("request text must be non-empty")
        if len(self.images) > MAX_IMAGES_PER_REQUEST:
            raise InvalidArgumentError(
                f"{len(self.images)} images exceed the provider limit of {MAX_IMAGES_PER_REQUEST}"
            )
        if self.temperature < 0:
            raise InvalidArgumentError("temperature must be >= 0")


@runtime_checkable
class RouteProvider(Protocol):
    def get_route(self, origin: GeoCoordinate, destination: GeoCoordinate) -> RouteResult: ...


@runtime_checkable
class PanoramaProvider(Protocol):
    def nearest_panorama(self, coord: GeoCoordinate) -> PanoramaMeta: ...

    def panorama_by_id(self, pano_id: str) -> PanoramaMeta: ...


@runtime_checkable
class ImageryProvider(Protocol):
    def render_view(self, req: ViewRequest) -> ImageRef: ...


@runtime_checkable
class PlacesProvider(Protocol):
    def nearby_places(self, coord: GeoCoordinate, radius_m: float) -> list[Place]: ...


@runtime_checkable
class MllmProvider(Protocol):
    def complete(self, req: MllmRequest) -> str: ...


@dataclass
class ProviderSet:
    """The full provider stack a session runs against."""

    routes: RouteProvider
    panoramas: PanoramaProvider
    imagery: ImageryProvider
    places: PlacesProvider
    mllm: MllmProvider
    snap_radius_m: float = 25.0


def validate_radius(radius_m: float) -> None:
    if not 0.0 < radius_m <= 500.0:
        raise InvalidArgumentError(f"radius {radius_m} outside (0, 500]")

"""Deterministic file-backed providers.

A fixture bundle is a directory of human-authorable JSON plus a tiles/
directory of images:

    bundle/
      routes.json       {"routes": [{"polyline": [[lat, lon], ...], "steps": [...], ...}]}
      panoramas.json    {"panoramas": [{"id", "lat", "lon", "links": [...], ...}]}
      places.json       {"places": [{"name", "category", "lat", "lon"}]}
      mllm_script.json  {"script": {"<key>": "<canned response text>"}}
      tiles/            {pano}_h{heading:03}_f{fov:03}.png

Every provider here is a pure function of (bundle, request): repeated calls
return byte-identical results.

Scripted model keys, most specific first:
  1. "{template_id}:{view stems, comma-joined}"   e.g. "direction:ix_h000_f090"
  2. "{template_id}:{distinct pano ids, comma-joined}"   e.g. "segment:pano12"
Image-less calls use "{template_id}:-".
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from ..errors import (
    InvalidArgumentError,
    NoCoverageError,
    NotFoundError,
    RouteUnavailableError,
    ScriptedMissError,
)
from ..geo import GeoCoordinate, cardinal_of, haversine_distance, initial_bearing
from ..serde import read_json
from .base import (
    ImageRef,
    MllmRequest,
    PanoramaLink,
    PanoramaMeta,
    Place,
    RouteResult,
    ViewRequest,
    validate_radius,
)

ENDPOINT_MATCH_RADIUS_M = 50.0


@dataclass
class FixtureBundle:
    routes: list[RouteResult]
    panoramas: dict[str, PanoramaMeta]
    places: list[tuple[str, str, GeoCoordinate]]
    script: dict[str, str]
    tiles_dir: Path | None = None
    tiles: dict[str, bytes] = field(default_factory=dict)

    @classmethod
    def load(cls, bundle_dir: str | Path) -> "FixtureBundle":
        bundle_dir = Path(bundle_dir)
        if not bundle_dir.is_dir():
            raise NotFoundError(f"fixture bundle directory {bundle_dir} does not exist")
        routes = [RouteResult.from_dict(r) for r in read_json(bundle_dir / "routes.json")["routes"]]
        panoramas = {}
        for p in read_json(bundle_dir / "panoramas.json")["panoramas"]:
            meta = PanoramaMeta(
                id=p["id"],
                coord=GeoCoordinate(p["lat"], p["lon"]),
                links=tuple(
                    PanoramaLink(heading=l["heading"], target=l["target"], street_name=l.get("street_name"))
                    for l in p.get("links", ())
                ),
                capture_date=p.get("capture_date"),
            )
            panoramas[meta.id] = meta
        places = [
            (pl["name"], pl["category"], GeoCoordinate(pl["lat"], pl["lon"]))
            for pl in read_json(bundle_dir / "places.json")["places"]
        ]
        script = dict(read_json(bundle_dir / "mllm_script.json")["script"])
        return cls(routes=routes, panoramas=panoramas, places=places, script=script, tiles_dir=bundle_dir / "tiles")

    def tile_bytes(self, stem: str) -> bytes | None:
        if stem in self.tiles:
            return self.tiles[stem]
        if self.tiles_dir is not None:
            for ext in ("png", "jpg", "jpeg"):
                path = self.tiles_dir / f"{stem}.{ext}"
                if path.is_file():
                    data = path.read_bytes()
                    self.tiles[stem] = data
                    return data
        return None


class FixtureRouteProvider:
    def __init__(self, bundle: FixtureBundle):
        self._bundle = bundle

    def get_route(self, origin: GeoCoordinate, destination: GeoCoordinate) -> RouteResult:
        if origin == destination:
            raise RouteUnavailableError("origin equals destination")
        for route in self._bundle.routes:
            start, end = route.polyline.points[0], route.polyline.points[-1]
            if (
                haversine_distance(origin, start) <= ENDPOINT_MATCH_RADIUS_M
                and haversine_distance(destination, end) <= ENDPOINT_MATCH_RADIUS_M
            ):
                return route
        raise RouteUnavailableError(
            f"no fixture route from ({origin.lat:.5f},{origin.lon:.5f}) "
            f"to ({destination.lat:.5f},{destination.lon:.5f})"
        )


class FixturePanoramaProvider:
    def __init__(self, bundle: FixtureBundle, snap_radius_m: float = 25.0):
        self._bundle = bundle
        self.snap_radius_m = snap_radius_m

    def nearest_panorama(self, coord: GeoCoordinate) -> PanoramaMeta:
        best: PanoramaMeta | None = None
        best_d = float("inf")
        for meta in self._bundle.panoramas.values():
            d = haversine_distance(coord, meta.coord)
            if d < best_d or (d == best_d and best is not None and meta.id < best.id):
                best, best_d = meta, d
        if best is None or best_d > self.snap_radius_m:
            raise NoCoverageError(
                f"no panorama within {self.snap_radius_m} m of ({coord.lat:.5f},{coord.lon:.5f})"
            )
        return best

    def panorama_by_id(self, pano_id: str) -> PanoramaMeta:
        try:
            return self._bundle.panoramas[pano_id]
        except KeyError:
            raise NotFoundError(f"unknown panorama {pano_id!r}") from None


class FixtureImageryProvider:
    def __init__(self, bundle: FixtureBundle):
        self._bundle = bundle

    def render_view(self, req: ViewRequest) -> ImageRef:
        if req.pano not in self._bundle.panoramas:
            raise NotFoundError(f"unknown panorama {req.pano!r}")
        data = self._bundle.tile_bytes(req.stem)
        if data is None:
            raise NotFoundError(f"no fixture tile for view {req.stem!r}")
        return ImageRef(data=data, media_type="image/png", source_view=req)


class FixturePlacesProvider:
    def __init__(self, bundle: FixtureBundle):
        self._bundle = bundle

    def nearby_places(self, coord: GeoCoordinate, radius_m: float) -> list[Place]:
        validate_radius(radius_m)
        found = []
        for name, category, place_coord in self._bundle.places:
            d = haversine_distance(coord, place_coord)
            if d <= radius_m:
                direction = cardinal_of(initial_bearing(coord, place_coord)) if d > 0 else "North"
                found.append(Place(name, category, place_coord, d, direction))
        found.sort(key=lambda p: (p.distance_m, p.name))
        return found


def script_keys(req: MllmRequest) -> list[str]:
    """Candidate script keys for a request, most specific first."""
    if not req.images:
        return [f"{req.template_id}:-"]
    stems = ",".join(img.stem for img in req.images)
    panos = ",".join(dict.fromkeys(img.source_view.pano for img in req.images))
    return [f"{req.template_id}:{stems}", f"{req.template_id}:{panos}"]


class ScriptedMllmProvider:
    """Returns canned responses; raises ScriptedMissError for unauthored calls."""

    def __init__(self, script: dict[str, str]):
        if not isinstance(script, dict):
            raise InvalidArgumentError("script must be a mapping of key -> response text")
        self._script = dict(script)

    def complete(self, req: MllmRequest) -> str:
        keys = script_keys(req)
        for key in keys:
            if key in self._script:
                return self._script[key]
        raise ScriptedMissError(keys[0])

"""Live HTTP adapters for the provider contracts.

The adapters speak a provider-neutral JSON protocol so any map backend can
be bridged with a thin proxy; the MLLM adapter speaks the ubiquitous
chat-completions wire format with base64 image attachments. Endpoint
shapes:

    GET  {maps}/route?origin_lat&origin_lon&dest_lat&dest_lon      -> routes.json route object
    GET  {maps}/panoramas/nearest?lat&lon&radius_m                 -> panoramas.json panorama object
    GET  {maps}/panoramas/{id}                                     -> panoramas.json panorama object
    GET  {maps}/view?pano&heading&fov&pitch&size                   -> image bytes
    GET  {maps}/places?lat&lon&radius_m                            -> {"places": [{name, category, lat, lon}]}
    POST {mllm}/chat/completions                                   -> chat-completions JSON

Retries: idempotent GETs up to the policy cap, the non-idempotent model
call at most once, exponential backoff with bounded jitter throughout.
"""

from __future__ import annotations

import base64
import random
from typing import Callable

import httpx

from ..errors import NoCoverageError, NotFoundError, ProviderError, RouteUnavailableError
from ..geo import GeoCoordinate, cardinal_of, haversine_distance, initial_bearing
from .base import (
    ImageRef,
    MllmRequest,
    PanoramaLink,
    PanoramaMeta,
    Place,
    RouteResult,
    ViewRequest,
)
from .retry import RetryPolicy, TokenBucket, with_retries

DEFAULT_VIEW_SIZE = "640x640"


def _raise_for(resp: httpx.Response) -> None:
    if resp.status_code == 404:
        raise NotFoundError(resp.text[:200])
    if resp.status_code == 429:
        retry_after = resp.headers.get("Retry-After")
        raise ProviderError(
            "rate limited",
            retryable=True,
            retry_after=float(retry_after) if retry_after else None,
        )
    if resp.status_code >= 500:
        raise ProviderError(f"server error {resp.status_code}", retryable=True)
    if resp.status_code >= 400:
        raise ProviderError(f"request rejected {resp.status_code}: {resp.text[:200]}", retryable=False)


class HttpClientBase:
    def __init__(
        self,
        base_url: str,
        *,
        api_key: str | None = None,
        timeout_s: float = 30.0,
        retry: RetryPolicy | None = None,
        limiter: TokenBucket | None = None,
        transport: httpx.BaseTransport | None = None,
        rng: random.Random | None = None,
        sleep: Callable[[float], None] | None = None,
    ):
        headers = {"Authorization": f"Bearer {api_key}"} if api_key else {}
        self._client = httpx.Client(
            base_url=base_url.rstrip("/"), headers=headers, timeout=timeout_s, transport=transport
        )
        self._retry = retry or RetryPolicy()
        self._limiter = limiter
        self._rng = rng or random.Random()
        self._sleep = sleep or (lambda s: __import__("time").sleep(s))

    def _request(self, method: str, path: str, *, idempotent: bool, **kwargs) -> httpx.Response:
        def once() -> httpx.Response:
            if self._limiter is not None:
                self._limiter.acquire(sleep=self._sleep)
            try:
                resp = self._client.request(method, path, **kwargs)
            except httpx.TimeoutException as err:
                raise ProviderError(f"timeout calling {path}: {err}", retryable=True) from err
            except httpx.HTTPError as err:
                raise ProviderError(f"transport failure calling {path}: {err}", retryable=True) from err
            _raise_for(resp)
            return resp

        return with_retries(once, self._retry, idempotent=idempotent, rng=self._rng, sleep=self._sleep)

    def close(self) -> None:
        self._client.close()


class HttpRouteProvider(HttpClientBase):
    def get_route(self, origin: GeoCoordinate, destination: GeoCoordinate) -> RouteResult:
        if origin == destination:
            raise RouteUnavailableError("origin equals destination")
        resp = self._request(
            "GET",
            "/route",
            idempotent=True,
            params={
                "origin_lat": origin.lat,
                "origin_lon": origin.lon,
                "dest_lat": destination.lat,
                "dest_lon": destination.lon,
                "mode": "walking",
            },
        )
        body = resp.json()
        if body.get("status") == "no_route" or not body.get("polyline"):
            raise RouteUnavailableError("provider returned no route")
        return RouteResult.from_dict(body)


class HttpPanoramaProvider(HttpClientBase):
    def __init__(self, *args, snap_radius_m: float = 25.0, **kwargs):
        super().__init__(*args, **kwargs)
        self.snap_radius_m = snap_radius_m

    @staticmethod
    def _meta_from(body: dict) -> PanoramaMeta:
        return PanoramaMeta(
            id=body["id"],
            coord=GeoCoordinate(body["lat"], body["lon"]),
            links=tuple(
                PanoramaLink(heading=l["heading"], target=l["target"], street_name=l.get("street_name"))
                for l in body.get("links", ())
            ),
            capture_date=body.get("capture_date"),
        )

    def nearest_panorama(self, coord: GeoCoordinate) -> PanoramaMeta:
        try:
            resp = self._request(
                "GET",
                "/panoramas/nearest",
                idempotent=True,
                params={"lat": coord.lat, "lon": coord.lon, "radius_m": self.snap_radius_m},
            )
        except NotFoundError:
            raise NoCoverageError(
                f"no panorama within {self.snap_radius_m} m of ({coord.lat:.5f},{coord.lon:.5f})"
            ) from None
        return self._meta_from(resp.json())

    def panorama_by_id(self, pano_id: str) -> PanoramaMeta:
        resp = self._request("GET", f"/panoramas/{pano_id}", idempotent=True)
        return self._meta_from(resp.json())


class HttpImageryProvider(HttpClientBase):
    def __init__(self, *args, view_size: str = DEFAULT_VIEW_SIZE, **kwargs):
        super().__init__(*args, **kwargs)
        self.view_size = view_size

    def render_view(self, req: ViewRequest) -> ImageRef:
        resp = self._request(
            "GET",
            "/view",
            idempotent=True,
            params={
                "pano": req.pano,
                "heading": req.heading,
                "fov": req.fov_deg,
                "pitch": req.pitch_deg,
                "size": self.view_size,
            },
        )
        media_type = resp.headers.get("Content-Type", "image/jpeg").split(";")[0]
        return ImageRef(data=resp.content, media_type=media_type, source_view=req)


class HttpPlacesProvider(HttpClientBase):
    def nearby_places(self, coord: GeoCoordinate, radius_m: float) -> list[Place]:
        from .base import validate_radius

        validate_radius(radius_m)
        resp = self._request(
            "GET",
            "/places",
            idempotent=True,
            params={"lat": coord.lat, "lon": coord.lon, "radius_m": radius_m},
        )
        places = []
        for raw in resp.json().get("places", ()):
            place_coord = GeoCoordinate(raw["lat"], raw["lon"])
            d = haversine_distance(coord, place_coord)
            if d > radius_m:
                continue
            direction = cardinal_of(initial_bearing(coord, place_coord)) if d > 0 else "North"
            places.append(Place(raw["name"], raw.get("category", ""), place_coord, d, direction))
        places.sort(key=lambda p: (p.distance_m, p.name))
        return places


class HttpMllmProvider(HttpClientBase):
    """Chat-completions adapter; images attached as base64 data URLs."""

    def __init__(self, *args, model: str = "gpt-4o", **kwargs):
        super().__init__(*args, **kwargs)
        self.model = model

    def complete(self, req: MllmRequest) -> str:
        content: list[dict] = [{"type": "text", "text": req.system_and_user_text}]
        for image in req.images:
            encoded = base64.b64encode(image.data).decode("ascii")
            content.append(
                {"type": "image_url", "image_url": {"url": f"data:{image.media_type};base64,{encoded}"}}
            )
        payload = {
            "model": self.model,
            "messages": [{"role": "user", "content": content}],
            "max_tokens": req.max_tokens,
            "temperature": req.temperature,
        }
        resp = self._request("POST", "/chat/completions", idempotent=False, json=payload)
        body = resp.json()
        try:
            return body["choices"][0]["message"]["content"]
        except (KeyError, IndexError, TypeError) as err:
            raise ProviderError(f"malformed completion payload: {err}", retryable=False) from err

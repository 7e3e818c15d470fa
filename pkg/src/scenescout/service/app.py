"""HTTP service exposing Route Preview and Virtual Exploration.

All endpoints live under /v1. Preview generation runs as a background job
with status polling (pending/partial/complete/failed); exploration step and
choose are synchronous but bounded by a per-call timeout, after which the
call returns 502-retryable and the session is left untouched (operations
run on a replayed clone and are committed only on success).

Every state-mutating endpoint honors an Idempotency-Key header: a repeated
POST with the same key returns the first response verbatim.
"""

from __future__ import annotations

import threading
import uuid
from concurrent.futures import ThreadPoolExecutor
from concurrent.futures import TimeoutError as FutureTimeoutError
from typing import Callable

from fastapi import FastAPI, Header, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from .. import __version__
from ..errors import (
    ConfigError,
    InvalidArgumentError,
    NoCoverageError,
    NotFoundError,
    ParseError,
    ProviderError,
    RouteUnavailableError,
    ScenescoutError,
    ScriptedMissError,
    SessionStateError,
    ValidationError,
)
from ..exploration import ExplorationEngine, ExplorationSession, SessionStatus, replay
from ..geo import GeoCoordinate, SamplingConfig
from ..preview import PreviewGenerator, PreviewRequest
from ..providers import (
    CachingImageryProvider,
    HttpImageryProvider,
    HttpMllmProvider,
    HttpPanoramaProvider,
    HttpPlacesProvider,
    HttpRouteProvider,
    LruImageCache,
    ProviderSet,
    RetryPolicy,
    TokenBucket,
    fixture_provider_set,
)
from .config import ServiceConfig
from .store import IdempotencyStore, PreviewStore, SessionStore


class Coordinate(BaseModel):
    lat: float
    lon: float

    def to_geo(self) -> GeoCoordinate:
        return GeoCoordinate(self.lat, self.lon)


class PreviewBody(BaseModel):
    origin: Coordinate
    destination: Coordinate
    destination_name: str = Field(min_length=1)


class ExploreBody(BaseModel):
    intent: str = Field(min_length=1)
    start: Coordinate


class KeywordsBody(BaseModel):
    additions: list[str] = Field(default_factory=list)


class ChooseBody(BaseModel):
    idx: int


def build_provider_set(config: ServiceConfig) -> ProviderSet:
    if config.provider_mode == "fixture":
        return fixture_provider_set(
            config.bundle_dir,
            snap_radius_m=config.snap_radius_m,
            cache_budget_bytes=config.cache_budget_bytes,
        )
    retry = RetryPolicy(max_retries=config.max_retries)
    limiter = TokenBucket(config.rate_limit_per_s, config.rate_limit_burst)
    maps = dict(base_url=config.maps_base_url, api_key=config.maps_api_key, retry=retry, limiter=limiter)
    return ProviderSet(
        routes=HttpRouteProvider(**maps),
        panoramas=HttpPanoramaProvider(**maps, snap_radius_m=config.snap_radius_m),
        imagery=CachingImageryProvider(
            HttpImageryProvider(**maps), LruImageCache(config.cache_budget_bytes)
        ),
        places=HttpPlacesProvider(**maps),
        mllm=HttpMllmProvider(
            base_url=config.mllm_base_url,
            api_key=config.mllm_api_key,
            retry=retry,
            limiter=limiter,
            model=config.model_id,
        ),
        snap_radius_m=config.snap_radius_m,
    )


_STATUS_FOR = [
    (SessionStateError, 409),
    (NotFoundError, 404),
    (ScriptedMissError, 502),
    (ProviderError, 502),
    (ParseError, 502),
    (RouteUnavailableError, 400),
    (NoCoverageError, 400),
    (ValidationError, 400),
    (InvalidArgumentError, 400),
    (ConfigError, 500),
]


def _http_status(err: ScenescoutError) -> int:
    for klass, status in _STATUS_FOR:
        if isinstance(err, klass):
            return status
    return 500


def _error_body(err: ScenescoutError) -> dict:
    body = {"code": err.code, "message": str(err), "detail": None}
    if isinstance(err, ProviderError):
        body["retryable"] = err.retryable
    elif isinstance(err, (ScriptedMissError, ParseError)):
        body["retryable"] = False
    return body


def create_app(config: ServiceConfig, *, providers: ProviderSet | None = None) -> FastAPI:
    config.validate()
    app = FastAPI(title="scenescout", version=__version__)
    providers = providers or build_provider_set(config)
    sessions = SessionStore(config.data_dir)
    previews = PreviewStore(config.data_dir)
    idempotency = IdempotencyStore(config.data_dir)
    executor = ThreadPoolExecutor(max_workers=8, thread_name_prefix="scenescout-op")
    explore_engine = ExplorationEngine(
        providers, step_budget=config.step_budget, places_radius_m=config.places_radius_m
    )
    preview_generator = PreviewGenerator(
        providers,
        sampling=SamplingConfig(config.min_interval_m, config.max_interval_m),
        places_radius_m=config.places_radius_m,
    )
    app.state.config = config
    app.state.providers = providers
    app.state.sessions = sessions
    app.state.previews = previews

    @app.exception_handler(ScenescoutError)
    async def scenescout_error_handler(request: Request, err: ScenescoutError):
        return JSONResponse(status_code=_http_status(err), content=_error_body(err))

    @app.exception_handler(RequestValidationError)
    async def validation_error_handler(request: Request, err: RequestValidationError):
        return JSONResponse(
            status_code=400,
            content={"code": "validation", "message": "invalid request body", "detail": err.errors()},
        )

    def replay_idempotent(scope: str, key: str | None) -> JSONResponse | None:
        if key:
            stored = idempotency.get(scope, key)
            if stored is not None:
                return JSONResponse(status_code=stored["status_code"], content=stored["body"])
        return None

    def remember(scope: str, key: str | None, status_code: int, body: dict) -> None:
        if key:
            idempotency.put(scope, key, status_code, body)

    def run_session_op(
        session_id: str, op: Callable[[ExplorationSession], dict]
    ) -> dict:
        """Clone-run-commit with the per-call timeout; uncommitted on failure."""
        with sessions.lock(session_id):
            base_events = sessions.events(session_id)
            clone = replay(session_id, base_events)
            future = executor.submit(op, clone)
            try:
                body = future.result(timeout=config.call_timeout_s)
            except FutureTimeoutError:
                raise ProviderError(
                    f"operation exceeded {config.call_timeout_s}s; session unchanged", retryable=True
                ) from None
            sessions.commit(clone, clone.history[len(base_events):])
            return body

    def spawn_preview(preview_id: str, body: PreviewBody) -> None:
        doc = {
            "schema": "preview.v1",
            "preview_id": preview_id,
            "status": "pending",
            "error": None,
            "destination_name": body.destination_name,
            "segments": [],
        }
        previews.put(preview_id, doc)

        def job() -> None:
            segments_done: list[dict] = []

            def on_segment(segment) -> None:
                segments_done.append(segment.to_dict())
                partial = dict(doc, status="partial", segments=list(segments_done))
                previews.put(preview_id, partial)

            try:
                result = preview_generator.generate(
                    PreviewRequest(
                        origin=body.origin.to_geo(),
                        destination=body.destination.to_geo(),
                        destination_name=body.destination_name,
                    ),
                    on_segment=on_segment,
                )
            except ScenescoutError as err:
                previews.put(
                    preview_id,
                    dict(doc, status="failed", error=err.code, segments=list(segments_done)),
                )
                return
            final = result.to_dict()
            final.update({"preview_id": preview_id, "status": "complete", "error": None})
            previews.put(preview_id, final)

        threading.Thread(target=job, name=f"preview-{preview_id}", daemon=True).start()

    @app.get("/v1/health")
    def health() -> dict:
        return {
            "status": "ok",
            "version": __version__,
            "provider_mode": config.provider_mode,
            "schemas": ["preview.v1", "exploration.v1", "eval.v1"],
        }

    @app.post("/v1/preview", status_code=202)
    def create_preview(body: PreviewBody, idempotency_key: str | None = Header(default=None)):
        scope = "POST /v1/preview"
        replayed = replay_idempotent(scope, idempotency_key)
        if replayed is not None:
            return replayed
        preview_id = uuid.uuid4().hex[:12]
        spawn_preview(preview_id, body)
        response = {"preview_id": preview_id}
        remember(scope, idempotency_key, 202, response)
        return response

    @app.get("/v1/preview/{preview_id}")
    def get_preview(preview_id: str) -> dict:
        return previews.get(preview_id)

    @app.post("/v1/explore", status_code=201)
    def create_session(body: ExploreBody, idempotency_key: str | None = Header(default=None)):
        scope = "POST /v1/explore"
        replayed = replay_idempotent(scope, idempotency_key)
        if replayed is not None:
            return replayed
        session_id = uuid.uuid4().hex[:12]
        future = executor.submit(
            explore_engine.start_session, body.intent, body.start.to_geo(), session_id=session_id
        )
        try:
            session = future.result(timeout=config.call_timeout_s)
        except FutureTimeoutError:
            raise ProviderError("session start timed out", retryable=True) from None
        sessions.commit(session, session.history)
        response = {
            "session_id": session.id,
            "default_keywords": list(session.keywords),
            "status": session.status.value,
        }
        remember(scope, idempotency_key, 201, response)
        return response

    @app.post("/v1/explore/{session_id}/keywords")
    def add_keywords(
        session_id: str, body: KeywordsBody, idempotency_key: str | None = Header(default=None)
    ):
        scope = f"POST /v1/explore/{session_id}/keywords"
        replayed = replay_idempotent(scope, idempotency_key)
        if replayed is not None:
            return replayed

        def op(session: ExplorationSession) -> dict:
            explore_engine.add_keywords(session, body.additions)
            return {"keywords": list(session.keywords), "status": session.status.value}

        response = run_session_op(session_id, op)
        remember(scope, idempotency_key, 200, response)
        return response

    @app.post("/v1/explore/{session_id}/step")
    def step(session_id: str, idempotency_key: str | None = Header(default=None)):
        scope = f"POST /v1/explore/{session_id}/step"
        replayed = replay_idempotent(scope, idempotency_key)
        if replayed is not None:
            return replayed

        def op(session: ExplorationSession) -> dict:
            if session.status is not SessionStatus.WALKING:
                raise SessionStateError("step", session.status.value)
            triple = explore_engine.describe_block(session)
            block_error = None if triple else session.history[-1].get("error")
            moved_from = session.position
            explore_engine.step_forward(session)
            return {
                "block": triple.to_dict() if triple else None,
                "block_error": block_error,
                "moved": {"from": moved_from, "to": session.position},
                "position": session.position,
                "heading": session.heading,
                "status": session.status.value,
                "at_intersection": session.status is SessionStatus.AT_INTERSECTION,
            }

        response = run_session_op(session_id, op)
        remember(scope, idempotency_key, 200, response)
        return response

    @app.get("/v1/explore/{session_id}/directions")
    def directions(session_id: str):
        def op(session: ExplorationSession) -> dict:
            options = explore_engine.enumerate_directions(session)
            if len(options) >= 2 and not _suggestion_attempted(session):
                options = explore_engine.suggest_direction(session, options)
            return {"options": [o.to_dict() for o in options], "status": session.status.value}

        return run_session_op(session_id, op)

    @app.post("/v1/explore/{session_id}/choose")
    def choose(
        session_id: str, body: ChooseBody, idempotency_key: str | None = Header(default=None)
    ):
        scope = f"POST /v1/explore/{session_id}/choose"
        replayed = replay_idempotent(scope, idempotency_key)
        if replayed is not None:
            return replayed

        def op(session: ExplorationSession) -> dict:
            explore_engine.choose_direction(session, body.idx)
            return {
                "position": session.position,
                "heading": session.heading,
                "status": session.status.value,
                "at_intersection": session.status is SessionStatus.AT_INTERSECTION,
            }

        response = run_session_op(session_id, op)
        remember(scope, idempotency_key, 200, response)
        return response

    @app.post("/v1/explore/{session_id}/end")
    def end(session_id: str, idempotency_key: str | None = Header(default=None)):
        scope = f"POST /v1/explore/{session_id}/end"
        replayed = replay_idempotent(scope, idempotency_key)
        if replayed is not None:
            return replayed

        def op(session: ExplorationSession) -> dict:
            explore_engine.end_session(session)
            return {"status": session.status.value}

        response = run_session_op(session_id, op)
        remember(scope, idempotency_key, 200, response)
        return response

    @app.get("/v1/explore/{session_id}/state")
    def state(session_id: str) -> dict:
        return sessions.get(session_id).snapshot()

    if config.static_dir:
        app.mount("/", StaticFiles(directory=config.static_dir, html=True), name="static")

    return app


def _suggestion_attempted(session: ExplorationSession) -> bool:
    """True when the latest directions-offered already got a suggestion pass."""
    for event in reversed(session.history):
        if event["type"] == "suggestion-made":
            return True
        if event["type"] == "directions-offered":
            return False
    return False

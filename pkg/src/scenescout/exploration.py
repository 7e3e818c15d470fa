"""Virtual Exploration: an intent-conditioned session over the panorama graph.

The human chooses a direction at each intersection; the agent moves along
panorama links, describes blocks, and suggests the direction that best
matches the stated intent. Session state is event-sourced: every operation
appends self-contained events to the history, and replaying the history
reconstructs the live state exactly (no provider access needed).

Status machine: AwaitingKeywords -> Walking <-> AtIntersection -> Ended.
Operations invoked outside their status raise SessionStateError.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .errors import (
    InvalidArgumentError,
    InvalidChoiceError,
    ScenescoutError,
    SessionStateError,
)
from .geo import GeoCoordinate, cardinal_of, heading_difference
from .prompts import (
    AgentContext,
    DescriptionTriple,
    DirectionDescription,
    PromptEngine,
    build_direction_prompt,
    build_exploration_block_prompt,
    build_keywords_prompt,
    build_place_type_prompt,
    build_selector_prompt,
    render_places,
)
from .providers.base import PanoramaMeta, ProviderSet, ViewRequest
from .serde import canonical_dumps

SCHEMA_VERSION = "exploration.v1"
MAX_LINK_DEVIATION_DEG = 45.0
INTERSECTION_LINK_DEGREE = 3
DEFAULT_STEP_BUDGET = 200
PLACES_RADIUS_M = 100.0
PLACEHOLDER_BODY = "Description unavailable for this direction."
UNNAMED_STREET = "unnamed street"


class SessionStatus(enum.Enum):
    AWAITING_KEYWORDS = "AwaitingKeywords"
    WALKING = "Walking"
    AT_INTERSECTION = "AtIntersection"
    ENDED = "Ended"


ALLOWED_TRANSITIONS: dict[SessionStatus, frozenset[SessionStatus]] = {
    SessionStatus.AWAITING_KEYWORDS: frozenset(
        {SessionStatus.AWAITING_KEYWORDS, SessionStatus.WALKING, SessionStatus.ENDED}
    ),
    SessionStatus.WALKING: frozenset(
        {SessionStatus.WALKING, SessionStatus.AT_INTERSECTION, SessionStatus.ENDED}
    ),
    SessionStatus.AT_INTERSECTION: frozenset(
        {SessionStatus.WALKING, SessionStatus.AT_INTERSECTION, SessionStatus.ENDED}
    ),
    SessionStatus.ENDED: frozenset(),
}


@dataclass
class DirectionOption:
    idx: int
    street_name: str
    heading: float
    cardinal: str
    target: str
    description: DirectionDescription
    suggested: bool = False
    is_reverse: bool = False

    def to_dict(self) -> dict:
        return {
            "idx": self.idx,
            "street_name": self.street_name,
            "heading": self.heading,
            "cardinal": self.cardinal,
            "target": self.target,
            "body": self.description.body,
            "suggested": self.suggested,
            "is_reverse": self.is_reverse,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "DirectionOption":
        return cls(
            idx=d["idx"],
            street_name=d["street_name"],
            heading=d["heading"],
            cardinal=d["cardinal"],
            target=d["target"],
            description=DirectionDescription(d["street_name"], d["cardinal"], d["body"]),
            suggested=d["suggested"],
            is_reverse=d["is_reverse"],
        )


@dataclass
class ExplorationSession:
    id: str
    intent: str
    place_type: str = ""
    keywords: tuple[str, ...] = ()
    position: str = ""
    heading: float = 0.0
    status: SessionStatus = SessionStatus.AWAITING_KEYWORDS
    visited_edges: set[tuple[str, str]] = field(default_factory=set)
    history: list[dict] = field(default_factory=list)
    pending_options: list[DirectionOption] | None = None
    steps_remaining: int = DEFAULT_STEP_BUDGET
    prev_block_long: str | None = None
    arrived_from: str | None = None

    def snapshot(self) -> dict:
        return {
            "id": self.id,
            "intent": self.intent,
            "place_type": self.place_type,
            "keywords": list(self.keywords),
            "position": self.position,
            "heading": self.heading,
            "status": self.status.value,
            "visited_edges": sorted(list(edge) for edge in self.visited_edges),
            "pending_options": [o.to_dict() for o in self.pending_options] if self.pending_options else None,
            "steps_remaining": self.steps_remaining,
            "prev_block_long": self.prev_block_long,
            "arrived_from": self.arrived_from,
        }

    def log_dict(self) -> dict:
        return {"schema": SCHEMA_VERSION, "session_id": self.id, "events": self.history}

    def to_log_json(self) -> str:
        return canonical_dumps(self.log_dict())


def _apply(session: ExplorationSession, event: dict) -> None:
    """Append an event, enforcing the status transition table."""
    new_status = SessionStatus(event["status_after"])
    if session.history:
        if new_status is not session.status and new_status not in ALLOWED_TRANSITIONS[session.status]:
            raise SessionStateError(event["type"], session.status.value)
    session.history.append(event)
    _fold(session, event)


def _fold(session: ExplorationSession, event: dict) -> None:
    kind = event["type"]
    if kind == "session-started":
        session.intent = event["intent"]
        session.place_type = event["place_type"]
        session.keywords = tuple(event["keywords"])
        session.position = event["position"]
        session.heading = event["heading"]
        session.steps_remaining = event["step_budget"]
    elif kind == "keywords-added":
        session.keywords = tuple(event["keywords"])
    elif kind == "block-described":
        session.prev_block_long = event["triple"]["long"]
    elif kind == "block-failed":
        pass
    elif kind == "stepped":
        session.visited_edges.add((event["from"], event["to"]))
        session.position = event["to"]
        session.heading = event["heading"]
        session.arrived_from = event["from"]
        session.steps_remaining = event["steps_remaining"]
        session.pending_options = None
    elif kind == "dead-end":
        pass
    elif kind == "directions-offered":
        session.pending_options = [DirectionOption.from_dict(o) for o in event["options"]]
    elif kind == "suggestion-made":
        if session.pending_options:
            for option in session.pending_options:
                option.suggested = event["idx"] is not None and option.idx == event["idx"]
    elif kind == "direction-chosen":
        session.visited_edges.add((event["from"], event["to"]))
        session.position = event["to"]
        session.heading = event["heading"]
        session.arrived_from = event["from"]
        session.steps_remaining = event["steps_remaining"]
        session.pending_options = None
    elif kind == "ended":
        pass
    else:
        raise InvalidArgumentError(f"unknown event type {kind!r}")
    session.status = SessionStatus(event["status_after"])


def replay(session_id: str, events: list[dict]) -> ExplorationSession:
    """Reconstruct a session purely from its event log."""
    if not events or events[0]["type"] != "session-started":
        raise InvalidArgumentError("event log must begin with session-started")
    session = ExplorationSession(id=session_id, intent=events[0]["intent"])
    for event in events:
        session.history.append(event)
        _fold(session, event)
    return session


class ExplorationEngine:
    def __init__(
        self,
        providers: ProviderSet,
        *,
        step_budget: int = DEFAULT_STEP_BUDGET,
        places_radius_m: float = PLACES_RADIUS_M,
        max_tokens: int = 1024,
    ):
        self._providers = providers
        self._step_budget = step_budget
        self._places_radius_m = places_radius_m
        self._engine = PromptEngine(providers.mllm, max_tokens=max_tokens)

    def _pano(self, pano_id: str) -> PanoramaMeta:
        return self._providers.panoramas.panorama_by_id(pano_id)

    def _require(self, session: ExplorationSession, op: str, *statuses: SessionStatus) -> None:
        if session.status not in statuses:
            raise SessionStateError(op, session.status.value)

    def start_session(self, intent: str, start: GeoCoordinate, *, session_id: str) -> ExplorationSession:
        if not intent or not intent.strip():
            raise InvalidArgumentError("intent must be non-empty")
        pano = self._providers.panoramas.nearest_panorama(start)
        keywords = self._engine.ask_keywords(build_keywords_prompt(intent))
        place_type = self._engine.ask_place_type(build_place_type_prompt(intent))
        heading = pano.links[0].heading if pano.links else 0.0
        session = ExplorationSession(id=session_id, intent=intent)
        _apply(
            session,
            {
                "type": "session-started",
                "intent": intent,
                "place_type": place_type,
                "keywords": list(dict.fromkeys(k.strip() for k in keywords if k.strip())),
                "position": pano.id,
                "heading": heading,
                "step_budget": self._step_budget,
                "status_after": SessionStatus.AWAITING_KEYWORDS.value,
            },
        )
        return session

    def add_keywords(self, session: ExplorationSession, additions: list[str]) -> ExplorationSession:
        self._require(session, "add_keywords", SessionStatus.AWAITING_KEYWORDS, SessionStatus.WALKING)
        merged = list(session.keywords)
        seen = {k.lower() for k in merged}
        for addition in additions:
            cleaned = addition.strip()
            if cleaned and cleaned.lower() not in seen:
                seen.add(cleaned.lower())
                merged.append(cleaned)
        status_after = (
            SessionStatus.WALKING
            if session.status is SessionStatus.AWAITING_KEYWORDS
            else session.status
        )
        _apply(
            session,
            {
                "type": "keywords-added",
                "additions": [a.strip() for a in additions],
                "keywords": merged,
                "status_after": status_after.value,
            },
        )
        return session

    def describe_block(self, session: ExplorationSession) -> DescriptionTriple | None:
        self._require(session, "describe_block", SessionStatus.WALKING)
        h = session.heading
        views = [ViewRequest(session.position, h + off, fov_deg=60.0) for off in (-60.0, 0.0, 60.0)]
        try:
            images = tuple(self._providers.imagery.render_view(v) for v in views)
            pano = self._pano(session.position)
            places = self._providers.places.nearby_places(pano.coord, self._places_radius_m)
            places_text = render_places(places)
            ctx = AgentContext(
                nearby_places=places_text,
                prev_description=session.prev_block_long,
                intent=session.intent,
                keywords=session.keywords,
                current_heading=cardinal_of(h),
            )
            prompt = build_exploration_block_prompt(ctx, session.place_type)
            triple = self._engine.ask_triple(prompt, images)
        except ScenescoutError as err:
            _apply(
                session,
                {
                    "type": "block-failed",
                    "position": session.position,
                    "error": err.code,
                    "status_after": SessionStatus.WALKING.value,
                },
            )
            return None
        _apply(
            session,
            {
                "type": "block-described",
                "position": session.position,
                "heading": h,
                "views": [v.stem for v in views],
                "nearby_places": places_text,
                "triple": triple.to_dict(),
                "status_after": SessionStatus.WALKING.value,
            },
        )
        return triple

    def step_forward(self, session: ExplorationSession) -> ExplorationSession:
        self._require(session, "step_forward", SessionStatus.WALKING)
        pano = self._pano(session.position)
        best = None
        best_dev = MAX_LINK_DEVIATION_DEG
        for link in pano.links:
            dev = heading_difference(link.heading, session.heading)
            if dev <= best_dev and (best is None or dev < best_dev):
                best, best_dev = link, dev
        if best is None:
            _apply(
                session,
                {
                    "type": "dead-end",
                    "position": session.position,
                    "heading": session.heading,
                    "status_after": SessionStatus.AT_INTERSECTION.value,
                },
            )
            return session
        target = self._pano(best.target)
        remaining = session.steps_remaining - 1
        if remaining <= 0:
            status_after = SessionStatus.ENDED
        elif len(target.links) >= INTERSECTION_LINK_DEGREE:
            status_after = SessionStatus.AT_INTERSECTION
        else:
            status_after = SessionStatus.WALKING
        _apply(
            session,
            {
                "type": "stepped",
                "from": session.position,
                "to": best.target,
                "heading": best.heading,
                "steps_remaining": remaining,
                "status_after": status_after.value,
            },
        )
        if status_after is SessionStatus.ENDED:
            _apply(session, {"type": "ended", "reason": "step-budget", "status_after": SessionStatus.ENDED.value})
        return session

    def enumerate_directions(self, session: ExplorationSession) -> list[DirectionOption]:
        self._require(session, "enumerate_directions", SessionStatus.AT_INTERSECTION)
        if session.pending_options is not None:
            return session.pending_options
        pano = self._pano(session.position)
        forward = []
        reverse = []
        for link in pano.links:
            if session.arrived_from is not None and link.target == session.arrived_from and not reverse:
                reverse.append(link)
            else:
                forward.append(link)
        ordered = forward + reverse
        options: list[DirectionOption] = []
        curr_cardinal = cardinal_of(session.heading)
        for idx, link in enumerate(ordered, start=1):
            street = link.street_name or UNNAMED_STREET
            link_cardinal = cardinal_of(link.heading)
            is_reverse = bool(reverse) and link is reverse[0]
            view = ViewRequest(session.position, link.heading, fov_deg=90.0)
            try:
                image = self._providers.imagery.render_view(view)
                prompt = build_direction_prompt(
                    session.intent, street, link_cardinal, curr_cardinal, session.place_type
                )
                body = self._engine.ask_direction_description(prompt, (image,))
            except ScenescoutError:
                body = PLACEHOLDER_BODY
            options.append(
                DirectionOption(
                    idx=idx,
                    street_name=street,
                    heading=link.heading,
                    cardinal=link_cardinal,
                    target=link.target,
                    description=DirectionDescription(street, link_cardinal, body),
                    is_reverse=is_reverse,
                )
            )
        _apply(
            session,
            {
                "type": "directions-offered",
                "position": session.position,
                "options": [o.to_dict() for o in options],
                "status_after": SessionStatus.AT_INTERSECTION.value,
            },
        )
        assert session.pending_options is not None
        return session.pending_options

    def suggest_direction(
        self, session: ExplorationSession, options: list[DirectionOption]
    ) -> list[DirectionOption]:
        self._require(session, "suggest_direction", SessionStatus.AT_INTERSECTION)
        if len(options) < 2:
            raise InvalidArgumentError("suggestion needs at least 2 options")
        from_idx = next((o.idx for o in options if o.is_reverse), None)
        prompt = build_selector_prompt(
            session.intent, [o.description.body for o in options], from_idx
        )
        views = [ViewRequest(session.position, o.heading, fov_deg=90.0) for o in options]
        suggested_idx: int | None = None
        try:
            images = tuple(self._providers.imagery.render_view(v) for v in views)
            choice = self._engine.ask_choice(prompt, images, len(options))
            chosen = options[choice.idx - 1]
            forward_count = sum(1 for o in options if not o.is_reverse)
            if not (chosen.is_reverse and forward_count >= 2):
                suggested_idx = choice.idx
        except (InvalidChoiceError, ScenescoutError):
            suggested_idx = None
        for option in options:
            option.suggested = suggested_idx is not None and option.idx == suggested_idx
        _apply(
            session,
            {
                "type": "suggestion-made",
                "idx": suggested_idx,
                "status_after": SessionStatus.AT_INTERSECTION.value,
            },
        )
        return options

    def choose_direction(self, session: ExplorationSession, idx: int) -> ExplorationSession:
        self._require(session, "choose_direction", SessionStatus.AT_INTERSECTION)
        options = session.pending_options or []
        if not options:
            raise InvalidArgumentError("no directions offered yet")
        if not isinstance(idx, int) or not 1 <= idx <= len(options):
            raise InvalidArgumentError(f"idx {idx} outside 1..{len(options)}")
        option = options[idx - 1]
        target = self._pano(option.target)
        remaining = session.steps_remaining - 1
        if remaining <= 0:
            status_after = SessionStatus.ENDED
        elif len(target.links) >= INTERSECTION_LINK_DEGREE:
            status_after = SessionStatus.AT_INTERSECTION
        else:
            status_after = SessionStatus.WALKING
        _apply(
            session,
            {
                "type": "direction-chosen",
                "idx": idx,
                "from": session.position,
                "to": option.target,
                "heading": option.heading,
                "steps_remaining": remaining,
                "status_after": status_after.value,
            },
        )
        if status_after is SessionStatus.ENDED:
            _apply(session, {"type": "ended", "reason": "step-budget", "status_after": SessionStatus.ENDED.value})
        return session

    def end_session(self, session: ExplorationSession, reason: str = "user") -> ExplorationSession:
        if session.status is SessionStatus.ENDED:
            raise SessionStateError("end_session", session.status.value)
        _apply(session, {"type": "ended", "reason": reason, "status_after": SessionStatus.ENDED.value})
        return session

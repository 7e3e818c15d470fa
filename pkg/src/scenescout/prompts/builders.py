"""Render the prompt templates with runtime context.

Templates live as text resources next to this module and are rendered with
str.format; rendering is pure string work, byte-stable for identical
context. Empty optional slots render as the literal "None".
"""

from __future__ import annotations

from functools import lru_cache
from importlib import resources
from typing import Iterable, NamedTuple

from ..errors import InvalidArgumentError
from ..providers.base import Place
from .types import AgentContext

TEMPLATE_IDS = (
    "segment",
    "intersection",
    "destination",
    "direction",
    "selector",
    "exploration_block",
    "keywords",
    "place_type",
)

DESCRIPTION_TEMPERATURE = 0.2
SELECTOR_TEMPERATURE = 0.0


class RenderedPrompt(NamedTuple):
    template_id: str
    text: str


@lru_cache(maxsize=None)
def template_text(template_id: str) -> str:
    if template_id not in TEMPLATE_IDS:
        raise InvalidArgumentError(f"unknown template id {template_id!r}")
    return resources.files(__package__).joinpath("templates", f"{template_id}.txt").read_text(encoding="utf-8")


def render_places(places: Iterable[Place]) -> str:
    """One place per line: "Name (category), <distance> meters <cardinal>"."""
    lines = [
        f"{p.name} ({p.category}), {round(p.distance_m)} meters {p.relative_direction}" for p in places
    ]
    return "\n".join(lines)


def _or_none(text: str | None) -> str:
    return text if text else "None"


def build_segment_prompt(ctx: AgentContext) -> RenderedPrompt:
    text = template_text("segment").format(
        prev_description=_or_none(ctx.prev_description),
        nearby_places=_or_none(ctx.nearby_places),
    )
    return RenderedPrompt("segment", text)


def build_intersection_prompt(ctx: AgentContext) -> RenderedPrompt:
    text = template_text("intersection").format(nearby_places=_or_none(ctx.nearby_places))
    return RenderedPrompt("intersection", text)


def build_destination_prompt(context_question: str, place_name: str) -> RenderedPrompt:
    if not place_name:
        raise InvalidArgumentError("place_name must be non-empty")
    text = template_text("destination").format(context=context_question, place_name=place_name)
    return RenderedPrompt("destination", text)


def build_direction_prompt(
    intent: str,
    street_name: str,
    new_heading: str,
    curr_heading: str,
    place_type: str | None = None,
) -> RenderedPrompt:
    text = template_text("direction").format(
        intention=intent,
        street_name=street_name,
        new_heading=new_heading,
        curr_heading=curr_heading,
        place_type=place_type if place_type else "unspecified",
    )
    return RenderedPrompt("direction", text)


def build_selector_prompt(intent: str, road_descriptions: list[str], from_road_idx: int | None) -> RenderedPrompt:
    if len(road_descriptions) < 2:
        raise InvalidArgumentError("selector needs at least 2 candidate roads")
    rendered = "\n".join(f"{i}: {desc}" for i, desc in enumerate(road_descriptions, start=1))
    text = template_text("selector").format(
        intention=intent,
        road_descriptions=rendered,
        from_road_idx=from_road_idx if from_road_idx is not None else "None",
    )
    return RenderedPrompt("selector", text)


def build_exploration_block_prompt(ctx: AgentContext, place_type: str) -> RenderedPrompt:
    if not ctx.intent:
        raise InvalidArgumentError("exploration block prompt requires an intent")
    text = template_text("exploration_block").format(
        intention=ctx.intent,
        place_type=place_type if place_type else "unspecified",
        cared_secondary_categories=_or_none(", ".join(ctx.keywords)),
        nearby_places=_or_none(ctx.nearby_places),
        prev_description=_or_none(ctx.prev_description),
    )
    return RenderedPrompt("exploration_block", text)


def build_keywords_prompt(intent: str) -> RenderedPrompt:
    if not intent:
        raise InvalidArgumentError("keywords prompt requires an intent")
    return RenderedPrompt("keywords", template_text("keywords").format(intention=intent))


def build_place_type_prompt(intent: str) -> RenderedPrompt:
    if not intent:
        raise InvalidArgumentError("place_type prompt requires an intent")
    return RenderedPrompt("place_type", template_text("place_type").format(intention=intent))

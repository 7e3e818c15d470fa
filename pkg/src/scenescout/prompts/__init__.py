"""Prompt templates, context rendering, and response-contract parsing."""

from .builders import (
    DESCRIPTION_TEMPERATURE,
    SELECTOR_TEMPERATURE,
    TEMPLATE_IDS,
    RenderedPrompt,
    build_destination_prompt,
    build_direction_prompt,
    build_exploration_block_prompt,
    build_intersection_prompt,
    build_keywords_prompt,
    build_place_type_prompt,
    build_segment_prompt,
    build_selector_prompt,
    render_places,
    template_text,
)
from .engine import PromptEngine
from .parsing import (
    parse_choice,
    parse_destination,
    parse_direction_description,
    parse_json_object,
    parse_keywords,
    parse_place_type,
    parse_triple,
    triple_as_template_json,
)
from .types import (
    AgentContext,
    DescriptionTriple,
    DestinationDetail,
    DirectionChoice,
    DirectionDescription,
)

__all__ = [
    "AgentContext",
    "DESCRIPTION_TEMPERATURE",
    "DescriptionTriple",
    "DestinationDetail",
    "DirectionChoice",
    "DirectionDescription",
    "PromptEngine",
    "RenderedPrompt",
    "SELECTOR_TEMPERATURE",
    "TEMPLATE_IDS",
    "build_destination_prompt",
    "build_direction_prompt",
    "build_exploration_block_prompt",
    "build_intersection_prompt",
    "build_keywords_prompt",
    "build_place_type_prompt",
    "build_segment_prompt",
    "build_selector_prompt",
    "parse_choice",
    "parse_destination",
    "parse_direction_description",
    "parse_json_object",
    "parse_keywords",
    "parse_place_type",
    "parse_triple",
    "render_places",
    "template_text",
    "triple_as_template_json",
]

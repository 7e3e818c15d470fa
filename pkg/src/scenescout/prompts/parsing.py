"""Parse model output into the JSON response contracts.

Model output is conversational: the JSON object may be wrapped in code
fences, preceded or followed by prose, or lightly malformed. Strategy:
locate the outermost balanced {...} block, try to parse it, and apply one
repair pass (smart quotes, trailing commas) before giving up. Parsers never
raise anything but the typed errors: any text yields a value, a ParseError,
or an InvalidChoiceError.
"""

from __future__ import annotations

import json
import re

from ..errors import InvalidArgumentError, InvalidChoiceError, ParseError
from .types import DescriptionTriple, DestinationDetail, DirectionChoice

_FENCE_RE = re.compile(r"```[a-zA-Z0-9_-]*\n?|```")

_SMART_QUOTES = {
    "“": '"',
    "”": '"',
    "‘": "'",
    "’": "'",
}

_TRAILING_COMMA_RE = re.compile(r",(\s*[}\]])")


def _outer_object(text: str) -> str | None:
    """Outermost balanced {...} block, ignoring braces inside JSON strings."""
    start = text.find("{")
    if start < 0:
        return None
    depth = 0
    in_string = False
    escaped = False
    for i in range(start, len(text)):
        ch = text[i]
        if in_string:
            if escaped:
                escaped = False
            elif ch == "\\":
                escaped = True
            elif ch == '"':
                in_string = False
            continue
        if ch == '"':
            in_string = True
        elif ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
            if depth == 0:
                return text[start : i + 1]
    return None


def _repair(text: str) -> str:
    for bad, good in _SMART_QUOTES.items():
        text = text.replace(bad, good)
    return _TRAILING_COMMA_RE.sub(r"\1", text)


def parse_json_object(raw: str) -> dict:
    """Best-effort extraction of one JSON object from model output."""
    if not isinstance(raw, str) or not raw.strip():
        raise ParseError("empty model output", raw=raw if isinstance(raw, str) else "")
    text = _FENCE_RE.sub("", raw)
    block = _outer_object(text)
    if block is None:
        raise ParseError("no JSON object found in model output", raw=raw)
    for candidate in (block, _repair(block)):
        try:
            value = json.loads(candidate)
        except json.JSONDecodeError:
            continue
        if isinstance(value, dict):
            return value
        raise ParseError("model output JSON is not an object", raw=raw)
    raise ParseError("unparseable JSON in model output", raw=raw)


def _require_text(obj: dict, key: str, raw: str, *, allow_empty: bool = False) -> str:
    if key not in obj:
        raise ParseError(f"missing key {key!r}", raw=raw, missing_key=key)
    value = obj[key]
    if not isinstance(value, str):
        value = json.dumps(value, ensure_ascii=False) if value is not None else ""
    if not value.strip() and not allow_empty:
        raise ParseError(f"key {key!r} is empty", raw=raw, missing_key=key)
    return value


def parse_triple(raw: str) -> DescriptionTriple:
    obj = parse_json_object(raw)
    return DescriptionTriple(
        short=_require_text(obj, "short_description", raw),
        medium=_require_text(obj, "medium_description", raw),
        long=_require_text(obj, "long_description", raw),
    )


def parse_destination(raw: str) -> DestinationDetail:
    obj = parse_json_object(raw)
    return DestinationDetail(
        path_summary=_require_text(obj, "path_summary", raw),
        place_summary=_require_text(obj, "place_summary", raw),
        mobility_cues=_require_text(obj, "mobility_cues", raw),
        sidewalk=_require_text(obj, "sidewalk", raw),
        signage_text=_require_text(obj, "text", raw, allow_empty=True),
    )


def parse_direction_description(raw: str) -> str:
    return _require_text(parse_json_object(raw), "description", raw)


def parse_choice(raw: str, candidate_count: int) -> DirectionChoice:
    if candidate_count < 2:
        raise InvalidArgumentError("choice parsing needs at least 2 candidates")
    obj = parse_json_object(raw)
    if "idx" not in obj:
        raise ParseError("missing key 'idx'", raw=raw, missing_key="idx")
    raw_idx = obj["idx"]
    try:
        idx = int(str(raw_idx).strip().strip('"'))
    except (TypeError, ValueError):
        raise ParseError(f"idx {raw_idx!r} is not an integer", raw=raw, missing_key="idx") from None
    if not 1 <= idx <= candidate_count:
        raise InvalidChoiceError(idx, candidate_count, raw=raw)
    reason = obj.get("reason", "")
    if not isinstance(reason, str):
        reason = str(reason)
    return DirectionChoice(idx=idx, reason=reason.strip())


def parse_keywords(raw: str) -> list[str]:
    obj = parse_json_object(raw)
    if "keywords" not in obj:
        raise ParseError("missing key 'keywords'", raw=raw, missing_key="keywords")
    value = obj["keywords"]
    if isinstance(value, str):
        value = [piece for piece in value.split(",")]
    if not isinstance(value, list):
        raise ParseError("'keywords' is not a list", raw=raw, missing_key="keywords")
    keywords = [str(item).strip() for item in value if str(item).strip()]
    if not keywords:
        raise ParseError("'keywords' is empty", raw=raw, missing_key="keywords")
    return keywords


def parse_place_type(raw: str) -> str:
    return _require_text(parse_json_object(raw), "place_type", raw)


def triple_as_template_json(triple: DescriptionTriple) -> str:
    """Serialize a triple exactly as the description templates request it."""
    return json.dumps(
        {
            "long_description": triple.long,
            "medium_description": triple.medium,
            "short_description": triple.short,
        },
        ensure_ascii=False,
    )

"""Deterministic rule-based sentence splitter.

The evaluation unit is the sentence, so splitting must be reproducible:
split on terminal punctuation (., !, ?) followed by whitespace and a
capital, quote, or digit; a short list of abbreviations common in street
addresses never ends a sentence.
"""

from __future__ import annotations

import re

from ..errors import InvalidArgumentError

ABBREVIATIONS = frozenset({"st", "ave", "blvd", "e.g", "i.e", "dr", "mt", "no"})

_BOUNDARY_RE = re.compile(r"[.!?](?=\s+[\"'“”‘’(]*[A-Z0-9])")
_TOKEN_BEFORE_RE = re.compile(r"(\S+)$")


def _is_abbreviation(text: str, punct_idx: int) -> bool:
    if text[punct_idx] != ".":
        return False
    match = _TOKEN_BEFORE_RE.search(text[: punct_idx + 1])
    if not match:
        return False
    token = match.group(1).rstrip(".").lstrip("\"'(“‘")
    return token.lower() in ABBREVIATIONS


def split_sentences(text: str) -> list[str]:
    """Split text into trimmed, non-empty sentences."""
    if not text or not text.strip():
        raise InvalidArgumentError("cannot split empty text")
    boundaries = [
        m.start() for m in _BOUNDARY_RE.finditer(text) if not _is_abbreviation(text, m.start())
    ]
    pieces = []
    start = 0
    for idx in boundaries:
        pieces.append(text[start : idx + 1])
        start = idx + 1
    pieces.append(text[start:])
    return [piece.strip() for piece in pieces if piece.strip()]

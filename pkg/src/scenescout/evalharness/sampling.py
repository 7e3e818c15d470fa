"""Sample descriptions out of usage logs into annotation tasks.

A usage log is either a preview.v1 document or an exploration.v1 event log;
every described unit contributes one description per verbosity level. The
sample is uniform without replacement, stratified by interaction mode, and
fully determined by the seed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import InvalidArgumentError
from ..serde import read_json
from .annotations import AnnotationTask, Mode, Verbosity
from .sentences import split_sentences

_VERBOSITY_KEYS = (("short", Verbosity.SHORT), ("medium", Verbosity.MEDIUM), ("long", Verbosity.LONG))


@dataclass(frozen=True)
class DescriptionRecord:
    """One description instance (a unit at one verbosity) extracted from a log."""

    source_id: str
    mode: Mode
    verbosity: Verbosity
    unit_index: int
    text: str
    context: dict = field(default_factory=dict, hash=False, compare=False)

    @property
    def sort_key(self) -> tuple:
        return (self.source_id, self.unit_index, self.verbosity.value)


def _view_stems(views: list[dict]) -> list[str]:
    from ..providers.base import ViewRequest

    return [ViewRequest.from_dict(v).stem for v in views]


def records_from_preview(source_id: str, doc: dict) -> list[DescriptionRecord]:
    records = []
    prev_long = None
    for segment in doc.get("segments", ()):  # ordered by construction
        triple = segment.get("triple")
        if not triple:
            continue
        context = {
            "prev_description": prev_long,
            "heading": segment["sample"]["heading"],
            "nearby_places": segment.get("nearby_places", ""),
            "views": _view_stems(segment.get("views", [])),
        }
        for text_key, verbosity in _VERBOSITY_KEYS:
            records.append(
                DescriptionRecord(
                    source_id=source_id,
                    mode=Mode.ROUTE_PREVIEW,
                    verbosity=verbosity,
                    unit_index=segment["index"],
                    text=triple[text_key],
                    context=context,
                )
            )
        prev_long = triple["long"]
    return records


def records_from_exploration(source_id: str, doc: dict) -> list[DescriptionRecord]:
    records = []
    prev_long = None
    unit = 0
    for event in doc.get("events", ()):
        if event.get("type") != "block-described":
            continue
        context = {
            "prev_description": prev_long,
            "heading": event.get("heading"),
            "nearby_places": event.get("nearby_places", ""),
            "views": event.get("views", []),
        }
        for text_key, verbosity in _VERBOSITY_KEYS:
            records.append(
                DescriptionRecord(
                    source_id=source_id,
                    mode=Mode.VIRTUAL_EXPLORATION,
                    verbosity=verbosity,
                    unit_index=unit,
                    text=event["triple"][text_key],
                    context=context,
                )
            )
        prev_long = event["triple"]["long"]
        unit += 1
    return records


def records_from_log(source_id: str, doc: dict) -> list[DescriptionRecord]:
    schema = doc.get("schema", "")
    if schema.startswith("preview"):
        return records_from_preview(source_id, doc)
    if schema.startswith("exploration"):
        return records_from_exploration(source_id, doc)
    return []


def load_log_dir(logs_dir: str | Path) -> list[DescriptionRecord]:
    """Scan a directory for *.json usage logs and extract all descriptions."""
    records: list[DescriptionRecord] = []
    for path in sorted(Path(logs_dir).glob("**/*.json")):
        try:
            doc = read_json(path)
        except (OSError, ValueError):
            continue
        if isinstance(doc, dict):
            records.extend(records_from_log(path.stem, doc))
    return records


def sample_tasks(
    records: list[DescriptionRecord], fraction: float, seed: int
) -> list[AnnotationTask]:
    """Uniform without-replacement sample, stratified by mode, seeded."""
    if not 0.0 < fraction <= 1.0:
        raise InvalidArgumentError(f"fraction {fraction} outside (0, 1]")
    rng = random.Random(seed)
    chosen: list[DescriptionRecord] = []
    for mode in (Mode.ROUTE_PREVIEW, Mode.VIRTUAL_EXPLORATION):
        group = sorted((r for r in records if r.mode is mode), key=lambda r: r.sort_key)
        if not group:
            continue
        count = int(len(group) * fraction + 0.5)
        count = min(len(group), count)
        chosen.extend(rng.sample(group, count))
    chosen.sort(key=lambda r: (r.mode.value, r.sort_key))
    return [
        AnnotationTask(
            source_id=r.source_id,
            mode=r.mode,
            verbosity=r.verbosity,
            unit_index=r.unit_index,
            sentences=tuple(split_sentences(r.text)),
            context=r.context,
        )
        for r in chosen
        if r.text.strip()
    ]

"""Annotation records for the sentence-level description evaluation.

Each sampled description becomes an AnnotationTask; annotators rate every
sentence on five dimensions plus one description-level relevance rating
(exploration only). Records persist to an append-friendly JSON-lines file
(schema eval.v1) with upsert semantics: the latest record for a key wins.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import ValidationError
from ..serde import canonical_dumps

SCHEMA_VERSION = "eval.v1"


class Mode(enum.Enum):
    ROUTE_PREVIEW = "RoutePreview"
    VIRTUAL_EXPLORATION = "VirtualExploration"


class Verbosity(enum.Enum):
    SHORT = "Short"
    MEDIUM = "Medium"
    LONG = "Long"


class InfoType(enum.Enum):
    SUBJECTIVE = "Subjective"
    OBJECTIVE = "Objective"
    MIXED = "Mixed"


class ObjectiveSubtype(enum.Enum):
    POI = "POI"
    FACTUAL_OBJECT = "FactualObject"
    ACCESSIBILITY = "Accessibility"
    OTHER = "Other"


class Correctness(enum.Enum):
    CANNOT_TELL = "CannotTell"
    INCORRECT = "Incorrect"
    PARTIALLY_CORRECT = "PartiallyCorrect"
    CORRECT = "Correct"


class ErrorType(enum.Enum):
    PLAUSIBLE_DETAIL = "PlausibleDetail"
    PLAUSIBLE_ADJECTIVE = "PlausibleAdjective"
    FACTUAL_ERROR = "FactualError"
    SPATIAL_ERROR = "SpatialError"
    HALLUCINATION = "Hallucination"
    OTHER = "Other"
    NONE = "None"


class Consistency(enum.Enum):
    NOT_LIKELY = "NotLikely"
    POSSIBLY = "Possibly"
    LIKELY = "Likely"


class Redundancy(enum.Enum):
    NO_PREV = "NoPrev"
    REPEATS = "Repeats"
    ADDS_NEW = "AddsNew"
    UPDATES = "Updates"


class Relevance(enum.Enum):
    FULLY = "Fully"
    PARTIALLY = "Partially"
    NOT = "Not"
    NOT_APPLICABLE = "NotApplicable"


_ERRONEOUS = frozenset({Correctness.INCORRECT, Correctness.PARTIALLY_CORRECT})
_OBJECTIVE_LIKE = frozenset({InfoType.OBJECTIVE, InfoType.MIXED})


@dataclass(frozen=True)
class SentenceAnnotation:
    info_type: InfoType
    correctness: Correctness
    consistency: Consistency
    redundancy: Redundancy
    error_type: ErrorType = ErrorType.NONE
    objective_subtypes: frozenset[ObjectiveSubtype] = frozenset()

    def __post_init__(self):
        has_error = self.error_type is not ErrorType.NONE
        if has_error != (self.correctness in _ERRONEOUS):
            raise ValidationError(
                "error_type must be set exactly when correctness is Incorrect or PartiallyCorrect"
            )
        has_subtypes = bool(self.objective_subtypes)
        if has_subtypes != (self.info_type in _OBJECTIVE_LIKE):
            raise ValidationError(
                "objective_subtypes must be non-empty exactly when info_type is Objective or Mixed"
            )

    def to_dict(self) -> dict:
        return {
            "info_type": self.info_type.value,
            "objective_subtypes": sorted(s.value for s in self.objective_subtypes),
            "correctness": self.correctness.value,
            "error_type": self.error_type.value,
            "consistency": self.consistency.value,
            "redundancy": self.redundancy.value,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SentenceAnnotation":
        return cls(
            info_type=InfoType(d["info_type"]),
            objective_subtypes=frozenset(ObjectiveSubtype(s) for s in d.get("objective_subtypes", ())),
            correctness=Correctness(d["correctness"]),
            error_type=ErrorType(d.get("error_type", "None")),
            consistency=Consistency(d["consistency"]),
            redundancy=Redundancy(d["redundancy"]),
        )


@dataclass(frozen=True)
class DescriptionAnnotation:
    relevance: Relevance

    def validate_for_mode(self, mode: Mode) -> None:
        if (self.relevance is Relevance.NOT_APPLICABLE) != (mode is Mode.ROUTE_PREVIEW):
            raise ValidationError("relevance is NotApplicable exactly when mode is RoutePreview")

    def to_dict(self) -> dict:
        return {"relevance": self.relevance.value}

    @classmethod
    def from_dict(cls, d: dict) -> "DescriptionAnnotation":
        return cls(relevance=Relevance(d["relevance"]))


@dataclass(frozen=True)
class AnnotationTask:
    """One sampled description at one verbosity, split into sentences."""

    source_id: str
    mode: Mode
    verbosity: Verbosity
    unit_index: int
    sentences: tuple[str, ...]
    context: dict = field(default_factory=dict, hash=False, compare=False)

    @property
    def key(self) -> str:
        return f"{self.source_id}#{self.unit_index}#{self.verbosity.value}"

    def to_dict(self) -> dict:
        return {
            "source_id": self.source_id,
            "mode": self.mode.value,
            "verbosity": self.verbosity.value,
            "unit_index": self.unit_index,
            "sentences": list(self.sentences),
            "context": self.context,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "AnnotationTask":
        return cls(
            source_id=d["source_id"],
            mode=Mode(d["mode"]),
            verbosity=Verbosity(d["verbosity"]),
            unit_index=d["unit_index"],
            sentences=tuple(d["sentences"]),
            context=d.get("context", {}),
        )


@dataclass(frozen=True)
class AnnotatedSentence:
    """Fully keyed sentence rating, the unit the aggregator consumes."""

    task_key: str
    mode: Mode
    verbosity: Verbosity
    sentence_idx: int
    annotation: SentenceAnnotation


@dataclass(frozen=True)
class AnnotatedDescription:
    task_key: str
    mode: Mode
    verbosity: Verbosity
    annotation: DescriptionAnnotation


class AnnotationStore:
    """Single-writer JSONL persistence with upsert-on-read semantics."""

    def __init__(self, path: str | Path):
        self.path = Path(path)

    def record(self, task: AnnotationTask, sentence_idx: int, annotation: SentenceAnnotation) -> None:
        if not 0 <= sentence_idx < len(task.sentences):
            raise ValidationError(
                f"sentence_idx {sentence_idx} outside 0..{len(task.sentences) - 1}"
            )
        self._append(
            {
                "schema": SCHEMA_VERSION,
                "kind": "sentence",
                "task": task.key,
                "mode": task.mode.value,
                "verbosity": task.verbosity.value,
                "sentence_idx": sentence_idx,
                "sentence": task.sentences[sentence_idx],
                "annotation": annotation.to_dict(),
            }
        )

    def record_description(self, task: AnnotationTask, annotation: DescriptionAnnotation) -> None:
        annotation.validate_for_mode(task.mode)
        self._append(
            {
                "schema": SCHEMA_VERSION,
                "kind": "description",
                "task": task.key,
                "mode": task.mode.value,
                "verbosity": task.verbosity.value,
                "annotation": annotation.to_dict(),
            }
        )

    def _append(self, record: dict) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.path, "a", encoding="utf-8") as fh:
            fh.write(canonical_dumps(record) + "\n")

    def load(self) -> tuple[list[AnnotatedSentence], list[AnnotatedDescription]]:
        """Current state of the file: latest record per key wins."""
        sentences: dict[tuple[str, int], AnnotatedSentence] = {}
        descriptions: dict[str, AnnotatedDescription] = {}
        if not self.path.exists():
            return [], []
        import json

        with open(self.path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                raw = json.loads(line)
                mode = Mode(raw["mode"])
                verbosity = Verbosity(raw["verbosity"])
                if raw["kind"] == "sentence":
                    ann = SentenceAnnotation.from_dict(raw["annotation"])
                    key = (raw["task"], raw["sentence_idx"])
                    sentences[key] = AnnotatedSentence(raw["task"], mode, verbosity, raw["sentence_idx"], ann)
                elif raw["kind"] == "description":
                    ann_d = DescriptionAnnotation.from_dict(raw["annotation"])
                    descriptions[raw["task"]] = AnnotatedDescription(raw["task"], mode, verbosity, ann_d)
        return list(sentences.values()), list(descriptions.values())


def diff_stores(a: AnnotationStore, b: AnnotationStore) -> list[dict]:
    """Disagreements between two annotators' files, for reconciliation."""
    a_sent, a_desc = a.load()
    b_sent, b_desc = b.load()
    a_by_key = {(s.task_key, s.sentence_idx): s for s in a_sent}
    b_by_key = {(s.task_key, s.sentence_idx): s for s in b_sent}
    disagreements = []
    for key in sorted(set(a_by_key) & set(b_by_key)):
        left, right = a_by_key[key], b_by_key[key]
        if left.annotation != right.annotation:
            disagreements.append(
                {
                    "kind": "sentence",
                    "task": key[0],
                    "sentence_idx": key[1],
                    "a": left.annotation.to_dict(),
                    "b": right.annotation.to_dict(),
                }
            )
    a_desc_by = {d.task_key: d for d in a_desc}
    b_desc_by = {d.task_key: d for d in b_desc}
    for key in sorted(set(a_desc_by) & set(b_desc_by)):
        left_d, right_d = a_desc_by[key], b_desc_by[key]
        if left_d.annotation != right_d.annotation:
            disagreements.append(
                {
                    "kind": "description",
                    "task": key,
                    "a": left_d.annotation.to_dict(),
                    "b": right_d.annotation.to_dict(),
                }
            )
    return disagreements

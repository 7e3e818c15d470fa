"""Aggregate annotations into per-sentence-normalized percentage panels.

Six panels: information type, correctness, error type, consistency,
redundancy (denominator = annotated sentences; error type over erroneous
sentences only) and relevance (denominator = rated descriptions). Reported
overall and per (mode x verbosity); every percentage is count/denominator*100.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from ..errors import InvalidArgumentError
from ..serde import pretty_dumps
from .annotations import (
    AnnotatedDescription,
    AnnotatedSentence,
    Consistency,
    Correctness,
    ErrorType,
    InfoType,
    Redundancy,
    Relevance,
)

PANEL_CATEGORIES: dict[str, tuple[str, ...]] = {
    "info_type": tuple(v.value for v in InfoType),
    "correctness": tuple(v.value for v in Correctness),
    "error_type": tuple(v.value for v in ErrorType if v is not ErrorType.NONE),
    "consistency": tuple(v.value for v in Consistency),
    "redundancy": tuple(v.value for v in Redundancy),
    "relevance": tuple(v.value for v in Relevance if v is not Relevance.NOT_APPLICABLE),
}


@dataclass(frozen=True)
class Panel:
    name: str
    counts: dict[str, int]
    denominator: int

    @property
    def percentages(self) -> dict[str, float]:
        if self.denominator == 0:
            return {category: 0.0 for category in self.counts}
        return {c: count / self.denominator * 100.0 for c, count in self.counts.items()}

    def to_dict(self) -> dict:
        return {
            "counts": dict(self.counts),
            "percentages": self.percentages,
            "denominator": self.denominator,
        }


@dataclass(frozen=True)
class EvalReport:
    groups: dict[str, dict[str, Panel]]

    def panel(self, group: str, name: str) -> Panel:
        return self.groups[group][name]

    def to_dict(self) -> dict:
        return {
            group: {name: panel.to_dict() for name, panel in panels.items()}
            for group, panels in self.groups.items()
        }

    def to_json(self) -> str:
        return pretty_dumps(self.to_dict())

    def to_markdown(self) -> str:
        lines = ["# Description evaluation report", ""]
        for group, panels in self.groups.items():
            lines.append(f"## {group}")
            lines.append("")
            for name, panel in panels.items():
                lines.append(f"### {name} (n={panel.denominator})")
                lines.append("")
                lines.append("| category | count | % |")
                lines.append("| --- | ---: | ---: |")
                for category in PANEL_CATEGORIES[name]:
                    count = panel.counts.get(category, 0)
                    pct = panel.percentages.get(category, 0.0)
                    lines.append(f"| {category} | {count} | {pct:.1f} |")
                lines.append("")
        return "\n".join(lines)


def _sentence_panels(sentences: list[AnnotatedSentence]) -> dict[str, Panel]:
    info = Counter(s.annotation.info_type.value for s in sentences)
    correctness = Counter(s.annotation.correctness.value for s in sentences)
    consistency = Counter(s.annotation.consistency.value for s in sentences)
    redundancy = Counter(s.annotation.redundancy.value for s in sentences)
    erroneous = [s for s in sentences if s.annotation.error_type is not ErrorType.NONE]
    errors = Counter(s.annotation.error_type.value for s in erroneous)
    n = len(sentences)
    return {
        "info_type": Panel("info_type", {c: info.get(c, 0) for c in PANEL_CATEGORIES["info_type"]}, n),
        "correctness": Panel(
            "correctness", {c: correctness.get(c, 0) for c in PANEL_CATEGORIES["correctness"]}, n
        ),
        "error_type": Panel(
            "error_type", {c: errors.get(c, 0) for c in PANEL_CATEGORIES["error_type"]}, len(erroneous)
        ),
        "consistency": Panel(
            "consistency", {c: consistency.get(c, 0) for c in PANEL_CATEGORIES["consistency"]}, n
        ),
        "redundancy": Panel(
            "redundancy", {c: redundancy.get(c, 0) for c in PANEL_CATEGORIES["redundancy"]}, n
        ),
    }


def _relevance_panel(descriptions: list[AnnotatedDescription]) -> Panel:
    rated = [d for d in descriptions if d.annotation.relevance is not Relevance.NOT_APPLICABLE]
    counts = Counter(d.annotation.relevance.value for d in rated)
    return Panel(
        "relevance", {c: counts.get(c, 0) for c in PANEL_CATEGORIES["relevance"]}, len(rated)
    )


def aggregate(
    sentences: list[AnnotatedSentence], descriptions: list[AnnotatedDescription] | None = None
) -> EvalReport:
    descriptions = descriptions or []
    if not sentences and not descriptions:
        raise InvalidArgumentError("nothing to aggregate")
    groups: dict[str, dict[str, Panel]] = {}

    def build(group_name: str, sent_subset, desc_subset) -> None:
        panels = _sentence_panels(sent_subset)
        panels["relevance"] = _relevance_panel(desc_subset)
        groups[group_name] = panels

    build("overall", sentences, descriptions)
    keys = sorted(
        {(s.mode.value, s.verbosity.value) for s in sentences}
        | {(d.mode.value, d.verbosity.value) for d in descriptions}
    )
    for mode_value, verbosity_value in keys:
        build(
            f"{mode_value}/{verbosity_value}",
            [s for s in sentences if s.mode.value == mode_value and s.verbosity.value == verbosity_value],
            [d for d in descriptions if d.mode.value == mode_value and d.verbosity.value == verbosity_value],
        )
    return EvalReport(groups=groups)

"""Structured values parsed out of model responses."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import InvalidArgumentError


@dataclass(frozen=True)
class DescriptionTriple:
    """Short/medium/long description set for one location."""

    short: str
    medium: str
    long: str

    def __post_init__(self):
        for name in ("short", "medium", "long"):
            if not getattr(self, name):
                raise InvalidArgumentError(f"{name} description must be non-empty")

    def by_verbosity(self, verbosity: str) -> str:
        return {"Short": self.short, "Medium": self.medium, "Long": self.long}[verbosity]

    def to_dict(self) -> dict:
        return {"short": self.short, "medium": self.medium, "long": self.long}

    @classmethod
    def from_dict(cls, d: dict) -> "DescriptionTriple":
        return cls(d["short"], d["medium"], d["long"])


@dataclass(frozen=True)
class DestinationDetail:
    """Five-category last-few-meters description of the destination area."""

    path_summary: str
    place_summary: str
    mobility_cues: str
    sidewalk: str
    signage_text: str

    def __post_init__(self):
        for name in ("path_summary", "place_summary", "mobility_cues", "sidewalk"):
            if not getattr(self, name):
                raise InvalidArgumentError(f"{name} must be non-empty")

    def to_dict(self) -> dict:
        return {
            "path_summary": self.path_summary,
            "place_summary": self.place_summary,
            "mobility_cues": self.mobility_cues,
            "sidewalk": self.sidewalk,
            "signage_text": self.signage_text,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "DestinationDetail":
        return cls(d["path_summary"], d["place_summary"], d["mobility_cues"], d["sidewalk"], d["signage_text"])


@dataclass(frozen=True)
class DirectionDescription:
    """What lies down one candidate direction."""

    street_name: str
    travel_heading: str
    body: str


@dataclass(frozen=True)
class DirectionChoice:
    """Selector verdict: 1-based candidate index plus the model's reasoning."""

    idx: int
    reason: str


@dataclass(frozen=True)
class AgentContext:
    """Runtime context substituted into the description templates.

    nearby_places holds the already-rendered place list text; keywords are
    unique and order-preserving.
    """

    nearby_places: str = ""
    prev_description: str | None = None
    intent: str | None = None
    keywords: tuple[str, ...] = ()
    current_heading: str = "North"

    def __post_init__(self):
        deduped: list[str] = []
        seen: set[str] = set()
        for kw in self.keywords:
            lowered = kw.strip().lower()
            if lowered and lowered not in seen:
                seen.add(lowered)
                deduped.append(kw.strip())
        object.__setattr__(self, "keywords", tuple(deduped))

"""Exception hierarchy shared by every scenescout module.

Provider and parsing failures are typed so callers can branch on them
(retry, degrade a single segment, surface a 4xx/5xx) instead of matching
message strings.
"""

from __future__ import annotations


class ScenescoutError(Exception):
    """Base class for all errors raised by this package."""

    code = "internal"


class InvalidArgumentError(ScenescoutError):
    """Caller passed a value outside the documented domain."""

    code = "invalid_argument"


class OutOfRangeError(InvalidArgumentError):
    """Numeric argument outside its valid interval (e.g. distance along a polyline)."""

    code = "out_of_range"


class DegenerateBearingError(InvalidArgumentError):
    """Bearing requested between two identical coordinates."""

    code = "degenerate_bearing"


class RouteUnavailableError(ScenescoutError):
    """The route provider found no walking route between the endpoints."""

    code = "route_unavailable"


class NoCoverageError(ScenescoutError):
    """No panorama within the snap radius of the requested coordinate."""

    code = "no_coverage"


class NotFoundError(ScenescoutError):
    """Referenced entity (panorama, session, preview) does not exist."""

    code = "not_found"


class ProviderError(ScenescoutError):
    """External provider failed (HTTP error, timeout, rate limit).

    ``retryable`` tells callers whether a retry is sensible; ``retry_after``
    carries the provider's backoff hint in seconds when it gave one.
    """

    code = "provider_error"

    def __init__(self, message: str, *, retryable: bool = False, retry_after: float | None = None):
        super().__init__(message)
        self.retryable = retryable
        self.retry_after = retry_after


class ScriptedMissError(ScenescoutError):
    """Scripted fixture model had no canned response for the request key.

    Raised only by the fixture MLLM: it means the test did not author a
    response for a call it triggered.
    """

    code = "scripted_miss"

    def __init__(self, key: str):
        super().__init__(f"no scripted response for key {key!r}")
        self.key = key


class ParseError(ScenescoutError):
    """Model output could not be parsed into the expected JSON contract."""

    code = "parse_error"

    def __init__(self, message: str, *, raw: str, missing_key: str | None = None):
        super().__init__(message)
        self.raw = raw
        self.missing_key = missing_key


class InvalidChoiceError(ScenescoutError):
    """Selector returned an index outside the offered candidate range."""

    code = "invalid_choice"

    def __init__(self, idx: int, candidate_count: int, *, raw: str = ""):
        super().__init__(f"selected index {idx} outside 1..{candidate_count}")
        self.idx = idx
        self.candidate_count = candidate_count
        self.raw = raw


class SessionStateError(ScenescoutError):
    """Operation invoked while the session is in the wrong status."""

    code = "conflict"

    def __init__(self, op: str, status: str):
        super().__init__(f"operation {op!r} not valid while session is {status}")
        self.op = op
        self.status = status


class ValidationError(ScenescoutError):
    """A record violates one of the annotation-form invariants."""

    code = "validation"

    def __init__(self, rule: str):
        super().__init__(rule)
        self.rule = rule


class ConfigError(ScenescoutError):
    """Service configuration is missing or out of bounds."""

    code = "config"

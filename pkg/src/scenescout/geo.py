"""Pure geodesy and route-geometry utilities.

Spherical earth, R = 6,371,000 m. All headings are degrees clockwise from
true north in [0, 360). Everything here is a pure function over immutable
values and safe for unrestricted concurrent use.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .errors import DegenerateBearingError, InvalidArgumentError, OutOfRangeError

EARTH_RADIUS_M = 6_371_000.0

Cardinal = str

CARDINALS: tuple[Cardinal, ...] = (
    "North",
    "Northeast",
    "East",
    "Southeast",
    "South",
    "Southwest",
    "West",
    "Northwest",
)


def normalize_heading(deg: float) -> float:
    """Wrap a heading into [0, 360)."""
    if not math.isfinite(deg):
        raise InvalidArgumentError(f"heading must be finite, got {deg!r}")
    h = math.fmod(deg, 360.0)
    if h < 0:
        h += 360.0
    return 0.0 if h == 360.0 else h


def heading_difference(a: float, b: float) -> float:
    """Smallest absolute angular difference between two headings, in [0, 180]."""
    d = abs(normalize_heading(a) - normalize_heading(b))
    return 360.0 - d if d > 180.0 else d


@dataclass(frozen=True)
class GeoCoordinate:
    """Latitude/longitude pair in degrees; lon normalized to (-180, 180]."""

    lat: float
    lon: float

    def __post_init__(self):
        if not (math.isfinite(self.lat) and math.isfinite(self.lon)):
            raise InvalidArgumentError(f"coordinates must be finite, got ({self.lat!r}, {self.lon!r})")
        if not -90.0 <= self.lat <= 90.0:
            raise InvalidArgumentError(f"latitude {self.lat} outside [-90, 90]")
        lon = math.fmod(self.lon, 360.0)
        if lon > 180.0:
            lon -= 360.0
        elif lon <= -180.0:
            lon += 360.0
        object.__setattr__(self, "lon", lon)


def haversine_distance(a: GeoCoordinate, b: GeoCoordinate) -> float:
    """Great-circle distance in meters between two coordinates."""
    phi1, phi2 = math.radians(a.lat), math.radians(b.lat)
    dphi = math.radians(b.lat - a.lat)
    dlmb = math.radians(b.lon - a.lon)
    s = math.sin(dphi / 2.0) ** 2 + math.cos(phi1) * math.cos(phi2) * math.sin(dlmb / 2.0) ** 2
    return 2.0 * EARTH_RADIUS_M * math.asin(min(1.0, math.sqrt(s)))


def initial_bearing(a: GeoCoordinate, b: GeoCoordinate) -> float:
    """Forward azimuth from a to b in degrees [0, 360)."""
    if a == b:
        raise DegenerateBearingError(f"bearing undefined for identical coordinates {a}")
    phi1, phi2 = math.radians(a.lat), math.radians(b.lat)
    dlmb = math.radians(b.lon - a.lon)
    y = math.sin(dlmb) * math.cos(phi2)
    x = math.cos(phi1) * math.sin(phi2) - math.sin(phi1) * math.cos(phi2) * math.cos(dlmb)
    return normalize_heading(math.degrees(math.atan2(y, x)))


def destination_point(start: GeoCoordinate, bearing_deg: float, distance_m: float) -> GeoCoordinate:
    """Advance along the great circle from start on the given bearing."""
    if distance_m < 0:
        raise InvalidArgumentError(f"distance must be nonnegative, got {distance_m}")
    la1 = math.radians(start.lat)
    lo1 = math.radians(start.lon)
    theta = math.radians(normalize_heading(bearing_deg))
    delta = distance_m / EARTH_RADIUS_M
    la2 = math.asin(math.sin(la1) * math.cos(delta) + math.cos(la1) * math.sin(delta) * math.cos(theta))
    lo2 = lo1 + math.atan2(
        math.sin(theta) * math.sin(delta) * math.cos(la1),
        math.cos(delta) - math.sin(la1) * math.sin(la2),
    )
    return GeoCoordinate(math.degrees(la2), math.degrees(lo2))


class PointKind(enum.Enum):
    MID_BLOCK = "MidBlock"
    INTERSECTION = "Intersection"
    DESTINATION = "Destination"


@dataclass(frozen=True)
class SamplePoint:
    """One position along a route with its travel heading and classification."""

    coord: GeoCoordinate
    heading: float
    distance_from_start: float
    kind: PointKind = PointKind.MID_BLOCK


@dataclass(frozen=True)
class SamplingConfig:
    """Spacing bounds for route sampling, meters."""

    min_interval_m: float = 30.0
    max_interval_m: float = 40.0

    def __post_init__(self):
        if not 0 < self.min_interval_m <= self.max_interval_m:
            raise InvalidArgumentError(
                f"need 0 < min <= max, got [{self.min_interval_m}, {self.max_interval_m}]"
            )


@dataclass(frozen=True)
class Polyline:
    """Ordered route geometry; at least two points, no consecutive duplicates."""

    points: tuple[GeoCoordinate, ...]
    _cumulative: tuple[float, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        pts = tuple(self.points)
        if len(pts) < 2:
            raise InvalidArgumentError("polyline needs at least 2 points")
        cumulative = [0.0]
        for prev, curr in zip(pts, pts[1:]):
            if prev == curr:
                raise InvalidArgumentError("polyline has consecutive duplicate points")
            cumulative.append(cumulative[-1] + haversine_distance(prev, curr))
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "_cumulative", tuple(cumulative))

    @property
    def total_length_m(self) -> float:
        return self._cumulative[-1]

    def interpolate(self, d: float) -> GeoCoordinate:
        return interpolate_along(self, d)

    def heading_at(self, d: float) -> float:
        """Bearing of the segment containing distance d (last segment at the end)."""
        i = self._segment_index(d)
        return initial_bearing(self.points[i], self.points[i + 1])

    def _segment_index(self, d: float) -> int:
        if not 0.0 <= d <= self.total_length_m + 1e-9:
            raise OutOfRangeError(f"distance {d} outside [0, {self.total_length_m}]")
        cum = self._cumulative
        lo, hi = 0, len(cum) - 1
        while lo + 1 < hi:
            mid = (lo + hi) // 2
            if cum[mid] <= d:
                lo = mid
            else:
                hi = mid
        return lo

    def offset_of(self, i: int) -> float:
        return self._cumulative[i]


def total_length(p: Polyline) -> float:
    return p.total_length_m


def interpolate_along(p: Polyline, d: float) -> GeoCoordinate:
    """Point at distance d along the polyline (spherical advance within a segment)."""
    if not 0.0 <= d <= p.total_length_m + 1e-9:
        raise OutOfRangeError(f"distance {d} outside [0, {p.total_length_m}]")
    if d >= p.total_length_m:
        return p.points[-1]
    i = p._segment_index(d)
    within = d - p.offset_of(i)
    if within <= 0.0:
        return p.points[i]
    bearing = initial_bearing(p.points[i], p.points[i + 1])
    return destination_point(p.points[i], bearing, within)


def _gap_plan(length_m: float, cfg: SamplingConfig) -> list[float]:
    """Consecutive gap sizes covering length_m.

    Marches at the interval midpoint; when the leftover final gap falls under
    the minimum, redistributes uniformly over k or k+1 intervals (whichever
    in-range gap is closest to the midpoint). Only the final gap may end up
    shorter than the minimum.
    """
    eps = 1e-6
    lo, hi = cfg.min_interval_m, cfg.max_interval_m
    mid = (lo + hi) / 2.0
    if length_m <= hi + eps:
        return [length_m]
    k = int(length_m // mid)
    rest = length_m - k * mid
    if rest < eps:
        return [mid] * k
    if rest >= lo - eps:
        return [mid] * k + [rest]
    for n in (k, k + 1):
        gap = length_m / n
        if lo - eps <= gap <= hi + eps:
            return [gap] * n
    return [mid] * k + [rest]


def sample_route(p: Polyline, cfg: SamplingConfig = SamplingConfig()) -> list[SamplePoint]:
    """Sample positions along the route within the configured spacing.

    First sample at distance 0, last at the route end (kind Destination,
    which may sit closer than the minimum interval); every sample's heading
    is the bearing of the polyline segment it falls on. All non-final kinds
    start as MidBlock; classification against map metadata happens upstream.
    """
    if p.total_length_m <= 0:
        raise InvalidArgumentError("cannot sample a zero-length polyline")
    distances = [0.0]
    for gap in _gap_plan(p.total_length_m, cfg):
        distances.append(min(distances[-1] + gap, p.total_length_m))
    samples = []
    for idx, d in enumerate(distances):
        last = idx == len(distances) - 1
        samples.append(
            SamplePoint(
                coord=interpolate_along(p, d),
                heading=p.heading_at(d),
                distance_from_start=d,
                kind=PointKind.DESTINATION if last else PointKind.MID_BLOCK,
            )
        )
    return samples


def cardinal_of(heading: float) -> Cardinal:
    """Nearest of the 8 compass sectors; boundary ties resolve clockwise."""
    h = normalize_heading(heading)
    return CARDINALS[int((h + 22.5) // 45.0) % 8]

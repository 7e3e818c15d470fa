"""Independent brute-force geodesy oracle.

Checks the analytic great-circle formulas against a numeric construction
that shares no code with the implementation: points are slerped along the
unit-sphere arc and the distance is the sum of tiny chords; the bearing is
the local east/north azimuth of a half-meter advance along that arc.
"""

from __future__ import annotations

import numpy as np

EARTH_RADIUS_M = 6_371_000.0
_STEPS = 20_000


def _unit(lat: float, lon: float) -> np.ndarray:
    la, lo = np.radians(lat), np.radians(lon)
    return np.array([np.cos(la) * np.cos(lo), np.cos(la) * np.sin(lo), np.sin(la)])


def _slerp(u: np.ndarray, v: np.ndarray, t: np.ndarray) -> np.ndarray:
    omega = np.arccos(np.clip(np.dot(u, v), -1.0, 1.0))
    if omega == 0.0:
        return np.tile(u, (len(t), 1))
    return (np.sin((1 - t) * omega)[:, None] * u + np.sin(t * omega)[:, None] * v) / np.sin(omega)


def oracle_distance(a: tuple[float, float], b: tuple[float, float], steps: int = _STEPS) -> float:
    """Arc length by chord summation along the slerped great circle."""
    u, v = _unit(*a), _unit(*b)
    t = np.linspace(0.0, 1.0, steps + 1)
    points = _slerp(u, v, t)
    chords = np.linalg.norm(np.diff(points, axis=0), axis=1)
    return float(EARTH_RADIUS_M * chords.sum())


def oracle_bearing(a: tuple[float, float], b: tuple[float, float]) -> float:
    """Azimuth of a ~0.5 m advance along the arc, via a local ENU frame."""
    u, v = _unit(*a), _unit(*b)
    omega = float(np.arccos(np.clip(np.dot(u, v), -1.0, 1.0)))
    if omega == 0.0:
        raise ValueError("bearing undefined for identical points")
    t = np.array([min(0.5, 0.5 / (EARTH_RADIUS_M * omega))])
    p = _slerp(u, v, t)[0]
    lat2 = float(np.degrees(np.arcsin(np.clip(p[2], -1.0, 1.0))))
    lon2 = float(np.degrees(np.arctan2(p[1], p[0])))
    lat1, lon1 = a
    dlon = np.radians(((lon2 - lon1 + 180.0) % 360.0) - 180.0)
    dx = float(dlon * np.cos(np.radians((lat1 + lat2) / 2.0)) * EARTH_RADIUS_M)
    dy = float(np.radians(lat2 - lat1) * EARTH_RADIUS_M)
    return float((np.degrees(np.arctan2(dx, dy)) + 360.0) % 360.0)


def angle_delta(a: float, b: float) -> float:
    d = abs(a - b) % 360.0
    return 360.0 - d if d > 180.0 else d

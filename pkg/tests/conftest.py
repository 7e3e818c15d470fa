"""Shared fixtures: the checked-in bundle and the canonical scenario inputs."""

from __future__ import annotations

from pathlib import Path

import pytest

from scenescout.geo import GeoCoordinate
from scenescout.providers import FixtureBundle, ProviderSet, fixture_provider_set

REPO_ROOT = Path(__file__).resolve().parents[1]
BUNDLE_DIR = REPO_ROOT / "fixtures" / "bundle"

# Canonical fixture coordinates (see fixtures/gen_bundle.py).
PREVIEW_ORIGIN = GeoCoordinate(47.620000, -122.338000)
PREVIEW_DESTINATION = GeoCoordinate(47.620000 + 300.0 / 111194.9266, -122.338000)
PREVIEW_DESTINATION_NAME = "Westlake & Thomas Stop"
EXPLORE_START = GeoCoordinate(40.723700 - 80.0 / 111194.9266, -73.944000)
FIG3_INTENT = (
    "I am buying a new house in this area and would like to see if this neighborhood "
    "is a quiet residential area with parks and good amenities."
)


@pytest.fixture(scope="session")
def bundle_dir() -> Path:
    assert BUNDLE_DIR.is_dir(), "run fixtures/gen_bundle.py first"
    return BUNDLE_DIR


@pytest.fixture(scope="session")
def bundle(bundle_dir) -> FixtureBundle:
    return FixtureBundle.load(bundle_dir)


@pytest.fixture()
def providers(bundle_dir) -> ProviderSet:
    return fixture_provider_set(bundle_dir)

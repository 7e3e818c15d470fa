"""Regenerate the checked-in fixture bundle (fixtures/bundle/).

Deterministic by construction: JSON is dumped sorted, tiles are tiny PNGs
whose pixel color derives from the tile name hash. Run from the repo root:

    python fixtures/gen_bundle.py
"""

from __future__ import annotations

import hashlib
import json
import struct
import sys
import zlib
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from scenescout.geo import GeoCoordinate, destination_point

BUNDLE_DIR = Path(__file__).resolve().parent / "bundle"

# Route Preview world: a straight 300 m block going north.
PREVIEW_ORIGIN = GeoCoordinate(47.620000, -122.338000)
PREVIEW_LENGTH_M = 300.0
PREVIEW_STREET = "Westlake Avenue N"
SAMPLE_SPACING_M = 37.5  # 300 m splits into 8 uniform gaps under the [30, 40] policy

# Virtual Exploration world: a small street grid around one intersection.
EXPLORE_BASE = GeoCoordinate(40.723700, -73.944000)
GRID_STEP_M = 80.0


def offset(base: GeoCoordinate, north_m: float, east_m: float) -> GeoCoordinate:
    point = destination_point(base, 0.0, north_m) if north_m >= 0 else destination_point(base, 180.0, -north_m)
    if east_m:
        point = destination_point(point, 90.0, east_m) if east_m >= 0 else destination_point(point, 270.0, -east_m)
    return point


def png_bytes(name: str, size: int = 8) -> bytes:
    """Minimal solid-color RGB PNG; color keyed to the tile name."""
    r, g, b = hashlib.sha256(name.encode()).digest()[:3]
    raw = b"".join(b"\x00" + bytes([r, g, b]) * size for _ in range(size))

    def chunk(tag: bytes, payload: bytes) -> bytes:
        return (
            struct.pack(">I", len(payload))
            + tag
            + payload
            + struct.pack(">I", zlib.crc32(tag + payload) & 0xFFFFFFFF)
        )

    ihdr = struct.pack(">IIBBBBB", size, size, 8, 2, 0, 0, 0)
    idat = zlib.compress(raw, 9)
    return b"\x89PNG\r\n\x1a\n" + chunk(b"IHDR", ihdr) + chunk(b"IDAT", idat) + chunk(b"IEND", b"")


def preview_world() -> tuple[dict, list[dict], list[dict], dict]:
    end = offset(PREVIEW_ORIGIN, PREVIEW_LENGTH_M, 0)
    route = {
        "polyline": [
            [PREVIEW_ORIGIN.lat, PREVIEW_ORIGIN.lon],
            [end.lat, end.lon],
        ],
        "steps": [
            {
                "maneuver": "Depart",
                "location": [PREVIEW_ORIGIN.lat, PREVIEW_ORIGIN.lon],
                "street_name": PREVIEW_STREET,
            },
            {"maneuver": "Arrive", "location": [end.lat, end.lon], "street_name": PREVIEW_STREET},
        ],
        "total_length_m": PREVIEW_LENGTH_M,
    }

    panoramas = []
    ids = [f"rp{i}" for i in range(9)]
    for i, pano_id in enumerate(ids):
        coord = offset(PREVIEW_ORIGIN, i * SAMPLE_SPACING_M, 0)
        links = []
        if i > 0:
            links.append({"heading": 180.0, "target": ids[i - 1], "street_name": PREVIEW_STREET})
        if i < 8:
            links.append({"heading": 0.0, "target": ids[i + 1], "street_name": PREVIEW_STREET})
        if i == 0:
            # Departure corner is a 4-way intersection: three stub arms.
            for heading, arm in ((90.0, "rp0e"), (180.0, "rp0s"), (270.0, "rp0w")):
                links.append({"heading": heading, "target": arm, "street_name": "Thomas Street"})
        panoramas.append(
            {"id": pano_id, "lat": coord.lat, "lon": coord.lon, "capture_date": "2023-05", "links": links}
        )
    for heading, arm in ((90.0, "rp0e"), (180.0, "rp0s"), (270.0, "rp0w")):
        coord = offset(
            PREVIEW_ORIGIN,
            -GRID_STEP_M if heading == 180.0 else 0,
            GRID_STEP_M if heading == 90.0 else (-GRID_STEP_M if heading == 270.0 else 0),
        )
        back = (heading + 180.0) % 360.0
        panoramas.append(
            {
                "id": arm,
                "lat": coord.lat,
                "lon": coord.lon,
                "capture_date": "2023-05",
                "links": [{"heading": back, "target": "rp0", "street_name": "Thomas Street"}],
            }
        )

    places = [
        # Exactly three places within 100 m of rp0 (the intersection).
        {
            "name": "Salt & Pepper Deli Market",
            "category": "deli",
            "lat": offset(PREVIEW_ORIGIN, 30.0, 30.0).lat,
            "lon": offset(PREVIEW_ORIGIN, 30.0, 30.0).lon,
        },
        {
            "name": "California Closets",
            "category": "home goods store",
            "lat": offset(PREVIEW_ORIGIN, 0.0, -59.0).lat,
            "lon": offset(PREVIEW_ORIGIN, 0.0, -59.0).lon,
        },
        {
            "name": "Caffe Ladro",
            "category": "coffee shop",
            "lat": offset(PREVIEW_ORIGIN, 75.0, 0.0).lat,
            "lon": offset(PREVIEW_ORIGIN, 75.0, 0.0).lon,
        },
        # Destination-side transit stop, near rp8.
        {
            "name": "Westlake & Thomas Stop",
            "category": "bus stop",
            "lat": offset(PREVIEW_ORIGIN, PREVIEW_LENGTH_M + 30.0, 0.0).lat,
            "lon": offset(PREVIEW_ORIGIN, PREVIEW_LENGTH_M + 30.0, 0.0).lon,
        },
    ]

    script: dict[str, str] = {}
    segment_texts = [
        None,  # rp0 is the intersection
        (
            "A glass-walled building with colorful food illustrations is on the left and the sidewalk stays wide and smooth. "
            "Salt & Pepper Deli Market is 18 meters Northeast with a reserved parking sign out front.",
            "On the left, a glass-walled building with food illustrations; on the right, Salt & Pepper Deli Market with a reserved parking sign. Wide concrete sidewalk, street parking on both sides.",
            "Wide sidewalk past a glass building on the left; Salt & Pepper Deli Market is 18 meters Northeast.",
        ),
        (
            "A large tree provides shade over the sidewalk and Caffe Ladro is 40 meters North on the right with outdoor seating signs. "
            "The sidewalk surface stays concrete with no obstacles; the curb line holds parked cars.",
            "Sidewalk shaded by a large tree; Caffe Ladro is 40 meters North on the right. No obstacles on the concrete path.",
            "Shaded sidewalk with Caffe Ladro 40 meters North on the right.",
        ),
        (
            "Mid-rise office buildings now line both sides and the building entrances sit flush with the sidewalk. "
            "A bicycle rack stands near the curb halfway down the block; overhead tram lines are visible.",
            "Office buildings on both sides with flush entrances, a bicycle rack near the curb, and overhead tram lines.",
            "Office-lined block with a bicycle rack near the curb.",
        ),
        (
            "The sidewalk narrows slightly around a planted median strip with young trees in metal grates. "
            "A blue mailbox and a fire hydrant sit on the right edge of the path; the street signs read Westlake Avenue N.",
            "Slightly narrower sidewalk with tree grates; a mailbox and a hydrant sit on the right. Street signs read Westlake Avenue N.",
            "Sidewalk narrows at tree grates; mailbox and hydrant on the right.",
        ),
        (
            "A parking garage entrance crosses the sidewalk on the left with a driveway apron of brick pavers, a texture change underfoot. "
            "Drivers exit across the path here; a convex mirror is mounted on the garage wall.",
            "Parking garage driveway crosses the path on the left with brick pavers underfoot; watch for exiting cars.",
            "Garage driveway crosses the sidewalk on the left with a brick texture change.",
        ),
        (
            "The block opens onto a small plaza on the right with movable chairs and planters; the walking path keeps a clear two-meter corridor. "
            "A row of food trucks usually parks along the curb; their signboards change daily.",
            "Small plaza with chairs and planters on the right; a clear two-meter corridor continues straight.",
            "Plaza with seating on the right; the path ahead stays clear.",
        ),
        (
            "Construction scaffolding covers the left building face with a covered walkway protecting the sidewalk; lighting inside is dim. "
            "The covered section is 25 meters long and the surface inside is plywood rather than concrete.",
            "Covered construction walkway on the left for 25 meters with a plywood surface; dim lighting inside.",
            "Covered scaffolding walkway on the left with a plywood floor.",
        ),
        (
            "The scaffolding ends and the sidewalk returns to concrete; Westlake & Thomas Stop is 68 meters North with its glass shelter visible ahead. "
            "A trash bin and a ticket vending machine stand between the shelter and the curb.",
            "Concrete sidewalk resumes; Westlake & Thomas Stop is 68 meters North, with a trash bin and ticket machine near the shelter.",
            "Westlake & Thomas Stop is 68 meters North; shelter, bin, and ticket machine ahead.",
        ),
        (
            "The bus shelter sits on the right edge of a widened sidewalk: glass panels, a metal bench, and a RapidRide sign above the schedule post. "
            "Tactile paving marks the boarding area; the curb is raised for level boarding.",
            "Bus shelter on the right with glass panels, a bench, and a RapidRide sign; tactile paving marks the boarding area.",
            "Arrived: glass bus shelter on the right with a RapidRide sign and tactile paving.",
        ),
    ]
    script["intersection:rp0"] = json.dumps(
        {
            "long_description": (
                "A four-way intersection of Westlake Avenue N and Thomas Street with audible pedestrian signals at all corners. "
                "Tactile pavings and curb ramps are present on all four sides and traffic lights hang diagonally. "
                "Salt & Pepper Deli Market is 42 meters Northeast, California Closets is 59 meters West, and Caffe Ladro is 75 meters North. "
                "Overhead electrical tram lines cross the intersection and the wide sidewalks are unobstructed."
            ),
            "medium_description": (
                "Four-way intersection with audible pedestrian signals, tactile pavings, and curb ramps at all corners. "
                "Salt & Pepper Deli Market is 42 meters Northeast and California Closets is 59 meters West."
            ),
            "short_description": (
                "Four-way intersection with audible pedestrian signals and tactile pavings; California Closets is 59 meters West."
            ),
        }
    )
    for i, triple in enumerate(segment_texts):
        if triple is None:
            continue
        long_text, medium_text, short_text = triple
        body = json.dumps(
            {
                "long_description": long_text,
                "medium_description": medium_text,
                "short_description": short_text,
            }
        )
        # One fenced response exercises the tolerant parser on the happy path.
        script[f"segment:rp{i}"] = f"```json\n{body}\n```" if i == 3 else body
    script["destination:rp6,rp7,rp8"] = json.dumps(
        {
            "path_summary": (
                "The path to the bus stop is straight along a bustling city street lined with modern buildings; "
                "the last block passes a covered construction walkway before the sidewalk widens."
            ),
            "place_summary": (
                "The bus stop sits along a wide sidewalk shaded by trees, with a glass canopy shelter, "
                "a metallic bench, and a schedule post. A ticket vending machine stands beside the shelter."
            ),
            "mobility_cues": (
                "Landmarks along the route include large office buildings with glass facades, intersection traffic "
                "lights, regularly spaced trees, and the trash bin just before the shelter."
            ),
            "sidewalk": (
                "The sidewalk is concrete, wide enough to navigate easily, smooth, and without significant cracks; "
                "tactile paving marks the boarding area at the stop."
            ),
            "text": (
                "Signage near the bus stop includes the RapidRide sign above the schedule post and street address "
                "numbers such as 320 on nearby buildings."
            ),
        }
    )
    return route, panoramas, places, script


EXPLORE_NODES: dict[str, tuple[float, float]] = {
    # name: (north_m, east_m) offsets from EXPLORE_BASE (the intersection).
    "ex_ix": (0.0, 0.0),
    "ex_start": (-GRID_STEP_M, 0.0),
    "ex_s0": (-2 * GRID_STEP_M, 0.0),
    "ex_n1": (GRID_STEP_M, 0.0),
    "ex_n2": (2 * GRID_STEP_M, 0.0),
    "ex_w1": (0.0, -GRID_STEP_M),
    "ex_t": (0.0, -2 * GRID_STEP_M),
    "ex_tn": (GRID_STEP_M, -2 * GRID_STEP_M),
    "ex_ts": (-GRID_STEP_M, -2 * GRID_STEP_M),
    "ex_e1": (0.0, GRID_STEP_M),
    "ex_e2": (0.0, 2 * GRID_STEP_M),
}

RUSSELL = "Russell Street"
NORMAN = "Norman Avenue"
APOLLO = "Apollo Street"

EXPLORE_LINKS: dict[str, list[tuple[float, str, str]]] = {
    "ex_start": [(0.0, "ex_ix", RUSSELL), (180.0, "ex_s0", RUSSELL)],
    "ex_s0": [(0.0, "ex_start", RUSSELL)],
    # No link back south: arriving from ex_start the three options are exactly
    # North on Russell, West on Norman, East on Norman.
    "ex_ix": [(0.0, "ex_n1", RUSSELL), (270.0, "ex_w1", NORMAN), (90.0, "ex_e1", NORMAN)],
    "ex_n1": [(0.0, "ex_n2", RUSSELL), (180.0, "ex_ix", RUSSELL)],
    "ex_n2": [(180.0, "ex_n1", RUSSELL)],
    "ex_w1": [(270.0, "ex_t", NORMAN), (90.0, "ex_ix", NORMAN)],
    "ex_t": [(0.0, "ex_tn", APOLLO), (180.0, "ex_ts", APOLLO), (90.0, "ex_w1", NORMAN)],
    "ex_tn": [(180.0, "ex_t", APOLLO)],
    "ex_ts": [(0.0, "ex_t", APOLLO)],
    "ex_e1": [(90.0, "ex_e2", NORMAN), (270.0, "ex_ix", NORMAN)],
    "ex_e2": [(270.0, "ex_e1", NORMAN)],
}


def exploration_world() -> tuple[list[dict], list[dict], dict]:
    panoramas = []
    for name, (north_m, east_m) in EXPLORE_NODES.items():
        coord = offset(EXPLORE_BASE, north_m, east_m)
        panoramas.append(
            {
                "id": name,
                "lat": coord.lat,
                "lon": coord.lon,
                "capture_date": "2022-09",
                "links": [
                    {"heading": heading, "target": target, "street_name": street}
                    for heading, target, street in EXPLORE_LINKS[name]
                ],
            }
        )

    park = offset(EXPLORE_BASE, GRID_STEP_M + 40.0, 20.0)
    grocery = offset(EXPLORE_BASE, 0.0, GRID_STEP_M + 45.0)
    places = [
        {"name": "McGolrick Park", "category": "park", "lat": park.lat, "lon": park.lon},
        {"name": "Key Food", "category": "grocery store", "lat": grocery.lat, "lon": grocery.lon},
    ]

    script: dict[str, str] = {}
    script["keywords:-"] = json.dumps(
        {"keywords": ["Parks", "Grocery stores", "Community centers", "Residential area"]}
    )
    script["place_type:-"] = json.dumps({"place_type": "quiet residential area"})

    block_texts = {
        "ex_start": (
            "Russell Street runs straight ahead with three-story brick rowhouses on both sides and mature street trees in pits. "
            "The sidewalk is concrete, about two meters wide, with driveway aprons every few houses; parked cars line both curbs.",
            "Brick rowhouses line Russell Street with street trees and a two-meter concrete sidewalk; parked cars on both curbs.",
            "Residential block of rowhouses with a clear two-meter sidewalk.",
        ),
        "ex_n1": (
            "North of the intersection Russell Street stays residential with stoops that extend slightly into the path. "
            "McGolrick Park is 45 meters Northeast; its iron fence runs along the right sidewalk ahead.",
            "Residential block with stoops narrowing the path; McGolrick Park is 45 meters Northeast behind an iron fence.",
            "Rowhouse block with McGolrick Park 45 meters Northeast.",
        ),
        "ex_n2": (
            "The block ends at a fenced community garden with raised beds; the roadway continues but the sidewalk surface turns to older hexagonal pavers. "
            "No commercial storefronts are visible; the street stays quiet.",
            "Block ends at a community garden; sidewalk switches to older hexagonal pavers.",
            "Quiet dead-end block by a community garden.",
        ),
        "ex_w1": (
            "Norman Avenue heads west with mid-rise apartment buildings on the left and a church with a stone staircase on the right. "
            "Curb cuts are present at each corner; a painted bike lane runs beside the parking lane.",
            "Mid-rise apartments and a stone-stair church along Norman Avenue; curb cuts at each corner.",
            "Apartment-lined block of Norman Avenue with curb cuts.",
        ),
        "ex_t": (
            "Norman Avenue meets Apollo Street at a T; a small bakery with a striped awning sits on the near corner. "
            "Tactile paving is present only on the Apollo Street corners.",
            "T-intersection with Apollo Street; bakery with striped awning on the near corner, tactile paving on Apollo corners.",
            "T-intersection at Apollo Street with a corner bakery.",
        ),
        "ex_e1": (
            "Norman Avenue heads east past a mix of rowhouses and a corner laundromat; Key Food is 45 meters East with a lit sign above its entrance. "
            "The sidewalk has a short cobblestone strip at the laundromat's loading door.",
            "Mixed rowhouses and a laundromat; Key Food grocery is 45 meters East. Short cobblestone strip underfoot.",
            "Key Food grocery is 45 meters East along this block.",
        ),
        "ex_e2": (
            "The block transitions toward light industry with a vehicle workshop and a chain-link yard on the left; foot traffic is sparse. "
            "The sidewalk narrows where utility poles sit mid-path.",
            "Light-industrial block with a workshop and chain-link yard; utility poles narrow the sidewalk.",
            "Industrial block with poles narrowing the path.",
        ),
        "ex_s0": (
            "Russell Street ends at a fenced rail cut; a turnaround loop has no marked sidewalk on its far side. "
            "A single bench and a historic marker plaque stand by the fence.",
            "Street ends at a fenced rail cut with a bench and a marker plaque.",
            "Dead end at a fenced rail cut.",
        ),
        "ex_tn": (
            "Apollo Street north holds a row of small workshops with roll-up doors; the sidewalk is intact but stained with oil near driveways. "
            "No trees or benches along this stretch.",
            "Workshop row with roll-up doors; intact but oil-stained sidewalk.",
            "Workshop-lined stretch of Apollo Street.",
        ),
        "ex_ts": (
            "Apollo Street south passes a fenced playground with a spring rider visible; a water fountain stands at the gate. "
            "The sidewalk is wide and freshly poured.",
            "Fenced playground with a gate-side water fountain; wide new sidewalk.",
            "Playground block with a wide new sidewalk.",
        ),
        "ex_ix": (
            "From the center of the Russell and Nassau intersection, rowhouses continue in every direction with corner tree pits. "
            "All four corners have curb cuts; the crossing is unsignalized.",
            "Unsignalized intersection with curb cuts and corner tree pits.",
            "Unsignalized corner with curb cuts.",
        ),
    }
    for pano_id, (long_text, medium_text, short_text) in block_texts.items():
        script[f"exploration_block:{pano_id}"] = json.dumps(
            {
                "long_description": long_text,
                "medium_description": medium_text,
                "short_description": short_text,
            }
        )

    # Fig.-3 decision point: three ways out of ex_ix, arriving from ex_start.
    script["direction:ex_ix_h000_f090"] = json.dumps(
        {
            "description": (
                "Heading North on Russell Street: Residential buildings line both sides with ample on-street "
                "parking and well-maintained sidewalks. The presence of trees indicates some greenery, contributing "
                "to a quieter, residential feel. No visible commercial areas or parks in this view, suggesting a "
                "strictly residential zone with limited immediate amenities."
            )
        }
    )
    script["direction:ex_ix_h270_f090"] = json.dumps(
        {
            "description": (
                "Heading West on Norman Avenue: The street features residential buildings and parked cars on both "
                "sides, indicating a residential area. The presence of both mid-rise apartment complexes and houses "
                "suggests a mixed residential environment. Limited green space in sight, so parks might be located "
                "further along or on adjacent streets."
            )
        }
    )
    script["direction:ex_ix_h090_f090"] = json.dumps(
        {
            "description": (
                "Heading East on Norman Avenue: This area appears to be a mix of residential and commercial "
                "buildings with parked cars and some industrial presence. It might not be the quietest residential "
                "neighborhood, but it does have good amenities and street activity."
            )
        }
    )
    script["selector:ex_ix_h000_f090,ex_ix_h270_f090,ex_ix_h090_f090"] = json.dumps(
        {
            "idx": "1",
            "reason": (
                "Head north on Russell Street because of the residential buildings, ample on-street parking, "
                "well-maintained sidewalks, and presence of trees, indicating a quieter residential area."
            ),
        }
    )

    # T-intersection at ex_t, arriving from ex_w1 (reverse listed last).
    script["direction:ex_t_h000_f090"] = json.dumps(
        {
            "description": (
                "Heading North on Apollo Street: leads past small workshops with roll-up doors and no greenery; "
                "unlikely to hold parks or residential amenities."
            )
        }
    )
    script["direction:ex_t_h180_f090"] = json.dumps(
        {
            "description": (
                "Heading South on Apollo Street: a fenced playground and a wide new sidewalk suggest family "
                "amenities and a quieter residential pocket."
            )
        }
    )
    script["direction:ex_t_h090_f090"] = json.dumps(
        {
            "description": (
                "Heading East on Norman Avenue: returns toward the mixed residential blocks already explored; "
                "familiar territory with the church and apartments."
            )
        }
    )
    script["selector:ex_t_h000_f090,ex_t_h180_f090,ex_t_h090_f090"] = json.dumps(
        {
            "idx": "2",
            "reason": (
                "Head South on Apollo Street because the playground and wide sidewalks point to the quiet "
                "residential amenities you are looking for."
            ),
        }
    )
    return panoramas, places, script


def tiles_for(panoramas: list[dict]) -> dict[str, bytes]:
    tiles: dict[str, bytes] = {}
    for pano in panoramas:
        pano_id = pano["id"]
        for heading in range(0, 360, 30):
            stem = f"{pano_id}_h{heading:03d}_f060"
            tiles[stem] = png_bytes(stem)
        for heading in range(0, 360, 90):
            stem = f"{pano_id}_h{heading:03d}_f090"
            tiles[stem] = png_bytes(stem)
    return tiles


def main() -> None:
    route, preview_panos, preview_places, preview_script = preview_world()
    explore_panos, explore_places, explore_script = exploration_world()

    panoramas = preview_panos + explore_panos
    places = preview_places + explore_places
    script = {**preview_script, **explore_script}

    BUNDLE_DIR.mkdir(parents=True, exist_ok=True)
    (BUNDLE_DIR / "routes.json").write_text(
        json.dumps({"routes": [route]}, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    (BUNDLE_DIR / "panoramas.json").write_text(
        json.dumps({"panoramas": panoramas}, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    (BUNDLE_DIR / "places.json").write_text(
        json.dumps({"places": places}, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    (BUNDLE_DIR / "mllm_script.json").write_text(
        json.dumps({"script": script}, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    tiles_dir = BUNDLE_DIR / "tiles"
    tiles_dir.mkdir(exist_ok=True)
    tiles = tiles_for(panoramas)
    for stem, data in tiles.items():
        (tiles_dir / f"{stem}.png").write_bytes(data)
    print(f"bundle written to {BUNDLE_DIR}: {len(panoramas)} panoramas, {len(tiles)} tiles, {len(script)} scripted responses")


if __name__ == "__main__":
    main()

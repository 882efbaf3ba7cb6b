"""Floor-plan model, destination routing and direction generation.

Plans are static documents: an axis-aligned bounded area, the beacon
layout, named points of interest, and one predefined waypoint route per
reachable destination. Directions are quantized from the angle between
the user's heading and the bearing to the next waypoint.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources

from .errors import (
    FloorPlanError,
    NavigationStateError,
    UnknownDestinationError,
)
from .positioning import BeaconNode, NodeLayout, Point

# A destination counts as reached within this radius (inclusive).
ARRIVAL_THRESHOLD = 1.0

_QUARTER = math.pi / 4.0


class Direction(Enum):
    FORWARD = "forward"
    TURN_LEFT = "turn_left"
    TURN_RIGHT = "turn_right"
    TURN_AROUND = "turn_around"
    ARRIVED = "arrived"


def normalize_angle(theta: float) -> float:
    """Wrap an angle into (-pi, pi]."""
    r = math.remainder(theta, math.tau)
    return math.pi if r == -math.pi else r


@dataclass(frozen=True)
class Poi:
    key: str
    name_en: str
    name_ar: str
    anchor: Point

    def name(self, lang: str) -> str:
        return self.name_ar if lang == "ar" else self.name_en


@dataclass(frozen=True)
class UserPose:
    position: Point
    heading: float

    def __post_init__(self):
        object.__setattr__(self, "heading", normalize_angle(self.heading))


@dataclass(frozen=True)
class FloorPlan:
    bounds: tuple[float, float]
    beacons: NodeLayout
    pois: tuple[Poi, ...]
    routes: dict[str, tuple[Point, ...]] = field(default_factory=dict)
    exit_poi: str = "exit"

    def poi(self, key: str) -> Poi:
        for p in self.pois:
            if p.key == key:
                return p
        raise UnknownDestinationError(f"no such destination: {key}")

    def contains(self, point: Point) -> bool:
        return 0.0 <= point[0] <= self.bounds[0] and 0.0 <= point[1] <= self.bounds[1]

    def clamp(self, point: Point) -> Point:
        return (
            min(max(point[0], 0.0), self.bounds[0]),
            min(max(point[1], 0.0), self.bounds[1]),
        )


def _dist(a: Point, b: Point) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


def load_floorplan(document: str) -> FloorPlan:
    """Parse and validate a floor-plan JSON document."""
    try:
        raw = json.loads(document)
    except json.JSONDecodeError as exc:
        raise FloorPlanError(f"floor plan is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise FloorPlanError("floor plan document must be a JSON object")

    try:
        bounds = (float(raw["bounds"]["w"]), float(raw["bounds"]["h"]))
        beacons = NodeLayout(
            nodes=tuple(
                BeaconNode(id=int(b["id"]), position=(float(b["x"]), float(b["y"])))
                for b in raw["beacons"]
            )
        )
        pois = tuple(
            Poi(
                key=str(p["key"]),
                name_en=str(p["name_en"]),
                name_ar=str(p["name_ar"]),
                anchor=(float(p["x"]), float(p["y"])),
            )
            for p in raw["pois"]
        )
        routes = {
            str(key): tuple((float(x), float(y)) for x, y in wps)
            for key, wps in raw.get("routes", {}).items()
        }
        exit_poi = str(raw["exit_poi"])
    except (KeyError, TypeError, ValueError) as exc:
        raise FloorPlanError(f"malformed floor plan field: {exc}") from exc

    if bounds[0] <= 0 or bounds[1] <= 0:
        raise FloorPlanError("bounds: width and height must be positive")
    keys = [p.key for p in pois]
    if len(set(keys)) != len(keys):
        raise FloorPlanError("pois: duplicate keys")
    for p in pois:
        if p.key != p.key.lower():
            raise FloorPlanError(f"pois[{p.key}].key: must be lowercase")
    plan = FloorPlan(bounds=bounds, beacons=beacons, pois=pois, routes=routes, exit_poi=exit_poi)
    for p in pois:
        if not plan.contains(p.anchor):
            raise FloorPlanError(f"pois[{p.key}].anchor: outside plan bounds")
    if exit_poi not in keys:
        raise FloorPlanError(f"exit_poi: references unknown POI {exit_poi!r}")
    for key, wps in routes.items():
        if key not in keys:
            raise FloorPlanError(f"routes[{key}]: references unknown POI")
        if not wps:
            raise FloorPlanError(f"routes[{key}]: route must not be empty")
        if _dist(wps[-1], plan.poi(key).anchor) > ARRIVAL_THRESHOLD:
            raise FloorPlanError(f"routes[{key}]: final waypoint is not at the POI anchor")
    return plan


def plan_to_dict(plan: FloorPlan) -> dict:
    """Document form of a plan, matching the load_floorplan schema."""
    return {
        "bounds": {"w": plan.bounds[0], "h": plan.bounds[1]},
        "beacons": [
            {"id": n.id, "x": n.position[0], "y": n.position[1]} for n in plan.beacons.nodes
        ],
        "pois": [
            {
                "key": p.key,
                "name_en": p.name_en,
                "name_ar": p.name_ar,
                "x": p.anchor[0],
                "y": p.anchor[1],
            }
            for p in plan.pois
        ],
        "routes": {key: [[x, y] for x, y in wps] for key, wps in plan.routes.items()},
        "exit_poi": plan.exit_poi,
    }


def load_reference_plan() -> FloorPlan:
    """The packaged corridor fixture used by the simulator and tests."""
    text = resources.files("amie.data").joinpath("auk-b-corridor.json").read_text("utf-8")
    return load_floorplan(text)


def nearest_poi(position: Point, plan: FloorPlan) -> Poi:
    """POI with the smallest anchor distance; ties go to the smaller key."""
    if not plan.pois:
        raise UnknownDestinationError("plan has no points of interest")
    return min(plan.pois, key=lambda p: (_dist(position, p.anchor), p.key))


def plan_route(plan: FloorPlan, start: Point, dest_key: str) -> list[Point]:
    """Stored route to a destination, minus leading waypoints already reached.

    Destinations without a stored route resolve to their anchor alone.
    Never returns an empty list.
    """
    poi = plan.poi(dest_key)
    if _dist(start, poi.anchor) <= ARRIVAL_THRESHOLD:
        return [poi.anchor]
    waypoints = list(plan.routes.get(dest_key, (poi.anchor,)))
    while len(waypoints) > 1 and _dist(start, waypoints[0]) <= ARRIVAL_THRESHOLD:
        waypoints.pop(0)
    return waypoints


def check_arrival(position: Point, target: Point, threshold: float = ARRIVAL_THRESHOLD) -> bool:
    """True when the target is within the threshold radius, inclusive."""
    if threshold <= 0:
        raise ValueError("arrival threshold must be positive")
    return _dist(position, target) <= threshold


def drop_reached_waypoint(position: Point, waypoints: list[Point]) -> list[Point]:
    """Pop at most one leading waypoint the user has reached.

    One waypoint per tick keeps a turn instruction observable even when
    the following waypoint is already inside the arrival radius.
    """
    if waypoints and _dist(position, waypoints[0]) <= ARRIVAL_THRESHOLD:
        return waypoints[1:]
    return waypoints


def next_direction(pose: UserPose, waypoints: list[Point], dest_anchor: Point) -> Direction:
    """Quantized instruction toward the next waypoint.

    Arrival is declared once the waypoint list is exhausted and the pose
    is within the arrival radius of the destination anchor; the caller
    consumes reached waypoints (see drop_reached_waypoint).
    """
    if not waypoints:
        if check_arrival(pose.position, dest_anchor):
            return Direction.ARRIVED
        raise NavigationStateError("waypoints exhausted away from destination")
    wx, wy = waypoints[0]
    bearing = math.atan2(wy - pose.position[1], wx - pose.position[0])
    delta = normalize_angle(bearing - pose.heading)
    if abs(delta) <= _QUARTER:
        return Direction.FORWARD
    if _QUARTER < delta <= 3.0 * _QUARTER:
        return Direction.TURN_LEFT
    if -3.0 * _QUARTER <= delta < -_QUARTER:
        return Direction.TURN_RIGHT
    return Direction.TURN_AROUND


def emergency_route(plan: FloorPlan, position: Point) -> tuple[list[Point], Point]:
    """Evacuation route to the exit POI plus the triggering origin."""
    return plan_route(plan, position, plan.exit_poi), position

"""Beacon layouts and the RSSI trilateration pipeline.

Localization runs in three steps: pick the three strongest usable
readings, convert them to circle radii with a distance model, then
average the three pairwise circle intersection points closest to the
respective third circle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

from .errors import DegenerateGeometryError, InsufficientSignalError, LayoutError
from .rfmodel import USABLE_RSSI_FLOOR

Point = tuple[float, float]

# Model output is clamped to this radius band before intersecting:
# zero-radius circles are degenerate and extreme extrapolations are absurd.
RADIUS_MIN = 0.01
RADIUS_MAX = 50.0

# Triangles flatter than this count as collinear (mirror-ambiguous).
COLLINEAR_AREA_EPS = 1e-6


@dataclass(frozen=True)
class BeaconNode:
    id: int
    position: Point


@dataclass(frozen=True)
class NodeLayout:
    nodes: tuple[BeaconNode, ...]

    def __post_init__(self):
        ids = [n.id for n in self.nodes]
        if len(set(ids)) != len(ids):
            raise LayoutError("duplicate node ids in layout")
        positions = [n.position for n in self.nodes]
        if len(set(positions)) != len(positions):
            raise LayoutError("duplicate node positions in layout")
        if len(self.nodes) < 3:
            raise LayoutError("localization needs at least 3 nodes")

    def position_of(self, node_id: int) -> Point:
        for n in self.nodes:
            if n.id == node_id:
                return n.position
        raise LayoutError(f"node {node_id} not in layout")

    @property
    def ids(self) -> set[int]:
        return {n.id for n in self.nodes}


@dataclass(frozen=True)
class RssiVector:
    """Per-beacon readings in dBm, keyed by node id. May be partial."""

    readings: dict[int, float] = field(default_factory=dict)

    def usable_for(self, layout: NodeLayout) -> list[tuple[int, float]]:
        """(id, rssi) pairs for layout nodes at or above the usable floor."""
        ids = layout.ids
        return [
            (nid, v)
            for nid, v in self.readings.items()
            if nid in ids and v >= USABLE_RSSI_FLOOR
        ]


@dataclass(frozen=True)
class PositionEstimate:
    position: Point
    used_nodes: tuple[int, int, int]
    intersection_points: tuple[Point, Point, Point]
    fallback_count: int


class CircleIntersection(NamedTuple):
    points: tuple[Point, ...]
    fallback: bool


def build_equidistant_layout(rows: int, cols: int, dx: float, dy: float) -> NodeLayout:
    """Regular grid of beacons, node 1 at the origin, row-major ids."""
    if rows * cols < 3:
        raise LayoutError("grid must contain at least 3 nodes")
    if dx <= 0 or dy <= 0:
        raise LayoutError("grid spacings must be positive")
    nodes = []
    for k in range(rows * cols):
        nodes.append(BeaconNode(id=k + 1, position=((k % cols) * dx, (k // cols) * dy)))
    return NodeLayout(nodes=tuple(nodes))


def reference_layout() -> NodeLayout:
    """Six-beacon corridor grid: 2.5 m across, 5 m along the hallway."""
    return build_equidistant_layout(rows=3, cols=2, dx=2.5, dy=5.0)


def _triangle_area(p1: Point, p2: Point, p3: Point) -> float:
    return 0.5 * abs(
        (p2[0] - p1[0]) * (p3[1] - p1[1]) - (p3[0] - p1[0]) * (p2[1] - p1[1])
    )


def select_strongest_nodes(v: RssiVector, layout: NodeLayout) -> tuple[int, int, int]:
    """Ids of the three strongest usable readings, ties broken by lower id.

    A collinear strongest-three is mirror-ambiguous, so the next usable
    node off that line replaces the weakest of the three.
    """
    usable = sorted(v.usable_for(layout), key=lambda item: (-item[1], item[0]))
    if len(usable) < 3:
        raise InsufficientSignalError(
            f"need 3 usable readings (>= {USABLE_RSSI_FLOOR} dBm), got {len(usable)}"
        )
    chosen = [nid for nid, _ in usable[:3]]
    p1, p2, p3 = (layout.position_of(nid) for nid in chosen)
    if _triangle_area(p1, p2, p3) >= COLLINEAR_AREA_EPS:
        return tuple(chosen)

    # All three sit on one line; any candidate off the line through the
    # two strongest restores a proper triangle.
    for nid, _ in usable[3:]:
        if _triangle_area(p1, p2, layout.position_of(nid)) >= COLLINEAR_AREA_EPS:
            replacement = sorted(
                [(r, i) for i, r in usable if i in (chosen[0], chosen[1], nid)],
                key=lambda item: (-item[0], item[1]),
            )
            return tuple(i for _, i in replacement)
    raise InsufficientSignalError("strongest usable nodes are collinear with no usable replacement")


def intersect_circles(c1: Point, r1: float, c2: Point, r2: float) -> CircleIntersection:
    """Intersection of two circles, with a center-line fallback point.

    Overlapping circles give two points, tangent circles one. Disjoint or
    contained circles have no true intersection; the fallback point sits
    between the two arcs on the center line, clamped into the segment.
    """
    dx = c2[0] - c1[0]
    dy = c2[1] - c1[1]
    d = math.hypot(dx, dy)
    if d < 1e-12:
        raise DegenerateGeometryError("coincident circle centers")

    a = (d * d + r1 * r1 - r2 * r2) / (2.0 * d)
    h_sq = r1 * r1 - a * a
    ux, uy = dx / d, dy / d
    if h_sq < 0:
        t = (r1 + (d - r1 - r2) / 2.0) / d
        t = min(max(t, 0.0), 1.0)
        return CircleIntersection(((c1[0] + t * dx, c1[1] + t * dy),), fallback=True)

    bx, by = c1[0] + a * ux, c1[1] + a * uy
    h = math.sqrt(h_sq)
    if h == 0.0:
        return CircleIntersection(((bx, by),), fallback=False)
    return CircleIntersection(
        ((bx - h * uy, by + h * ux), (bx + h * uy, by - h * ux)), fallback=False
    )


def trilaterate(layout: NodeLayout, v: RssiVector, model) -> PositionEstimate:
    """Estimate a position from beacon readings and a distance model.

    ``model`` needs a ``distance_for(rssi) -> meters`` method. For each
    pair of the three chosen circles, the intersection point most
    consistent with the third circle is kept; the estimate is the mean
    of the three kept points.
    """
    ids = select_strongest_nodes(v, layout)
    centers = [layout.position_of(nid) for nid in ids]
    radii = [
        min(max(model.distance_for(v.readings[nid]), RADIUS_MIN), RADIUS_MAX)
        for nid in ids
    ]

    picked: list[Point] = []
    fallback_count = 0
    for i, j, k in ((0, 1, 2), (0, 2, 1), (1, 2, 0)):
        inter = intersect_circles(centers[i], radii[i], centers[j], radii[j])
        if inter.fallback:
            fallback_count += 1
        third = centers[k]
        best = min(
            inter.points,
            key=lambda p: abs(math.hypot(p[0] - third[0], p[1] - third[1]) - radii[k]),
        )
        picked.append(best)

    position = (
        (picked[0][0] + picked[1][0] + picked[2][0]) / 3.0,
        (picked[0][1] + picked[1][1] + picked[2][1]) / 3.0,
    )
    return PositionEstimate(
        position=position,
        used_nodes=ids,
        intersection_points=tuple(picked),
        fallback_count=fallback_count,
    )

import math
import random

import pytest

from amie.errors import DegenerateGeometryError, InsufficientSignalError, LayoutError
from amie.positioning import (
    BeaconNode,
    NodeLayout,
    RssiVector,
    build_equidistant_layout,
    intersect_circles,
    select_strongest_nodes,
    trilaterate,
)
from amie.rfmodel import DEFAULT_RADIO
from amie.simkit import synthesize_rssi_vector


def test_equidistant_layout_reference_grid():
    layout = build_equidistant_layout(rows=3, cols=2, dx=2.5, dy=5.0)
    assert [(n.id, n.position) for n in layout.nodes] == [
        (1, (0.0, 0.0)),
        (2, (2.5, 0.0)),
        (3, (0.0, 5.0)),
        (4, (2.5, 5.0)),
        (5, (0.0, 10.0)),
        (6, (2.5, 10.0)),
    ]


def test_equidistant_layout_single_row():
    layout = build_equidistant_layout(rows=1, cols=3, dx=1.0, dy=1.0)
    assert [n.position for n in layout.nodes] == [(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)]


def test_equidistant_layout_too_small():
    with pytest.raises(LayoutError):
        build_equidistant_layout(rows=1, cols=2, dx=1.0, dy=1.0)
    with pytest.raises(LayoutError):
        build_equidistant_layout(rows=2, cols=2, dx=-1.0, dy=1.0)


def test_layout_rejects_duplicates():
    with pytest.raises(LayoutError):
        NodeLayout(nodes=(BeaconNode(1, (0, 0)), BeaconNode(1, (1, 0)), BeaconNode(2, (0, 1))))
    with pytest.raises(LayoutError):
        NodeLayout(nodes=(BeaconNode(1, (0, 0)), BeaconNode(2, (0, 0)), BeaconNode(3, (0, 1))))


def test_select_orders_by_strength(layout):
    v = RssiVector(readings={1: -55, 2: -60, 3: -70, 4: -80, 5: -85, 6: -88})
    assert select_strongest_nodes(v, layout) == (1, 2, 3)


def test_select_breaks_ties_by_lower_id(layout):
    v = RssiVector(readings={1: -55, 2: -55, 3: -70, 4: -70, 5: -88, 6: -89})
    assert select_strongest_nodes(v, layout) == (1, 2, 3)


def test_select_requires_three_usable(layout):
    v = RssiVector(readings={1: -55, 2: -60, 3: -91, 4: -95})
    with pytest.raises(InsufficientSignalError):
        select_strongest_nodes(v, layout)


def test_select_collinear_without_replacement_fails(layout):
    # nodes 1,3,5 share the x=0 column; every alternative is below the floor
    v = RssiVector(readings={1: -55, 3: -60, 5: -65, 2: -95, 4: -96, 6: -97})
    with pytest.raises(InsufficientSignalError):
        select_strongest_nodes(v, layout)


def test_select_collinear_swaps_in_next_usable(layout):
    v = RssiVector(readings={1: -55, 3: -60, 5: -65, 2: -70, 4: -96, 6: -97})
    assert select_strongest_nodes(v, layout) == (1, 3, 2)


def test_select_deterministic_under_reordering(layout):
    readings = {1: -55, 2: -60, 3: -70, 4: -80, 5: -85, 6: -88}
    orders = [dict(sorted(readings.items())), dict(sorted(readings.items(), reverse=True))]
    results = {select_strongest_nodes(RssiVector(readings=o), layout) for o in orders}
    assert results == {(1, 2, 3)}


def test_intersect_tangent_circles():
    result = intersect_circles((0.0, 0.0), 1.0, (2.0, 0.0), 1.0)
    assert result.points == ((1.0, 0.0),)
    assert not result.fallback


def test_intersect_two_points():
    # analytic: x = 3 from the radical line, y = +-4 from r^2 - x^2
    result = intersect_circles((0.0, 0.0), 5.0, (6.0, 0.0), 5.0)
    assert not result.fallback
    assert sorted(result.points) == [(3.0, -4.0), (3.0, 4.0)]


def test_intersect_disjoint_fallback_point():
    # t = (1 + (10 - 2)/2) / 10 = 0.5
    result = intersect_circles((0.0, 0.0), 1.0, (10.0, 0.0), 1.0)
    assert result.fallback
    assert result.points == ((5.0, 0.0),)


def test_intersect_contained_fallback_clamped():
    result = intersect_circles((0.0, 0.0), 5.0, (1.0, 0.0), 1.0)
    assert result.fallback
    (x, y), = result.points
    assert 0.0 <= x <= 1.0 and y == 0.0


def test_intersect_coincident_centers():
    with pytest.raises(DegenerateGeometryError):
        intersect_circles((1.0, 1.0), 2.0, (1.0, 1.0), 3.0)


def test_trilaterate_noiseless_exact(layout):
    rng = random.Random(3)
    v = synthesize_rssi_vector(layout, (1.0, 1.0), DEFAULT_RADIO, 0.0, rng)
    estimate = trilaterate(layout, v, DEFAULT_RADIO)
    assert estimate.used_nodes == (1, 2, 3)
    assert estimate.position[0] == pytest.approx(1.0, abs=1e-6)
    assert estimate.position[1] == pytest.approx(1.0, abs=1e-6)
    assert estimate.fallback_count == 0


def test_trilaterate_at_beacon_engages_clamp(layout):
    rng = random.Random(3)
    v = synthesize_rssi_vector(layout, (0.0, 0.0), DEFAULT_RADIO, 0.0, rng)
    estimate = trilaterate(layout, v, DEFAULT_RADIO)
    assert math.hypot(*estimate.position) < 0.05


def test_trilaterate_insufficient_signal(layout):
    v = RssiVector(readings={1: -55, 2: -60, 3: -95, 4: -99})
    with pytest.raises(InsufficientSignalError):
        trilaterate(layout, v, DEFAULT_RADIO)


def test_estimate_position_is_mean_of_points(layout):
    rng = random.Random(11)
    for _ in range(50):
        p = (rng.uniform(0, 2.5), rng.uniform(0, 10.0))
        v = synthesize_rssi_vector(layout, p, DEFAULT_RADIO, 2.0, rng)
        estimate = trilaterate(layout, v, DEFAULT_RADIO)
        mx = sum(q[0] for q in estimate.intersection_points) / 3.0
        my = sum(q[1] for q in estimate.intersection_points) / 3.0
        assert estimate.position == pytest.approx((mx, my), abs=1e-12)


def test_noiseless_roundtrip_grid(layout):
    rng = random.Random(7)
    for _ in range(300):
        p = (rng.uniform(0, 2.5), rng.uniform(0, 10.0))
        v = synthesize_rssi_vector(layout, p, DEFAULT_RADIO, 0.0, rng)
        estimate = trilaterate(layout, v, DEFAULT_RADIO)
        err = math.hypot(estimate.position[0] - p[0], estimate.position[1] - p[1])
        near_beacon = any(
            math.hypot(p[0] - n.position[0], p[1] - n.position[1]) < 0.1 for n in layout.nodes
        )
        if near_beacon or estimate.fallback_count:
            assert err < 0.05
        else:
            assert err < 1e-6


def test_translation_equivariance(layout):
    shift = (17.25, -40.5)
    shifted = NodeLayout(
        nodes=tuple(
            BeaconNode(n.id, (n.position[0] + shift[0], n.position[1] + shift[1]))
            for n in layout.nodes
        )
    )
    rng = random.Random(5)
    for _ in range(25):
        p = (rng.uniform(0.3, 2.2), rng.uniform(0.3, 9.7))
        v = synthesize_rssi_vector(layout, p, DEFAULT_RADIO, 0.0, random.Random(1))
        v2 = synthesize_rssi_vector(
            shifted, (p[0] + shift[0], p[1] + shift[1]), DEFAULT_RADIO, 0.0, random.Random(1)
        )
        a = trilaterate(layout, v, DEFAULT_RADIO).position
        b = trilaterate(shifted, v2, DEFAULT_RADIO).position
        assert b[0] - a[0] == pytest.approx(shift[0], abs=1e-9)
        assert b[1] - a[1] == pytest.approx(shift[1], abs=1e-9)

"""Deterministic simulation of radio, user motion and sensor nodes.

Everything here is driven by explicit seeds and logical time, so a
(config, seed) pair reproduces identical RSSI traces, estimates and
accuracy reports on every run. The sensor bus mirrors the one-channel
hardware constraint: polls are strictly serialized.
"""

from __future__ import annotations

import math
import random
import threading
from dataclasses import dataclass
from typing import NamedTuple

from .errors import AmieError, UnknownRoomError
from .floorplan import FloorPlan, Point, UserPose
from .positioning import NodeLayout, RssiVector, trilaterate
from .rfmodel import LogDistanceModel, predict_rssi_log

POLL_TIMEOUT = 2.0          # seconds before a silent node is given up on
POLL_LATENCY = 0.05         # response time of a healthy node
OCCUPANCY_WINDOW = 30.0     # trailing seconds in which motion counts
MOTION_SENSORS_PER_ROOM = 4
MOTION_TRIGGER_RADIUS = 2.0  # user movement this close to a room anchor trips it

RSSI_MIN = -120.0
RSSI_MAX = 0.0


@dataclass(frozen=True)
class SimConfig:
    plan: FloorPlan
    radio: LogDistanceModel
    noise_sigma: float = 0.0
    seed: int = 0
    step_length: float = 2.0
    trials: int = 1000
    start: Point = (1.0, 1.0)

    def __post_init__(self):
        if self.step_length <= 0:
            raise ValueError("step_length must be positive")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.noise_sigma < 0:
            raise ValueError("noise_sigma must be non-negative")


class PollEvent(NamedTuple):
    room: str
    node: int       # 0 = temperature, 1..4 = motion
    start: float
    end: float
    stale: bool


@dataclass
class MotionReading:
    triggered: bool
    stale: bool


@dataclass
class SensorReadings:
    room: str
    temperature_c: float
    temperature_stale: bool
    motions: list[MotionReading]
    polled_at: float


class _RoomState:
    def __init__(self, temperature: float):
        self.temperature = temperature
        self.motion_last: list[float | None] = [None] * MOTION_SENSORS_PER_ROOM
        self.responsive = {node: True for node in range(MOTION_SENSORS_PER_ROOM + 1)}


class SensorBus:
    """One temperature sensor and four motion sensors per room.

    All nodes share a single channel, so only one poll can be
    outstanding at a time; a lock plus a monotone logical clock enforce
    that and every poll leaves an interval in ``trace``.
    """

    def __init__(self, rooms: dict[str, float] | None = None, poll_timeout: float = POLL_TIMEOUT):
        self._rooms: dict[str, _RoomState] = {}
        self._lock = threading.Lock()
        self.poll_timeout = poll_timeout
        self.clock = 0.0
        self.trace: list[PollEvent] = []
        for key, temperature in (rooms or {}).items():
            self.add_room(key, temperature)

    def add_room(self, key: str, temperature: float = 23.5) -> None:
        self._rooms[key] = _RoomState(temperature)

    def _room(self, key: str) -> _RoomState:
        try:
            return self._rooms[key]
        except KeyError:
            raise UnknownRoomError(f"no such room: {key}") from None

    @property
    def rooms(self) -> list[str]:
        return sorted(self._rooms)

    def set_temperature(self, room: str, value: float) -> None:
        self._room(room).temperature = value

    def record_motion(self, room: str, sensor: int, at_time: float) -> None:
        self._room(room).motion_last[sensor - 1] = at_time

    def set_responsive(self, room: str, node: int, responsive: bool) -> None:
        self._room(room).responsive[node] = responsive

    def advance_clock(self, to_time: float) -> None:
        with self._lock:
            self.clock = max(self.clock, to_time)

    def poll(self, room: str) -> SensorReadings:
        """Poll a room's nodes one at a time in ascending node order.

        A silent node costs the full timeout and its reading is marked
        stale (last known value), without blocking the later nodes.
        """
        with self._lock:
            state = self._room(room)
            polled_at = self.clock
            stale_marks = {}
            for node in range(MOTION_SENSORS_PER_ROOM + 1):
                start = self.clock
                ok = state.responsive.get(node, True)
                self.clock += POLL_LATENCY if ok else self.poll_timeout
                stale_marks[node] = not ok
                self.trace.append(PollEvent(room, node, start, self.clock, not ok))
            motions = [
                MotionReading(
                    triggered=_in_window(state.motion_last[i], polled_at),
                    stale=stale_marks[i + 1],
                )
                for i in range(MOTION_SENSORS_PER_ROOM)
            ]
            return SensorReadings(
                room=room,
                temperature_c=state.temperature,
                temperature_stale=stale_marks[0],
                motions=motions,
                polled_at=polled_at,
            )

    def occupancy(self, room: str, now: float) -> bool:
        state = self._room(room)
        return any(_in_window(last, now) for last in state.motion_last)


def _in_window(last: float | None, now: float) -> bool:
    return last is not None and 0.0 <= now - last <= OCCUPANCY_WINDOW


def poll_sensor_bus(bus: SensorBus, room: str) -> SensorReadings:
    return bus.poll(room)


def room_occupancy(bus: SensorBus, room: str, now: float) -> bool:
    """True when any motion sensor fired within the trailing window."""
    return bus.occupancy(room, now)


def synthesize_rssi_vector(
    layout: NodeLayout,
    true_position: Point,
    radio: LogDistanceModel,
    sigma: float,
    rng: random.Random,
) -> RssiVector:
    """One reading per beacon in layout order; weak readings are kept.

    Readings below the usable floor stay in the vector (marked unusable
    by consumers); values are clipped into the physical dBm band.
    """
    readings = {}
    for node in layout.nodes:
        d = math.hypot(true_position[0] - node.position[0], true_position[1] - node.position[1])
        value = predict_rssi_log(radio, d, sigma, rng)
        readings[node.id] = min(max(value, RSSI_MIN), RSSI_MAX)
    return RssiVector(readings=readings)


@dataclass(frozen=True)
class SimState:
    tick: int
    user: UserPose
    sensors: SensorBus
    rng: random.Random
    bounds: tuple[float, float]


def apply_move(state: SimState, delta: tuple[float, float]) -> SimState:
    """Advance one tick, shifting the user and clamping to the bounds."""
    dx, dy = delta
    x = min(max(state.user.position[0] + dx, 0.0), state.bounds[0])
    y = min(max(state.user.position[1] + dy, 0.0), state.bounds[1])
    heading = math.atan2(dy, dx) if (dx, dy) != (0.0, 0.0) else state.user.heading
    return SimState(
        tick=state.tick + 1,
        user=UserPose(position=(x, y), heading=heading),
        sensors=state.sensors,
        rng=state.rng,
        bounds=state.bounds,
    )


class Simulator:
    """Steerable virtual user plus simulated radio and room sensors.

    Movement near a room's anchor trips one of its motion sensors, so
    occupancy queries react to the steered user. The latest synthesized
    RSSI vector is cached: reading the state does not consume random
    draws, only movement does.
    """

    def __init__(self, config: SimConfig):
        self.config = config
        bus = SensorBus(rooms={p.key: 23.5 for p in config.plan.pois})
        self.state = SimState(
            tick=0,
            user=UserPose(position=config.plan.clamp(config.start), heading=math.pi / 2),
            sensors=bus,
            rng=random.Random(config.seed),
            bounds=config.plan.bounds,
        )
        self.last_rssi = self._synthesize()

    def _synthesize(self) -> RssiVector:
        return synthesize_rssi_vector(
            self.config.plan.beacons,
            self.state.user.position,
            self.config.radio,
            self.config.noise_sigma,
            self.state.rng,
        )

    def move(self, dx: float, dy: float) -> SimState:
        self.state = apply_move(self.state, (dx, dy))
        now = float(self.state.tick)
        self.state.sensors.advance_clock(now)
        if (dx, dy) != (0.0, 0.0):
            for poi in self.config.plan.pois:
                if math.dist(self.state.user.position, poi.anchor) <= MOTION_TRIGGER_RADIUS:
                    self.state.sensors.record_motion(poi.key, 1, now)
        self.last_rssi = self._synthesize()
        return self.state


@dataclass(frozen=True)
class ModelAccuracy:
    mae_x: float
    mae_y: float
    pct_err_x: float
    pct_err_y: float
    accuracy_pct: float
    failures: int


@dataclass(frozen=True)
class AccuracyReport:
    sigma: float
    seed: int
    trials: int
    models: dict[str, ModelAccuracy]

    def to_dict(self) -> dict:
        out = {
            "sigma": self.sigma,
            "seed": self.seed,
            "trials": self.trials,
            "models": {
                name: {
                    "mae_x": m.mae_x,
                    "mae_y": m.mae_y,
                    "pct_err_x": m.pct_err_x,
                    "pct_err_y": m.pct_err_y,
                    "accuracy_pct": m.accuracy_pct,
                    "failures": m.failures,
                }
                for name, m in self.models.items()
            },
        }
        names = list(self.models)
        deltas = {}
        for i in range(len(names)):
            for j in range(i + 1, len(names)):
                a, b = names[i], names[j]
                deltas[f"{a}_minus_{b}"] = (
                    self.models[a].accuracy_pct - self.models[b].accuracy_pct
                )
        out["accuracy_delta_pct"] = deltas
        return out

    def to_table(self) -> str:
        header = f"{'model':<10} {'mae_x (m)':>10} {'mae_y (m)':>10} {'err_x %':>8} {'err_y %':>8} {'accuracy %':>10} {'fail':>5}"
        lines = [
            f"accuracy evaluation: sigma={self.sigma} dB, trials={self.trials}, seed={self.seed}",
            header,
            "-" * len(header),
        ]
        for name, m in self.models.items():
            lines.append(
                f"{name:<10} {m.mae_x:>10.4f} {m.mae_y:>10.4f} {m.pct_err_x:>8.2f} "
                f"{m.pct_err_y:>8.2f} {m.accuracy_pct:>10.2f} {m.failures:>5d}"
            )
        return "\n".join(lines) + "\n"


def run_accuracy_eval(config: SimConfig, models_under_test: dict[str, object]) -> AccuracyReport:
    """Monte Carlo localization error for each model under one noise level.

    Each trial draws a uniform true position inside the plan bounds,
    synthesizes one RSSI vector at the configured sigma and localizes it
    with every model; errors accumulate in fixed trial order. Percent
    errors are relative to the axis extents of the bounds. Localization
    failures are counted per model instead of aborting the run.
    """
    rng = random.Random(config.seed)
    layout = config.plan.beacons
    w, h = config.plan.bounds
    sums = {name: [0.0, 0.0, 0] for name in models_under_test}  # [sum|ex|, sum|ey|, failures]
    for _ in range(config.trials):
        tx = rng.uniform(0.0, w)
        ty = rng.uniform(0.0, h)
        vector = synthesize_rssi_vector(layout, (tx, ty), config.radio, config.noise_sigma, rng)
        for name, model in models_under_test.items():
            try:
                estimate = trilaterate(layout, vector, model)
            except AmieError:
                sums[name][2] += 1
                continue
            ex, ey = estimate.position[0] - tx, estimate.position[1] - ty
            sums[name][0] += abs(ex)
            sums[name][1] += abs(ey)

    results = {}
    for name, (sx, sy, failures) in sums.items():
        ok = config.trials - failures
        mae_x = sx / ok if ok else float("nan")
        mae_y = sy / ok if ok else float("nan")
        pct_x = mae_x / w * 100.0
        pct_y = mae_y / h * 100.0
        results[name] = ModelAccuracy(
            mae_x=mae_x,
            mae_y=mae_y,
            pct_err_x=pct_x,
            pct_err_y=pct_y,
            accuracy_pct=100.0 - (pct_x + pct_y) / 2.0,
            failures=failures,
        )
    return AccuracyReport(
        sigma=config.noise_sigma, seed=config.seed, trials=config.trials, models=results
    )

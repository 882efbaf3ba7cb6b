"""Control-unit service: request routing and stream transports.

Clients speak newline-delimited JSON frames over TCP, or the identical
frames over a WebSocket endpoint for browsers. Each connection owns an
isolated session; the shared floor plan is immutable and simulator
commands are serialized through one lock.
"""

from __future__ import annotations

import asyncio
import logging
import math
import signal

from websockets.asyncio.server import serve as ws_serve

from .errors import AmieError, ProtocolError, SimDisabledError
from .floorplan import (
    Direction,
    FloorPlan,
    Point,
    UserPose,
    drop_reached_waypoint,
    emergency_route,
    nearest_poi,
    next_direction,
    plan_route,
    plan_to_dict,
)
from .messages import format_number, render_message
from .positioning import trilaterate
from .protocol import (
    Request,
    Response,
    decode_frame,
    error_response,
    ok_response,
    request_kind_of,
)
from .simkit import SensorBus, Simulator, poll_sensor_bus, room_occupancy
from .weather import WeatherProvider, fetch_weather, stub_provider

log = logging.getLogger("amie.service")

DEFAULT_TCP_PORT = 7007
DEFAULT_WS_PORT = 7008

# Position changes smaller than this do not re-estimate heading.
HEADING_EPSILON = 0.05

# Heading assumed for a session before any movement is observed:
# along the corridor axis, matching the node-1-at-origin orientation.
DEFAULT_HEADING = math.pi / 2


class ActiveNavigation:
    def __init__(self, dest: str, waypoints: list[Point], heading: float):
        self.dest = dest
        self.waypoints = waypoints
        self.heading = heading


class SessionContext:
    """Per-connection state: at most one active navigation at a time."""

    def __init__(self, default_lang: str = "en"):
        self.default_lang = default_lang
        self.nav: ActiveNavigation | None = None
        self.last_position: Point | None = None


class AmbientService:
    """Decodes frames, routes them to the domain modules and renders replies."""

    def __init__(
        self,
        plan: FloorPlan,
        model,
        simulator: Simulator | None = None,
        weather: WeatherProvider = stub_provider,
        default_lang: str = "en",
    ):
        self.plan = plan
        self.model = model
        self.sim = simulator
        self.bus: SensorBus = (
            simulator.state.sensors
            if simulator is not None
            else SensorBus(rooms={p.key: 23.5 for p in plan.pois})
        )
        self.weather = weather
        self.default_lang = default_lang
        self._sim_lock = asyncio.Lock()

    def new_session(self) -> SessionContext:
        return SessionContext(self.default_lang)

    async def process_line(self, line: str, ctx: SessionContext) -> Response:
        """One response per received line, no matter how broken the line is."""
        try:
            request = decode_frame(line, layout=self.plan.beacons, default_lang=ctx.default_lang)
        except ProtocolError as exc:
            return error_response(request_kind_of(line), exc.code, str(exc))
        return await self.handle_request(request, ctx)

    async def handle_request(self, request: Request, ctx: SessionContext) -> Response:
        try:
            handler = getattr(self, "_handle_" + request.kind.replace(".", "_"))
            return await handler(request, ctx)
        except AmieError as exc:
            return error_response(request.kind, exc.code, str(exc))
        except Exception:
            log.exception("unhandled error for %s request", request.kind)
            return error_response(request.kind, "internal", "internal error")

    def _localize(self, request: Request, ctx: SessionContext):
        estimate = trilaterate(self.plan.beacons, request.rssi, self.model)
        ctx.last_position, previous = estimate.position, ctx.last_position
        return estimate, previous

    async def _handle_locate(self, request: Request, ctx: SessionContext) -> Response:
        estimate, _ = self._localize(request, ctx)
        x, y = estimate.position
        poi = nearest_poi(estimate.position, self.plan)
        message = render_message("locate", request.lang, poi=poi.name(request.lang))
        return ok_response("locate", message, {"x": round(x, 6), "y": round(y, 6), "poi": poi.key})

    async def _handle_navigate(self, request: Request, ctx: SessionContext) -> Response:
        estimate, previous = self._localize(request, ctx)
        position = estimate.position
        poi = self.plan.poi(request.dest)

        nav = ctx.nav
        if nav is None or nav.dest != request.dest:
            nav = ActiveNavigation(
                dest=request.dest,
                waypoints=plan_route(self.plan, position, request.dest),
                heading=DEFAULT_HEADING,
            )
            ctx.nav = nav
        elif previous is not None:
            dx = position[0] - previous[0]
            dy = position[1] - previous[1]
            if math.hypot(dx, dy) > HEADING_EPSILON:
                nav.heading = math.atan2(dy, dx)

        nav.waypoints = drop_reached_waypoint(position, nav.waypoints)
        direction = next_direction(UserPose(position, nav.heading), nav.waypoints, poi.anchor)
        if direction is Direction.ARRIVED:
            ctx.nav = None
        elif direction is not Direction.FORWARD:
            wx, wy = nav.waypoints[0]
            nav.heading = math.atan2(wy - position[1], wx - position[0])

        data = {
            "x": round(position[0], 6),
            "y": round(position[1], 6),
            "dest": request.dest,
            "direction": direction.value,
            "remaining": len(nav.waypoints),
        }
        return ok_response("navigate", render_message(direction, request.lang), data)

    async def _handle_emergency(self, request: Request, ctx: SessionContext) -> Response:
        estimate, _ = self._localize(request, ctx)
        origin = estimate.position
        # The triggering location goes to the operator log before anything else.
        log.info("emergency evacuation requested at x=%.3f y=%.3f", origin[0], origin[1])
        route, _ = emergency_route(self.plan, origin)
        heading = ctx.nav.heading if ctx.nav is not None else DEFAULT_HEADING
        ctx.nav = ActiveNavigation(dest=self.plan.exit_poi, waypoints=list(route), heading=heading)
        data = {
            "origin": {"x": round(origin[0], 6), "y": round(origin[1], 6)},
            "dest": self.plan.exit_poi,
            "route": [[round(x, 6), round(y, 6)] for x, y in route],
        }
        return ok_response("emergency", render_message("emergency", request.lang), data)

    async def _handle_temperature(self, request: Request, ctx: SessionContext) -> Response:
        readings = poll_sensor_bus(self.bus, request.room)
        message = render_message(
            "temperature", request.lang, temperature=format_number(readings.temperature_c)
        )
        data = {
            "room": request.room,
            "temperature_c": readings.temperature_c,
            "stale": readings.temperature_stale,
            "motions": [{"triggered": m.triggered, "stale": m.stale} for m in readings.motions],
        }
        return ok_response("temperature", message, data)

    async def _handle_occupancy(self, request: Request, ctx: SessionContext) -> Response:
        occupied = room_occupancy(self.bus, request.room, now=self.bus.clock)
        message = render_message("occupied" if occupied else "empty", request.lang)
        return ok_response("occupancy", message, {"room": request.room, "occupied": occupied})

    async def _handle_weather(self, request: Request, ctx: SessionContext) -> Response:
        info = await fetch_weather(self.weather, request.lang)
        data = {"condition": info.condition, "temperature_c": info.temperature_c}
        return ok_response("weather", info.advisory, data)

    def _require_sim(self) -> Simulator:
        if self.sim is None:
            raise SimDisabledError("simulator commands are disabled in live mode")
        return self.sim

    def _sim_snapshot(self, include_plan: bool = False) -> dict:
        sim = self._require_sim()
        user = sim.state.user
        data = {
            "tick": sim.state.tick,
            "x": round(user.position[0], 6),
            "y": round(user.position[1], 6),
            "heading": round(user.heading, 6),
            "rssi": {
                str(nid): round(value, 3)
                for nid, value in sorted(sim.last_rssi.readings.items())
            },
        }
        if include_plan:
            data["plan"] = plan_to_dict(self.plan)
        return data

    async def _handle_sim_move(self, request: Request, ctx: SessionContext) -> Response:
        sim = self._require_sim()
        async with self._sim_lock:
            sim.move(*request.move)
            data = self._sim_snapshot()
        return ok_response("sim.move", render_message("sim_move", request.lang), data)

    async def _handle_sim_state(self, request: Request, ctx: SessionContext) -> Response:
        self._require_sim()
        async with self._sim_lock:
            data = self._sim_snapshot(include_plan=True)
        return ok_response("sim.state", render_message("sim_state", request.lang), data)


class AmbientServer:
    """TCP and WebSocket front ends sharing one AmbientService."""

    def __init__(
        self,
        service: AmbientService,
        host: str = "127.0.0.1",
        tcp_port: int = DEFAULT_TCP_PORT,
        ws_port: int = DEFAULT_WS_PORT,
    ):
        self.service = service
        self.host = host
        self.tcp_port = tcp_port
        self.ws_port = ws_port
        self._tcp_server: asyncio.AbstractServer | None = None
        self._ws_server = None

    async def _serve_tcp_client(self, reader: asyncio.StreamReader, writer: asyncio.StreamWriter):
        ctx = self.service.new_session()
        try:
            while True:
                line = await reader.readline()
                if not line:
                    break
                text = line.decode("utf-8", errors="replace").rstrip("\r\n")
                response = await self.service.process_line(text, ctx)
                writer.write(response.to_frame().encode("utf-8") + b"\n")
                await writer.drain()
        except (ConnectionResetError, BrokenPipeError):
            pass
        finally:
            writer.close()
            try:
                await writer.wait_closed()
            except (ConnectionResetError, BrokenPipeError):
                pass

    async def _serve_ws_client(self, connection):
        if connection.request.path != "/ws":
            await connection.close(code=1008, reason="unknown endpoint")
            return
        ctx = self.service.new_session()
        async for message in connection:
            text = message.decode("utf-8", errors="replace") if isinstance(message, bytes) else message
            response = await self.service.process_line(text, ctx)
            await connection.send(response.to_frame())

    async def start(self):
        self._tcp_server = await asyncio.start_server(
            self._serve_tcp_client, self.host, self.tcp_port
        )
        self._ws_server = await ws_serve(self._serve_ws_client, self.host, self.ws_port)
        log.info("serving tcp on %s:%d, ws on %s:%d/ws", self.host, self.tcp_port, self.host, self.ws_port)

    async def stop(self):
        if self._tcp_server is not None:
            self._tcp_server.close()
            await self._tcp_server.wait_closed()
        if self._ws_server is not None:
            self._ws_server.close()
            await self._ws_server.wait_closed()

    async def serve_forever(self):
        """Run until cancelled or interrupted, then close both listeners."""
        await self.start()
        stop = asyncio.Event()
        loop = asyncio.get_running_loop()
        for sig in (signal.SIGINT, signal.SIGTERM):
            try:
                loop.add_signal_handler(sig, stop.set)
            except NotImplementedError:
                pass
        try:
            await stop.wait()
        finally:
            await self.stop()

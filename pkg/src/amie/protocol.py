"""Wire protocol: newline-delimited JSON frames, one response per request.

Request frames carry a version tag ``v``, a ``type`` and kind-specific
fields. Malformed input never kills a connection; every defect maps to
a stable error code carried on the error response.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

from .errors import ProtocolError
from .positioning import NodeLayout, RssiVector

PROTOCOL_VERSION = 1

KINDS = (
    "locate",
    "navigate",
    "emergency",
    "temperature",
    "occupancy",
    "weather",
    "sim.move",
    "sim.state",
)

_REQUIRED_FIELDS = {
    "locate": ("rssi",),
    "navigate": ("rssi", "dest"),
    "emergency": ("rssi",),
    "temperature": ("room",),
    "occupancy": ("room",),
    "weather": (),
    "sim.move": ("move",),
    "sim.state": (),
}

RSSI_MIN = -120.0
RSSI_MAX = 0.0


@dataclass(frozen=True)
class Request:
    kind: str
    lang: str = "en"
    rssi: RssiVector | None = None
    dest: str | None = None
    room: str | None = None
    move: tuple[float, float] | None = None


@dataclass(frozen=True)
class Response:
    kind: str | None
    status: str = "ok"
    message: str = ""
    data: dict[str, Any] = field(default_factory=dict)
    error_code: str | None = None

    def to_frame(self) -> str:
        body: dict[str, Any] = {
            "v": PROTOCOL_VERSION,
            "status": self.status,
            "kind": self.kind,
            "message": self.message,
            "data": self.data,
        }
        if self.error_code is not None:
            body["error_code"] = self.error_code
        return json.dumps(body, ensure_ascii=False, sort_keys=True, separators=(",", ":"))


def ok_response(kind: str, message: str, data: dict[str, Any]) -> Response:
    return Response(kind=kind, status="ok", message=message, data=data)


def error_response(kind: str | None, code: str, message: str) -> Response:
    return Response(kind=kind, status="error", message=message, error_code=code)


def _parse_rssi(raw: Any, layout: NodeLayout | None) -> RssiVector:
    if not isinstance(raw, dict) or not raw:
        raise ProtocolError("bad_frame", "rssi must be a non-empty object of node readings")
    readings: dict[int, float] = {}
    for key, value in raw.items():
        try:
            node_id = int(key)
        except (TypeError, ValueError):
            raise ProtocolError("bad_frame", f"rssi key {key!r} is not a node id") from None
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise ProtocolError("bad_frame", f"rssi[{key}] is not a number")
        if not RSSI_MIN <= value <= RSSI_MAX:
            raise ProtocolError("bad_frame", f"rssi[{key}] out of dBm range [{RSSI_MIN}, {RSSI_MAX}]")
        if layout is not None and node_id not in layout.ids:
            raise ProtocolError("bad_frame", f"rssi names unknown node {node_id}")
        readings[node_id] = float(value)
    return RssiVector(readings=readings)


def _parse_move(raw: Any) -> tuple[float, float]:
    if not isinstance(raw, dict):
        raise ProtocolError("bad_frame", "move must be an object with dx and dy")
    try:
        dx, dy = raw["dx"], raw["dy"]
    except KeyError as exc:
        raise ProtocolError("bad_frame", f"move is missing {exc.args[0]}") from None
    for name, value in (("dx", dx), ("dy", dy)):
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise ProtocolError("bad_frame", f"move.{name} is not a number")
    return float(dx), float(dy)


def decode_frame(
    line: str,
    layout: NodeLayout | None = None,
    default_lang: str = "en",
) -> Request:
    """Parse one frame into a validated Request.

    ``layout``, when given, rejects RSSI readings naming unknown nodes.
    """
    try:
        raw = json.loads(line)
    except json.JSONDecodeError as exc:
        raise ProtocolError("bad_frame", f"frame is not valid JSON: {exc.msg}") from exc
    if not isinstance(raw, dict):
        raise ProtocolError("bad_frame", "frame must be a JSON object")
    if raw.get("v") != PROTOCOL_VERSION:
        raise ProtocolError("bad_frame", f"unsupported protocol version {raw.get('v')!r}")

    kind = raw.get("type")
    if kind is None:
        raise ProtocolError("missing_field:type", "frame has no type")
    if kind not in KINDS:
        raise ProtocolError("unknown_kind", f"unknown request type {kind!r}")

    lang = raw.get("lang", default_lang)
    if lang not in ("en", "ar"):
        raise ProtocolError("bad_frame", f"unsupported lang {lang!r}")

    for name in _REQUIRED_FIELDS[kind]:
        if name not in raw:
            raise ProtocolError(f"missing_field:{name}", f"{kind} requires field {name}")

    rssi = _parse_rssi(raw["rssi"], layout) if "rssi" in raw else None
    move = _parse_move(raw["move"]) if "move" in raw else None
    dest = raw.get("dest")
    room = raw.get("room")
    if dest is not None and not isinstance(dest, str):
        raise ProtocolError("bad_frame", "dest must be a string")
    if room is not None and not isinstance(room, str):
        raise ProtocolError("bad_frame", "room must be a string")

    return Request(kind=kind, lang=lang, rssi=rssi, dest=dest, room=room, move=move)


def request_kind_of(line: str) -> str | None:
    """Best-effort kind extraction for error responses to bad frames."""
    try:
        raw = json.loads(line)
    except json.JSONDecodeError:
        return None
    if isinstance(raw, dict) and isinstance(raw.get("type"), str):
        return raw["type"]
    return None

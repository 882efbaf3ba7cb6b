"""Service configuration: one JSON file shared by the CLI and AMIE_CONFIG."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path

from .errors import AmieError
from .floorplan import FloorPlan, load_floorplan, load_reference_plan
from .rfmodel import LogDistanceModel
from .service import DEFAULT_TCP_PORT, DEFAULT_WS_PORT

ENV_CONFIG = "AMIE_CONFIG"

# floorplan value resolving to the packaged corridor fixture
BUILTIN_PLAN = "builtin:auk-b-corridor"


class ConfigError(AmieError):
    code = "bad_config"


@dataclass(frozen=True)
class AppConfig:
    floorplan: str = BUILTIN_PLAN
    radio: LogDistanceModel = LogDistanceModel(rssi0=-59.0, d0=1.0, n=2.0)
    mode: str = "sim"
    tcp_port: int = DEFAULT_TCP_PORT
    ws_port: int = DEFAULT_WS_PORT
    weather: str = "stub"
    lang: str = "en"
    noise_sigma: float = 0.0
    seed: int = 0
    step_length: float = 2.0

    def load_plan(self) -> FloorPlan:
        if self.floorplan == BUILTIN_PLAN:
            return load_reference_plan()
        return load_floorplan(Path(self.floorplan).read_text("utf-8"))


def _check_port(name: str, value) -> int:
    if not isinstance(value, int) or isinstance(value, bool) or not 1 <= value <= 65535:
        raise ConfigError(f"{name}: invalid port {value!r}")
    return value


def load_app_config(path: str | os.PathLike) -> AppConfig:
    """Read and validate a configuration file; paths resolve from its folder."""
    path = Path(path)
    try:
        raw = json.loads(path.read_text("utf-8"))
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")

    defaults = AppConfig()
    floorplan = raw.get("floorplan", BUILTIN_PLAN)
    if floorplan != BUILTIN_PLAN:
        floorplan = str((path.parent / floorplan).resolve())
        if not Path(floorplan).is_file():
            raise ConfigError(f"floorplan: file not found: {floorplan}")

    radio_raw = raw.get("radio", {})
    try:
        radio = LogDistanceModel(
            rssi0=float(radio_raw.get("rssi0", defaults.radio.rssi0)),
            d0=float(radio_raw.get("d0", defaults.radio.d0)),
            n=float(radio_raw.get("n", defaults.radio.n)),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"radio: {exc}") from exc

    mode = raw.get("mode", defaults.mode)
    if mode not in ("live", "sim"):
        raise ConfigError(f"mode: must be live or sim, got {mode!r}")
    lang = raw.get("lang", defaults.lang)
    if lang not in ("en", "ar"):
        raise ConfigError(f"lang: must be en or ar, got {lang!r}")
    weather = raw.get("weather", defaults.weather)
    if weather != "stub" and not str(weather).startswith(("http://", "https://")):
        raise ConfigError(f"weather: must be 'stub' or an http(s) URL, got {weather!r}")

    noise_sigma = float(raw.get("noise_sigma", defaults.noise_sigma))
    if noise_sigma < 0:
        raise ConfigError("noise_sigma: must be non-negative")
    step_length = float(raw.get("step_length", defaults.step_length))
    if step_length <= 0:
        raise ConfigError("step_length: must be positive")

    return AppConfig(
        floorplan=floorplan,
        radio=radio,
        mode=mode,
        tcp_port=_check_port("tcp_port", raw.get("tcp_port", defaults.tcp_port)),
        ws_port=_check_port("ws_port", raw.get("ws_port", defaults.ws_port)),
        weather=str(weather),
        lang=lang,
        noise_sigma=noise_sigma,
        seed=int(raw.get("seed", defaults.seed)),
        step_length=step_length,
    )


def config_from_env() -> AppConfig:
    path = os.environ.get(ENV_CONFIG)
    if not path:
        raise ConfigError(f"no config path given and {ENV_CONFIG} is not set")
    return load_app_config(path)

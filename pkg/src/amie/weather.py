"""Outside-weather lookup behind a pluggable provider.

Providers are async callables returning ``{"condition": str,
"temperature_c": number}``. The default stub answers instantly from a
fixture; a URL provider fetches the same shape over HTTP. Lookups that
miss the deadline or return garbage surface as ``weather_unavailable``.
"""

from __future__ import annotations

import asyncio
from dataclasses import dataclass
from typing import Any, Awaitable, Callable

from .errors import WeatherUnavailableError
from .messages import condition_text, format_number, render_message

FETCH_DEADLINE = 3.0

WeatherProvider = Callable[[], Awaitable[dict]]

STUB_WEATHER = {"condition": "sunny", "temperature_c": 42}


@dataclass(frozen=True)
class WeatherInfo:
    condition: str
    temperature_c: float
    advisory: str


async def stub_provider() -> dict:
    return dict(STUB_WEATHER)


def url_provider(url: str) -> WeatherProvider:
    async def fetch() -> dict:
        import httpx

        async with httpx.AsyncClient() as client:
            response = await client.get(url, timeout=FETCH_DEADLINE)
            response.raise_for_status()
            return response.json()

    return fetch


async def fetch_weather(provider: WeatherProvider, lang: str = "en") -> WeatherInfo:
    """Query the provider within the deadline and render the advisory."""
    try:
        payload: Any = await asyncio.wait_for(provider(), timeout=FETCH_DEADLINE)
    except asyncio.TimeoutError:
        raise WeatherUnavailableError("weather provider missed the deadline") from None
    except Exception as exc:
        raise WeatherUnavailableError(f"weather provider failed: {exc}") from exc

    if not isinstance(payload, dict):
        raise WeatherUnavailableError("weather payload is not an object")
    condition = payload.get("condition")
    temperature = payload.get("temperature_c")
    if not isinstance(condition, str):
        raise WeatherUnavailableError("weather payload has no condition")
    if not isinstance(temperature, (int, float)) or isinstance(temperature, bool):
        raise WeatherUnavailableError("weather payload temperature is not numeric")

    advisory = render_message(
        "weather",
        lang,
        condition=condition_text(condition, lang),
        temperature=format_number(float(temperature)),
    )
    return WeatherInfo(condition=condition, temperature_c=float(temperature), advisory=advisory)

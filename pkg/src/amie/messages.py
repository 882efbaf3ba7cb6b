"""Bilingual response catalogue.

Every user-facing message the service can emit lives here, for both
English and Arabic. The direction strings are the fixed phrases the
deployment's voice responses were built from and must not be reworded;
entries below the directions block are service-defined.
"""

from __future__ import annotations

from .errors import AmieError
from .floorplan import Direction

LANGUAGES = ("en", "ar")

CATALOGUE: dict[str, dict[str, str]] = {
    # direction phrases (keys match Direction values)
    "forward": {"en": "Move Forward", "ar": "تحرك الى الامام"},
    "turn_left": {"en": "Turn Left", "ar": "تحرك الى اليسار"},
    "turn_right": {"en": "Turn Right", "ar": "تحرك الى اليمين"},
    "turn_around": {"en": "Turn Around", "ar": "استدر للخلف"},
    "arrived": {
        "en": "You have reached your destination",
        "ar": "لقد وصلت الى المكان المطلوب",
    },
    # payload messages
    "locate": {"en": "You are near {poi}", "ar": "أنت بالقرب من {poi}"},
    "emergency": {
        "en": "Emergency! Follow the directions to the exit",
        "ar": "حالة طوارئ! اتبع التعليمات الى المخرج",
    },
    "temperature": {
        "en": "The room temperature is {temperature} degrees",
        "ar": "درجة حرارة الغرفة {temperature} درجة",
    },
    "occupied": {"en": "The room is occupied", "ar": "الغرفة مشغولة"},
    "empty": {"en": "The room is empty", "ar": "الغرفة فارغة"},
    "weather": {
        "en": "{condition}, {temperature} degrees outside",
        "ar": "الطقس {condition} ودرجة الحرارة {temperature} في الخارج",
    },
    "sim_move": {"en": "Position updated", "ar": "تم تحديث الموقع"},
    "sim_state": {"en": "Simulation state", "ar": "حالة المحاكاة"},
}

# Weather condition tokens with translations; unknown tokens pass through.
CONDITIONS: dict[str, dict[str, str]] = {
    "sunny": {"en": "Sunny", "ar": "مشمس"},
    "cloudy": {"en": "Cloudy", "ar": "غائم"},
    "rainy": {"en": "Rainy", "ar": "ممطر"},
    "windy": {"en": "Windy", "ar": "عاصف"},
    "dusty": {"en": "Dusty", "ar": "مغبر"},
}


def format_number(value: float) -> str:
    """Compact numeric rendering for message text: 42, 23.5."""
    return f"{value:g}"


def condition_text(token: str, lang: str) -> str:
    entry = CONDITIONS.get(token.lower())
    if entry is None:
        return token
    return entry[lang]


def render_message(entry: Direction | str, lang: str, **params: str) -> str:
    """Catalogue string for a direction or payload kind in one language."""
    key = entry.value if isinstance(entry, Direction) else entry
    try:
        template = CATALOGUE[key][lang]
    except KeyError:
        raise AmieError(f"no catalogue entry for {key!r}/{lang!r}") from None
    return template.format(**params)

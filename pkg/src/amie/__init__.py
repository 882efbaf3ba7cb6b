"""Assisted-living indoor positioning, navigation and ambient sensing.

The package couples a BLE-RSSI localization pipeline and turn-by-turn
navigation with a bilingual request/response service, backed by a
deterministic radio and sensor simulator instead of hardware.
"""

__version__ = "0.1.0"

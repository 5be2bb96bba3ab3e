from dataclasses import fields, replace
from typing import Any, Callable, Optional

from fetcam.device.fefet import FeFetParams
from fetcam.device.presets import dg14, sg14
from fetcam.device_types import DeviceError

# A list of all built-in device presets.
all_presets: list[Callable[[], FeFetParams]] = [sg14, dg14]

# A map of preset name to preset builder.
preset_map = {}
for preset in all_presets:
    preset_map[preset.__name__] = preset


def initialize_preset(name: str, overrides: Optional[dict[str, Any]] = None) -> FeFetParams:
    """Build a named device preset, applying any field overrides."""
    if name not in preset_map:
        raise DeviceError(f"Device preset '{name}' not found")

    params = preset_map[name]()
    if not overrides:
        return params

    known_fields = {field.name for field in fields(FeFetParams)}
    for key in overrides:
        if key not in known_fields or key == "device_kind":
            raise DeviceError(f"Device field '{key}' cannot be overridden")

    return replace(params, **{key: float(value) for key, value in overrides.items()})

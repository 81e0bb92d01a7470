import logging
from typing import Dict, List, Optional

from photodetect.errors import ConfigError
from photodetect.models import EmitterEntry, RunConfig, ScanEntry, ScanPlane

logger = logging.getLogger(__name__)

DEFAULT_SEPARATION = 3.0
Z_MOMENT = ((0.0, 0.0), (0.0, 0.0), (1.0, 0.0))

PRESETS: Dict[str, Dict] = {
    "fig2a": {
        "description": "In-phase z-dipole pair at +/-1.5 wavelengths on x, xz-plane scan",
        "plane": ScanPlane.XZ,
        "separation": DEFAULT_SEPARATION,
    },
    "fig2b": {
        "description": "In-phase z-dipole pair at +/-1.5 wavelengths on x, xy-plane scan",
        "plane": ScanPlane.XY,
        "separation": DEFAULT_SEPARATION,
    },
    "pair": {
        "description": "In-phase z-dipole pair on x with adjustable separation, xy-plane scan",
        "plane": ScanPlane.XY,
        "separation": DEFAULT_SEPARATION,
    },
    "single": {
        "description": "One z-dipole at the origin, xy-plane scan",
        "plane": ScanPlane.XY,
        "separation": None,
    },
}


def pair_emitters(separation: float) -> List[EmitterEntry]:
    half = 0.5 * separation
    return [
        EmitterEntry(position=(half, 0.0, 0.0), moment=Z_MOMENT),
        EmitterEntry(position=(-half, 0.0, 0.0), moment=Z_MOMENT),
    ]


def preset_config(name: str, separation: Optional[float] = None) -> RunConfig:
    """Run configuration for a named preset.

    ``separation`` (in wavelengths) only applies to the ``pair`` preset; the
    fig2a and fig2b presets are fixed at three wavelengths.
    """
    preset = PRESETS.get(name)
    if preset is None:
        raise ConfigError(f"unknown preset {name!r}; choose from {', '.join(sorted(PRESETS))}", field="preset")
    if separation is not None and name != "pair":
        raise ConfigError(f"preset {name!r} has a fixed geometry", field="separation")

    if preset["separation"] is None:
        emitters = [EmitterEntry(position=(0.0, 0.0, 0.0), moment=Z_MOMENT)]
    else:
        d = preset["separation"] if separation is None else separation
        if d < 0:
            raise ConfigError("separation must be non-negative", field="separation")
        emitters = pair_emitters(d)

    return RunConfig(emitters=emitters, scan=ScanEntry(plane=preset["plane"]))


def list_presets() -> List[Dict]:
    return [
        {
            "name": name,
            "description": preset["description"],
            "plane": preset["plane"].value,
            "separation": preset["separation"],
        }
        for name, preset in PRESETS.items()
    ]

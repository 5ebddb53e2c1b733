"""Catalog of Meshtastic modem presets and transmit power levels.

Every other module speaks in terms of these presets, so the catalog is
immutable and importable everywhere without side effects.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class ModemPreset:
    """One named (SF, BW, CR) combination.

    ``cr_denominator`` is the d in a 4/d coding rate (5 or 8).
    """

    name: str
    sf: int
    bw_hz: int
    cr_denominator: int
    target: str
    is_default: bool = False

    def __post_init__(self) -> None:
        if not 7 <= self.sf <= 12:
            raise ValueError(f"spreading factor out of range: {self.sf}")
        if self.bw_hz not in (125_000, 250_000, 500_000):
            raise ValueError(f"unsupported bandwidth: {self.bw_hz} Hz")
        if self.cr_denominator not in (5, 8):
            raise ValueError(f"unsupported coding rate 4/{self.cr_denominator}")

    @property
    def cr(self) -> str:
        return f"4/{self.cr_denominator}"


@dataclass(frozen=True)
class TxPowerLevel:
    """Qualitative transmit power level with its effective dBm value."""

    label: str
    dbm: float


# The eight modem presets, in catalog order (fastest to longest range).
PRESETS: tuple[ModemPreset, ...] = (
    ModemPreset("ShortTurbo", sf=7, bw_hz=500_000, cr_denominator=5, target="High Speed"),
    ModemPreset("ShortFast", sf=7, bw_hz=250_000, cr_denominator=5, target="Balanced Local"),
    ModemPreset("ShortSlow", sf=8, bw_hz=250_000, cr_denominator=5, target="Balanced Fast"),
    ModemPreset("MediumFast", sf=9, bw_hz=250_000, cr_denominator=5, target="Balanced Mesh"),
    ModemPreset("MediumSlow", sf=10, bw_hz=250_000, cr_denominator=5, target="Robust Mesh"),
    ModemPreset("LongFast", sf=11, bw_hz=250_000, cr_denominator=5, target="Default Range", is_default=True),
    ModemPreset("LongModerate", sf=11, bw_hz=125_000, cr_denominator=8, target="High Range"),
    ModemPreset("LongSlow", sf=12, bw_hz=125_000, cr_denominator=8, target="Maximum Range"),
)

# The SX1262 saturates at +21 dBm regardless of what the firmware UI offers;
# Low/Medium are configurable conventions, Max is the hardware ceiling.
TX_POWER_LEVELS: tuple[TxPowerLevel, ...] = (
    TxPowerLevel("Low", 10.0),
    TxPowerLevel("Medium", 17.0),
    TxPowerLevel("Max", 21.0),
)

TX_MAX_DBM = 21.0


def _canonical(name: str) -> str:
    return name.replace("_", "").replace("-", "").replace(" ", "").lower()


_PRESET_INDEX = {_canonical(p.name): p for p in PRESETS}
_POWER_INDEX = {_canonical(lv.label): lv for lv in TX_POWER_LEVELS}
_POWER_INDEX["med"] = _POWER_INDEX["medium"]


def preset_catalog() -> tuple[ModemPreset, ...]:
    """Return the eight presets in catalog order."""
    return PRESETS


def preset_by_name(name: str) -> ModemPreset:
    """Look up a preset by name, tolerating case and spacing variants.

    "LongSlow", "long_slow", "long-slow" and "Long Slow" all resolve to the
    same entry.
    """
    try:
        return _PRESET_INDEX[_canonical(name)]
    except KeyError:
        valid = ", ".join(p.name for p in PRESETS)
        raise ValueError(f"unknown preset {name!r}; valid presets: {valid}") from None


def power_by_name(label: str) -> TxPowerLevel:
    """Look up a transmit power level ("Low", "Medium"/"Med", "Max")."""
    try:
        return _POWER_INDEX[_canonical(label)]
    except KeyError:
        valid = ", ".join(lv.label for lv in TX_POWER_LEVELS)
        raise ValueError(f"unknown power level {label!r}; valid levels: {valid}") from None


def preset_to_dict(preset: ModemPreset) -> dict:
    return {
        "name": preset.name,
        "sf": preset.sf,
        "bw_hz": preset.bw_hz,
        "cr_denominator": preset.cr_denominator,
        "target": preset.target,
        "is_default": preset.is_default,
    }


def catalog_to_json() -> list[dict]:
    """Catalog as a JSON-ready array of objects."""
    return [preset_to_dict(p) for p in PRESETS]
